#include <benchmark/benchmark.h>

#include "abtunnel/kernels.hpp"
#include "abtunnel/lattice.hpp"

using namespace abtunnel;

namespace {

// Double well at L = 2.5 with m cells per half pole distance.
SparseHermitian make_operator(int m)
{
    const WellPairConfig cfg = make_well_pair(make_bump_well(-1.0, 1.0), 2.5, flux_params(0.575, 0.25));
    const Lattice2D lat = make_double_well_lattice(cfg, m);
    return assemble_hamiltonian(lat, make_link_field(lat, cfg.flux.alpha, cfg.flux.h), cfg.flux.h);
}

template <void (*Apply)(const SparseHermitian&, const CBlock&, CBlock&, double)>
void BM_apply(benchmark::State& state)
{
    const SparseHermitian H = make_operator(static_cast<int>(state.range(0)));
    const CBlock x = CBlock::Random(static_cast<Eigen::Index>(H.dimension()), 8);
    CBlock y(x.rows(), x.cols());
    for (auto _ : state) {
        Apply(H, x, y, 0.0);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x.size()));
}

}  // namespace

BENCHMARK(BM_apply<apply_hamiltonian_serial>)->Name("apply/serial")->Arg(30)->Arg(57)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_apply<apply_hamiltonian_omp>)->Name("apply/openmp")->Arg(30)->Arg(57)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
