#include "abtunnel/kernels.hpp"

#include <stdexcept>

namespace abtunnel {

namespace {

using cplx = std::complex<double>;

// One lattice row of one column. Each output entry is formed in the same
// order in both drivers, so results are identical.
inline void stencil_row(const SparseHermitian& H, const cplx* x, cplx* y, int j, double shift)
{
    const int nx = H.nx, ny = H.ny;
    const double c = H.c;
    const std::size_t row = static_cast<std::size_t>(j) * nx;
    const cplx* ux = H.ux.data() + static_cast<std::size_t>(j) * (nx - 1);
    const cplx* uy_up = H.uy.data() + row;                 // (i,j) -> (i,j+1)
    const cplx* uy_dn = j > 0 ? H.uy.data() + row - nx : nullptr;  // (i,j-1) -> (i,j)
    for (int i = 0; i < nx; ++i) {
        const std::size_t a = row + i;
        cplx hop{0.0, 0.0};
        if (i > 0) hop += ux[i - 1] * x[a - 1];
        if (i + 1 < nx) hop += std::conj(ux[i]) * x[a + 1];
        if (j > 0) hop += uy_dn[i] * x[a - nx];
        if (j + 1 < ny) hop += std::conj(uy_up[i]) * x[a + nx];
        y[a] = (H.diag[a] + shift) * x[a] - c * hop;
    }
}

void check_shapes(const SparseHermitian& H, const CBlock& x, CBlock& y)
{
    if (static_cast<std::size_t>(x.rows()) != H.dimension())
        throw std::invalid_argument("apply_hamiltonian: block has the wrong row count");
    y.resize(x.rows(), x.cols());
}

}  // namespace

void apply_hamiltonian_serial(const SparseHermitian& H, const CBlock& x, CBlock& y, double shift)
{
    check_shapes(H, x, y);
    for (Eigen::Index k = 0; k < x.cols(); ++k)
        for (int j = 0; j < H.ny; ++j) stencil_row(H, x.col(k).data(), y.col(k).data(), j, shift);
}

void apply_hamiltonian_omp(const SparseHermitian& H, const CBlock& x, CBlock& y, double shift)
{
    check_shapes(H, x, y);
    const int cols = static_cast<int>(x.cols());
#pragma omp parallel for collapse(2) schedule(static)
    for (int k = 0; k < cols; ++k)
        for (int j = 0; j < H.ny; ++j) stencil_row(H, x.col(k).data(), y.col(k).data(), j, shift);
}

}  // namespace abtunnel
