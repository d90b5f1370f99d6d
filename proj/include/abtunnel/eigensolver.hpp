#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "abtunnel/kernels.hpp"
#include "abtunnel/lattice.hpp"

namespace abtunnel {

enum class Preconditioner {
    none,
    diagonal,   // 1 / (diag + shift)
    laplacian,  // (c (-Delta) + tau)^{-1} by fast sine transforms
};

struct LobpcgOptions {
    int max_iter = 4000;
    std::uint64_t seed = 20261015;
    // Added to H while iterating; negative means |min V|.
    double shift = -1.0;
    Preconditioner precond = Preconditioner::laplacian;
    bool parallel = true;
    int extra = 4;  // block size is k + extra
    bool throw_on_failure = true;
    // Called once per iteration with the largest of the k lowest residuals.
    std::function<void(int, double)> progress;
};

struct LatticeEigenpairs {
    std::vector<double> eigenvalues;  // of H, ascending
    std::vector<double> residuals;    // ||H u - lambda u||, ||u|| = 1, recomputed explicitly
    CBlock vectors;
    int iterations = 0;
    bool converged = false;
};

// k smallest eigenpairs of the lattice Hamiltonian by preconditioned block
// Rayleigh quotient minimization (LOBPCG) with SVQB orthonormalization.
// Converged when the k lowest residuals are below tol. Deterministic for a
// fixed seed.
LatticeEigenpairs solve_lowest_k(const SparseHermitian& H, int k, double tol, const LobpcgOptions& opt = {});

}  // namespace abtunnel
