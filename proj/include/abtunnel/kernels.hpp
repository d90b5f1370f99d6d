#pragma once

#include <Eigen/Dense>

#include <complex>

#include "abtunnel/lattice.hpp"

namespace abtunnel {

using CBlock = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;

// y = (H + shift) x for every column of x. The serial version is the
// reference; the OpenMP one splits lattice rows across threads and must
// agree with it bit for bit.
void apply_hamiltonian_serial(const SparseHermitian& H, const CBlock& x, CBlock& y, double shift = 0.0);
void apply_hamiltonian_omp(const SparseHermitian& H, const CBlock& x, CBlock& y, double shift = 0.0);

}  // namespace abtunnel
