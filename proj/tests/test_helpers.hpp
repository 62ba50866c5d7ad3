#pragma once

#include <doctest.h>

#include <complex>
#include <vector>

#include "wforge/rng.hpp"
#include "wforge/tensor.hpp"

namespace wtest {

using namespace wforge;

// Random mixed state from a complex Gaussian Ginibre matrix.
inline DensityMatrix random_density(int n, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dimension_for_qubits(n));
  MatrixXc g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = {rng.normal(), rng.normal()};
  MatrixXc rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline StateVector random_pure(int n, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dimension_for_qubits(n));
  StateVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = {rng.normal(), rng.normal()};
  return v.normalized();
}

inline StateVector basis(int n, std::uint64_t index) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(dimension_for_qubits(n)));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

// Full-matrix Tr(sigma rho) built from explicit Kronecker products; the
// independent oracle for the sparse expectation code.
inline double trace_oracle(const DensityMatrix& rho, const std::string& label) {
  MatrixXc op = MatrixXc::Ones(1, 1);
  for (char c : label) {
    Matrix2c m;
    switch (c) {
      case 'I': m << 1, 0, 0, 1; break;
      case 'X': m << 0, 1, 1, 0; break;
      case 'Y': m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0; break;
      default: m << 1, 0, 0, -1; break;
    }
    MatrixXc next(op.rows() * 2, op.cols() * 2);
    for (Eigen::Index i = 0; i < op.rows(); ++i)
      for (Eigen::Index j = 0; j < op.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = op(i, j) * m;
    op = next;
  }
  return (op * rho).trace().real();
}

inline StateVector ghz(int n) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(dimension_for_qubits(n)));
  v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace wtest
