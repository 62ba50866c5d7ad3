#pragma once

// Dense complex linear algebra for qubit registers.
//
// Conventions: qubit 1 is the leftmost tensor factor, i.e. the most significant
// bit of a computational-basis index. Qubit indices in the public interface are
// 1-based. Everything here is a pure function of its inputs.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "wforge/error.hpp"
#include "wforge/pauli.hpp"

namespace wforge {

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using CMatrix2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

using MatrixXc = CMatrix<double>;
using VectorXc = CVector<double>;
using Matrix2c = CMatrix2<double>;

// Hermitian, unit-trace, PSD; checked by check_density_matrix.
using DensityMatrix = MatrixXc;
// Unit-norm amplitude vector of length 2^N.
using StateVector = VectorXc;

inline constexpr int kDefaultMaxQubits = 6;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-8;
inline constexpr double kUnitaryTol = 1e-9;

inline int qubits_for_dimension(Eigen::Index dim) {
  if (dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim)))
    throw InvalidInput("dimension " + std::to_string(dim) + " is not a power of two >= 2");
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

inline std::uint64_t dimension_for_qubits(int n_qubits) { return std::uint64_t{1} << n_qubits; }

template <typename Scalar = double>
CMatrix2<Scalar> pauli_matrix(Pauli p) {
  using C = std::complex<Scalar>;
  CMatrix2<Scalar> m;
  switch (p) {
    case Pauli::I: m << C(1), C(0), C(0), C(1); break;
    case Pauli::X: m << C(0), C(1), C(1), C(0); break;
    case Pauli::Y: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case Pauli::Z: m << C(1), C(0), C(0), C(-1); break;
    default: throw InvalidInput("invalid Pauli symbol");
  }
  return m;
}

template <typename Scalar = double>
CMatrix2<Scalar> pauli_matrix(char symbol) {
  return pauli_matrix<Scalar>(pauli_from_char(symbol));
}

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using S = typename DerivedA::Scalar;
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Sparse action of a Pauli string: row r has its single nonzero at column
// r ^ flip, with value (-i)^{#Y} * (-1)^{popcount(r & sign)}.
struct PauliAction {
  std::uint64_t flip = 0;
  std::uint64_t sign = 0;
  int y_count = 0;

  explicit PauliAction(const PauliString& p) {
    const int n = p.size();
    for (int q = 1; q <= n; ++q) {
      const std::uint64_t bit = std::uint64_t{1} << (n - q);
      switch (p.at(q)) {
        case Pauli::I: break;
        case Pauli::X: flip |= bit; break;
        case Pauli::Y: flip |= bit; sign |= bit; ++y_count; break;
        case Pauli::Z: sign |= bit; break;
      }
    }
  }

  template <typename Scalar>
  std::complex<Scalar> global_phase() const {
    switch (y_count & 3) {
      case 0: return {1, 0};
      case 1: return {0, -1};
      case 2: return {-1, 0};
      default: return {0, 1};
    }
  }

  static bool odd(std::uint64_t x) { return (std::popcount(x) & 1) != 0; }
};

template <typename Scalar = double>
CMatrix<Scalar> operator_of(const PauliString& p, int max_qubits = kDefaultMaxQubits) {
  if (p.size() > max_qubits)
    throw ResourceError("Pauli string on " + std::to_string(p.size()) + " qubits exceeds limit of " +
                        std::to_string(max_qubits));
  const PauliAction act(p);
  const auto dim = static_cast<Eigen::Index>(dimension_for_qubits(p.size()));
  const auto phase = act.global_phase<Scalar>();
  CMatrix<Scalar> m = CMatrix<Scalar>::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto ru = static_cast<std::uint64_t>(r);
    m(r, static_cast<Eigen::Index>(ru ^ act.flip)) = PauliAction::odd(ru & act.sign) ? -phase : phase;
  }
  return m;
}

// Tr(sigma rho) summed over the one nonzero per row of sigma; the imaginary
// residue (zero for Hermitian rho) is discarded.
template <typename Derived>
typename Derived::RealScalar expectation(const Eigen::MatrixBase<Derived>& rho, const PauliString& p) {
  using Real = typename Derived::RealScalar;
  if (rho.rows() != rho.cols() || qubits_for_dimension(rho.rows()) != p.size())
    throw InvalidInput("density matrix dimension does not match Pauli string length");
  const PauliAction act(p);
  std::complex<Real> acc(0);
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    const auto ru = static_cast<std::uint64_t>(r);
    const auto v = rho(static_cast<Eigen::Index>(ru ^ act.flip), r);
    acc += PauliAction::odd(ru & act.sign) ? -v : v;
  }
  const Real value = (act.global_phase<Real>() * acc).real();
  if (std::abs(value) > Real(1) + Real(1e-9)) throw InvalidInput("expectation outside [-1, 1]; input is not a state");
  return value;
}

// <psi| sigma |psi>
template <typename Derived>
typename Derived::RealScalar expectation_pure(const Eigen::MatrixBase<Derived>& psi, const PauliString& p) {
  using Real = typename Derived::RealScalar;
  if (psi.cols() != 1 || qubits_for_dimension(psi.rows()) != p.size())
    throw InvalidInput("state dimension does not match Pauli string length");
  const PauliAction act(p);
  std::complex<Real> acc(0);
  for (Eigen::Index r = 0; r < psi.rows(); ++r) {
    const auto ru = static_cast<std::uint64_t>(r);
    const auto v = std::conj(psi(r)) * psi(static_cast<Eigen::Index>(ru ^ act.flip));
    acc += PauliAction::odd(ru & act.sign) ? -v : v;
  }
  return (act.global_phase<Real>() * acc).real();
}

template <typename Derived>
Eigen::Matrix<typename Derived::RealScalar, Eigen::Dynamic, 1> feature_vector(const Eigen::MatrixBase<Derived>& rho,
                                                                             const FeatureSet& features) {
  if (features.empty()) throw InvalidInput("feature set is empty");
  Eigen::Matrix<typename Derived::RealScalar, Eigen::Dynamic, 1> f(static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < features.size(); ++i) f(static_cast<Eigen::Index>(i)) = expectation(rho, features[i]);
  return f;
}

template <typename Derived>
Eigen::Matrix<typename Derived::RealScalar, Eigen::Dynamic, 1> feature_vector_pure(const Eigen::MatrixBase<Derived>& psi,
                                                                                  const FeatureSet& features) {
  if (features.empty()) throw InvalidInput("feature set is empty");
  Eigen::Matrix<typename Derived::RealScalar, Eigen::Dynamic, 1> f(static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < features.size(); ++i) f(static_cast<Eigen::Index>(i)) = expectation_pure(psi, features[i]);
  return f;
}

template <typename Derived>
CMatrix<typename Derived::RealScalar> projector(const Eigen::MatrixBase<Derived>& psi) {
  return psi * psi.adjoint();
}

template <typename Scalar = double>
CMatrix<Scalar> maximally_mixed(int n_qubits) {
  const auto dim = static_cast<Eigen::Index>(dimension_for_qubits(n_qubits));
  return CMatrix<Scalar>::Identity(dim, dim) / static_cast<Scalar>(dim);
}

// Reason the matrix fails the density-matrix invariants, if any.
template <typename Derived>
std::optional<std::string> check_density_matrix(const Eigen::MatrixBase<Derived>& rho, bool check_psd = true) {
  using Real = typename Derived::RealScalar;
  if (rho.rows() != rho.cols()) return "not square";
  try {
    qubits_for_dimension(rho.rows());
  } catch (const InvalidInput& e) {
    return std::string(e.what());
  }
  if (!rho.allFinite()) return "non-finite entries";
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > Real(kHermitianTol)) return "not Hermitian";
  if (std::abs(rho.trace() - std::complex<Real>(1)) > Real(kTraceTol)) return "trace differs from 1";
  if (check_psd) {
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -Real(kPsdTol)) return "not positive semidefinite";
  }
  return std::nullopt;
}

template <typename Derived>
void require_density_matrix(const Eigen::MatrixBase<Derived>& rho, bool check_psd = true) {
  if (auto err = check_density_matrix(rho, check_psd)) throw InvalidInput("invalid density matrix: " + *err);
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = kUnitaryTol) {
  if (u.rows() != u.cols()) return false;
  const auto eye = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(u.rows(), u.cols());
  return ((u * u.adjoint()) - eye).cwiseAbs().maxCoeff() <= tol;
}

// (1 - p) rho_e + p I / 2^N
template <typename Derived>
CMatrix<typename Derived::RealScalar> werner_state(const Eigen::MatrixBase<Derived>& rho_e,
                                                  typename Derived::RealScalar p) {
  using Real = typename Derived::RealScalar;
  if (!(p >= Real(0) && p <= Real(1))) throw InvalidInput("mixing fraction p must lie in [0, 1]");
  const int n = qubits_for_dimension(rho_e.rows());
  return (Real(1) - p) * rho_e + p * maximally_mixed<Real>(n);
}

// Basis index after exchanging qubits a and b (1-based) of an n-qubit index.
inline std::uint64_t swap_index_bits(std::uint64_t index, int a, int b, int n_qubits) {
  const int sa = n_qubits - a;
  const int sb = n_qubits - b;
  const std::uint64_t ba = (index >> sa) & 1u;
  const std::uint64_t bb = (index >> sb) & 1u;
  if (ba == bb) return index;
  return index ^ ((std::uint64_t{1} << sa) | (std::uint64_t{1} << sb));
}

// I^{(nu-1)} (x) SWAP (x) I^{(N-nu-1)}: exchanges qubits nu and nu+1.
template <typename Scalar = double>
CMatrix<Scalar> adjacent_swap(int nu, int n_qubits) {
  if (nu < 1 || nu >= n_qubits) throw InvalidInput("adjacent swap index out of range");
  const auto dim = static_cast<Eigen::Index>(dimension_for_qubits(n_qubits));
  CMatrix<Scalar> s = CMatrix<Scalar>::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    s(static_cast<Eigen::Index>(swap_index_bits(static_cast<std::uint64_t>(j), nu, nu + 1, n_qubits)), j) = 1;
  return s;
}

// Exchanges qubits a < b. Built from adjacent swaps: carry qubit a rightwards to
// b (S_a ... S_{b-1}) and bring the displaced qubits back (S_{b-2} ... S_a).
template <typename Scalar = double>
CMatrix<Scalar> swap_operator(int a, int b, int n_qubits) {
  if (n_qubits < 2 || a < 1 || b > n_qubits || a >= b)
    throw InvalidInput("swap operator needs 1 <= a < b <= N");
  const auto dim = static_cast<Eigen::Index>(dimension_for_qubits(n_qubits));
  CMatrix<Scalar> s = CMatrix<Scalar>::Identity(dim, dim);
  for (int nu = a; nu < b; ++nu) s = adjacent_swap<Scalar>(nu, n_qubits) * s;
  for (int nu = b - 2; nu >= a; --nu) s = adjacent_swap<Scalar>(nu, n_qubits) * s;
  return s;
}

// Same permutation as swap_operator applied to a vector, without the matrix.
template <typename Derived>
CVector<typename Derived::RealScalar> apply_swap(const Eigen::MatrixBase<Derived>& psi, int a, int b) {
  const int n = qubits_for_dimension(psi.rows());
  if (a < 1 || b > n || a >= b) throw InvalidInput("swap needs 1 <= a < b <= N");
  CVector<typename Derived::RealScalar> out(psi.rows());
  for (Eigen::Index j = 0; j < psi.rows(); ++j)
    out(static_cast<Eigen::Index>(swap_index_bits(static_cast<std::uint64_t>(j), a, b, n))) = psi(j);
  return out;
}

// U rho U^dagger
template <typename DerivedR, typename DerivedU>
CMatrix<typename DerivedR::RealScalar> conjugate_by(const Eigen::MatrixBase<DerivedR>& rho,
                                                   const Eigen::MatrixBase<DerivedU>& u) {
  if (u.rows() != rho.rows() || u.cols() != rho.cols()) throw InvalidInput("unitary dimension mismatch");
  if (!is_unitary(u)) throw InvalidInput("operator is not unitary within tolerance");
  return u * rho * u.adjoint();
}

}  // namespace wforge
