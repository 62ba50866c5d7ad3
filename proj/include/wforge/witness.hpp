#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wforge/svm.hpp"
#include "wforge/tensor.hpp"

namespace wforge {

struct WitnessMetadata {
  std::string target;      // "GHZ", "W", or free text
  std::string provenance;  // e.g. "svm", "mso-adjusted", "rfe", "fixture"
  std::optional<std::uint64_t> seed;
  std::string config_digest;
};

// Linear witness sum_k c_k sigma_k over N qubits. The identity term is the bias.
struct Witness {
  int n_qubits = 0;
  std::map<PauliString, double> terms;
  WitnessMetadata metadata;

  double identity_coefficient() const;
  void set_identity_coefficient(double value);
  // Non-identity strings in canonical order.
  FeatureSet features() const;
  std::size_t term_count() const { return terms.size(); }
  // Throws on inconsistent string lengths or non-finite coefficients.
  void validate() const;
};

Witness make_witness(int n_qubits, const std::vector<std::pair<std::string, double>>& terms);

// sum_k c_k Tr(sigma_k rho) over the stored terms only.
double evaluate(const Witness& w, const DensityMatrix& rho);
double evaluate_pure(const Witness& w, const StateVector& psi);
// Feature-space evaluation for a feature vector that covers every term.
double evaluate_features(const Witness& w, const FeatureSet& features, const Eigen::VectorXd& values);

// Dense 2^N x 2^N operator sum_k c_k sigma_k.
MatrixXc witness_operator(const Witness& w);

Witness from_hyperplane(const Hyperplane& h, int n_qubits);
Hyperplane to_hyperplane(const Witness& w);

// 2^{N-2} I minus the permutation-summed Mermin terms: every arrangement of an
// even number of Y's among X's, signed -1 for 0 mod 4 Y's and +1 for 2 mod 4.
Witness mermin_witness(int n_qubits);

enum class ToleranceMethod { Scan, Analytic };

struct NoiseToleranceReport {
  double p_star = 0.0;
  ToleranceMethod method = ToleranceMethod::Analytic;
  double step = 0.0;
  double expectation_at_target = 0.0;
};

// Walks p = 0, step, 2 step, ... over Werner states of rho_e and reports the
// last p at which the witness is strictly negative.
NoiseToleranceReport noise_tolerance_scan(const Witness& w, const DensityMatrix& rho_e, double step = 0.001);
// Root of the affine map p -> Tr(W werner(rho_e, p)), clamped to [0, 1].
NoiseToleranceReport noise_tolerance_analytic(const Witness& w, const DensityMatrix& rho_e);

// Noise tolerance of the N-qubit W-state fidelity witness, 2^N / (N (2^N - 1)).
double fidelity_noise_tolerance(int n_qubits);

struct BiasTo {
  double value = 1.0;
};
struct MatchIdentityOf {
  const Witness* reference = nullptr;
};
using Normalization = std::variant<BiasTo, MatchIdentityOf>;

// Scales every coefficient by one positive factor so the identity coefficient
// hits the requested value.
Witness normalize(const Witness& w, const Normalization& convention);

struct CoefficientComparison {
  // 100 (c_w / c_ref - 1) for terms present in both witnesses.
  std::map<PauliString, double> percent_error;
  std::vector<PauliString> only_in_witness;
  std::vector<PauliString> only_in_reference;

  double max_abs_error() const;
};

// Both witnesses must already share the same identity coefficient.
CoefficientComparison percent_error_vs(const Witness& w, const Witness& reference, double identity_tol = 1e-9);

// Drops non-identity terms whose magnitude is below cutoff * identity
// coefficient (the cutoff is stated for witnesses normalized to bias 1).
Witness prune_by_cutoff(const Witness& w, double cutoff);

}  // namespace wforge
