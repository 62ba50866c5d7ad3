#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wforge/partition.hpp"
#include "wforge/rng.hpp"
#include "wforge/tensor.hpp"

namespace wforge {

enum class TargetKind { GHZ, W };
TargetKind parse_target_kind(const std::string& name);
std::string to_string(TargetKind kind);

enum class SampleOrigin { Eigenstate, Perturbed, Werner, DirichletMixed };
std::string to_string(SampleOrigin origin);
SampleOrigin parse_sample_origin(const std::string& name);

inline constexpr int kSeparableLabel = +1;
inline constexpr int kEntangledLabel = -1;

struct LabeledSample {
  Eigen::VectorXd features;
  int label = kSeparableLabel;
  SampleOrigin origin = SampleOrigin::Eigenstate;
};

struct TrainingSet {
  int n_qubits = 0;
  FeatureSet features;
  std::vector<LabeledSample> samples;
  std::uint64_t seed = 0;

  std::size_t count(int label) const;
  std::size_t count(SampleOrigin origin) const;
  // Throws unless every sample matches the feature set length and both labels occur.
  void validate_for_training() const;
};

// Single-qubit eigenstates in the order X+, X-, Y+, Y-, Z+, Z-.
std::vector<VectorXc> single_qubit_eigenstates();

// All 6^N product eigenstates of Pauli strings. Enumeration index digits (base 6)
// select the factor of each qubit, qubit 1 most significant.
std::vector<StateVector> pauli_eigenstates(int n_qubits);

// Per-qubit factors H_i of the local perturbation.
std::vector<Matrix2c> perturbation_factors(int n_qubits, double sigma, Rng& rng);
// H = (x)_i H_i.
MatrixXc perturbation_unitary(int n_qubits, double sigma, Rng& rng);

// Product-state factors of each separable training state: every eigenstate is
// followed by `extras` perturbed copies. Eigenstate i draws from rng.derive(i).
std::vector<std::vector<VectorXc>> separable_training_factors(int n_qubits, int extras, double sigma, const Rng& rng);
std::vector<StateVector> separable_training_states(int n_qubits, int extras, double sigma, const Rng& rng);

// Werner states at p_j = p_max * j / (count - 1); a single state sits at p_max.
std::vector<DensityMatrix> entangled_training_states(const DensityMatrix& rho_e, int count = 1000, double p_max = 0.25);
std::vector<double> werner_grid(int count, double p_max);

StateVector target_state(TargetKind kind, int n_qubits);

std::vector<double> dirichlet_weights(double alpha, int count, Rng& rng);

// Haar-random pure state of each part, arranged per spec.
StateVector random_kseparable_pure(int n_qubits, const PermutationSpec& spec, Rng& rng);

// Arrangements used for separable test states: the permutation table for N
// (when one exists) plus the fully separable arrangement.
std::vector<PermutationSpec> test_arrangements(int n_qubits);

// Each state mixes 2^N random k-separable pure states with Dir(alpha) weights.
// Sample i draws from rng.derive(i).
std::vector<DensityMatrix> separable_test_states(int n_qubits, int count, double alpha, const Rng& rng, int threads = 1);
DensityMatrix separable_test_state(int n_qubits, double alpha, const std::vector<PermutationSpec>& arrangements, Rng& rng);

struct TrainingDataConfig {
  int extras_per_eigenstate = 5;
  double sigma = 0.05;
  int entangled_count = 1000;
  double p_max = 0.25;
};

// Separable samples (eigenstates + perturbed neighbours, label +1) followed by
// Werner samples of the target (label -1), featurized over `features`.
TrainingSet build_training_set(TargetKind target, int n_qubits, const FeatureSet& features,
                               const TrainingDataConfig& cfg, std::uint64_t seed, int threads = 1);

// Expectation of a Pauli string on a product state given by its factors.
double product_expectation(const std::vector<VectorXc>& factors, const PauliString& p);

}  // namespace wforge
