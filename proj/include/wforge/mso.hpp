#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wforge/partition.hpp"
#include "wforge/rng.hpp"
#include "wforge/witness.hpp"

namespace wforge {

// Biseparable arrangements for N qubits, each repeated copies() times.
struct PartitionCatalog {
  int n_qubits = 0;
  std::vector<PermutationSpec> entries;

  // A: number of pure-state slots.
  int total_slots() const;
};

PartitionCatalog build_catalog(int n_qubits);

// Offsets into the flat raw parameter vector. Every slot stores, per part of
// size nu, 2^nu magnitudes x followed by 2^nu - 1 phases theta. The A mixing
// parameters y come last.
struct SlotLayout {
  std::size_t entry = 0;
  std::size_t offset = 0;
  std::size_t size = 0;
};

struct ParameterLayout {
  PartitionCatalog catalog;
  std::vector<SlotLayout> slots;
  std::size_t mixing_offset = 0;
  std::size_t size = 0;

  const PermutationSpec& spec(std::size_t slot) const { return catalog.entries[slots[slot].entry]; }
};

ParameterLayout make_layout(const PartitionCatalog& catalog);

// Parameters needed per slot for a spec: sum over parts of 2^nu + 2^nu - 1.
std::size_t slot_parameter_count(const PermutationSpec& spec);
std::size_t raw_parameter_count(int n_qubits);

// Bound on the optimizer's memory load in bytes:
// 2^{2N+2} (N-1)! / sqrt(3) * exp(pi sqrt(2N/3)).
double estimate_memory_bytes(int n_qubits);

// k_i = x_i^2 / sqrt(sum_j x_j^4), so sum k_i^2 = 1.
Eigen::VectorXd constrain_magnitudes(const Eigen::Ref<const Eigen::VectorXd>& x);
// p_i = y_i^2 / sum_j y_j^2.
Eigen::VectorXd constrain_weights(const Eigen::Ref<const Eigen::VectorXd>& y);

// Part amplitudes (k_0, k_1 e^{i theta_1}, ...) from x and theta.
VectorXc part_state(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& theta);

// Pure state of one slot; `slot_params` holds exactly that slot's block.
StateVector assemble_pure(const Eigen::Ref<const Eigen::VectorXd>& slot_params, const PermutationSpec& spec);
DensityMatrix assemble_mixed(const Eigen::VectorXd& params, const ParameterLayout& layout);

// Loss Tr(rho W) and its analytic gradient with respect to every raw parameter.
// The witness is held as its dense operator, which is small for N <= 5.
class MsoObjective {
 public:
  MsoObjective(const Witness& w, ParameterLayout layout);

  const ParameterLayout& layout() const { return layout_; }
  double loss(const Eigen::VectorXd& params) const;
  double loss_and_gradient(const Eigen::VectorXd& params, Eigen::VectorXd& grad) const;

 private:
  ParameterLayout layout_;
  MatrixXc op_;
};

double loss(const Eigen::VectorXd& params, const Witness& w);
Eigen::VectorXd gradient(const Eigen::VectorXd& params, const Witness& w);

struct AdamConfig {
  double step_size = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct MsoConfig {
  int max_iterations = 500;
  int convergence_window = 25;
  double relative_tolerance = 1e-6;
  AdamConfig adam;
  int restarts = 8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LossPoint {
  int iteration = 0;
  double loss = 0.0;
};

struct RestartTrace {
  int restart = 0;
  std::vector<LossPoint> losses;
  double best_loss = 0.0;
  bool diverged = false;
};

struct MsoResult {
  double min_expectation = 0.0;
  DensityMatrix argmin;
  Eigen::VectorXd argmin_params;
  std::vector<LossPoint> loss_trace;  // best restart
  int iterations_used = 0;
  int restart_index = 0;
  std::vector<RestartTrace> restarts;
  double eigenstate_floor = 0.0;  // min over the 6^N Pauli eigenstates
  // True when a Pauli eigenstate beat every restart; argmin is then its projector.
  bool eigenstate_won = false;
};

// Uniform [-1, 1] raw parameters, redrawn for any all-zero block.
Eigen::VectorXd random_parameters(const ParameterLayout& layout, Rng& rng);

// Adam descent from cfg.restarts random starts (restart r uses stream
// derive(r) of the config seed). Restarts may run on several threads; the
// reduction is by restart index. The Pauli eigenstates are also candidates,
// so the result never lies above their minimum.
MsoResult optimize(const Witness& w, const MsoConfig& cfg, int threads = 1);

// Identity coefficient minus the found minimum.
Witness adjust_bias(const Witness& w, const MsoResult& result);

struct EigenstateMinimum {
  double value = 0.0;
  std::size_t index = 0;  // base-6 digits, qubit 1 most significant
};

// Smallest witness expectation over the 6^N product Pauli eigenstates.
EigenstateMinimum eigenstate_minimum(const Witness& w, int threads = 1);
StateVector pauli_eigenstate(int n_qubits, std::size_t index);

// CSV with columns iteration,loss,restart.
void write_trace_csv(std::ostream& out, const MsoResult& result);

}  // namespace wforge
