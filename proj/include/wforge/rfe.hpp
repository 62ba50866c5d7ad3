#pragma once

#include <optional>
#include <vector>

#include "wforge/mso.hpp"
#include "wforge/svm.hpp"
#include "wforge/verify.hpp"

namespace wforge {

struct RfeConfig {
  // Term counts include the identity.
  std::optional<int> target_term_count;
  std::optional<double> tolerance_floor;
  SvmConfig svm;
  MsoConfig mso;
  // Beam width: keep only the candidates whose removed term has the smallest
  // |coefficient|. Absent means every term is tried.
  std::optional<int> max_candidates_per_level;
  TargetKind target = TargetKind::W;
  int certificate_samples = 1000;
  double certificate_alpha = 0.1;
  std::uint64_t certificate_seed = 0;
  int threads = 1;

  void validate() const;
};

struct RfeCandidate {
  PauliString removed;
  double proxy_minimum = 0.0;  // eigenstate minimum of the freshly trained witness
  double tolerance = 0.0;      // analytic, after the proxy bias shift
};

struct RfeLevel {
  FeatureSet retained;  // non-identity terms kept after this level
  std::vector<RfeCandidate> candidates;
  PauliString removed;
  double proxy_tolerance = 0.0;
  double tolerance = 0.0;  // after full bias adjustment of the winner
  double wall_seconds = 0.0;
  Witness witness;
  bool accepted = true;  // false for a level rejected by the tolerance floor
};

struct RfeTrace {
  double initial_tolerance = 0.0;
  std::size_t initial_terms = 0;
  std::vector<RfeLevel> levels;
};

// Tries every single-term removal from `current` (non-identity terms), retrains
// on the rest and scores the proxy-adjusted witness by its noise tolerance
// against the target. Ties go to the lexicographically smallest removed term.
// The winner is then re-adjusted with the full optimizer and certified.
RfeLevel rfe_level(const Witness& current, const TrainingSet& data, const RfeConfig& cfg);

struct RfeOutcome {
  Witness witness;
  RfeTrace trace;
};

RfeOutcome rfe_run(const Witness& initial, const TrainingSet& data, const RfeConfig& cfg);

}  // namespace wforge
