#pragma once

#include <cstddef>
#include <vector>

#include "wforge/rng.hpp"
#include "wforge/statesets.hpp"
#include "wforge/witness.hpp"

namespace wforge {

struct ClassStats {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  std::vector<std::size_t> misclassified;  // sample indices
};

// Separable side of the validity check: 6^N eigenstates plus Dirichlet-mixed
// test states, all of which must evaluate >= -tolerance.
struct CertificateReport {
  double eigenstate_min = 0.0;
  ClassStats samples;
  double tolerance = 1e-9;

  bool passed() const { return eigenstate_min >= -tolerance && samples.misclassified.empty(); }
};

CertificateReport certify(const Witness& w, int samples, double alpha, const Rng& rng, int threads = 1,
                          double tolerance = 1e-9);

struct VerificationConfig {
  int separable_count = 10000;
  int entangled_count = 10000;
  double alpha = 0.1;
  double p_max = 0.25;
  double tolerance = 1e-9;

  void validate() const;
};

struct VerificationReport {
  CertificateReport separable;
  ClassStats entangled;  // Werner states of the target, p on a grid in [0, p_max]

  bool passed() const { return separable.passed() && entangled.misclassified.empty(); }
};

VerificationReport verify_witness(const Witness& w, TargetKind target, const VerificationConfig& cfg, const Rng& rng,
                                  int threads = 1);

}  // namespace wforge
