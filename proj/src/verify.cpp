#include "wforge/verify.hpp"

#include <algorithm>
#include <limits>

#include "wforge/mso.hpp"
#include "wforge/parallel.hpp"

namespace wforge {

namespace {

ClassStats summarize(const std::vector<double>& values, auto&& wrong) {
  ClassStats s;
  s.count = values.size();
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.min = std::min(s.min, values[i]);
    s.max = std::max(s.max, values[i]);
    if (wrong(values[i])) s.misclassified.push_back(i);
  }
  return s;
}

}  // namespace

CertificateReport certify(const Witness& w, int samples, double alpha, const Rng& rng, int threads, double tolerance) {
  w.validate();
  if (samples < 0) throw InvalidInput("sample count must be non-negative");
  if (!(alpha > 0.0)) throw InvalidInput("Dirichlet alpha must be positive");
  CertificateReport r;
  r.tolerance = tolerance;
  r.eigenstate_min = eigenstate_minimum(w, threads).value;
  const auto arrangements = test_arrangements(w.n_qubits);
  std::vector<double> values(static_cast<std::size_t>(samples));
  // Same per-sample streams as separable_test_states, without holding every matrix.
  parallel_for(values.size(), threads, [&](std::size_t i) {
    Rng local = rng.derive(i);
    values[i] = evaluate(w, separable_test_state(w.n_qubits, alpha, arrangements, local));
  });
  r.samples = summarize(values, [&](double v) { return v < -tolerance; });
  return r;
}

void VerificationConfig::validate() const {
  if (separable_count < 1) throw ConfigError("verify.separable_count must be >= 1");
  if (entangled_count < 1) throw ConfigError("verify.entangled_count must be >= 1");
  if (!(alpha > 0.0)) throw ConfigError("verify.alpha must be > 0");
  if (!(p_max > 0.0 && p_max < 1.0)) throw ConfigError("verify.p_max must lie in (0, 1)");
  if (!(tolerance >= 0.0)) throw ConfigError("verify.tolerance must be >= 0");
}

VerificationReport verify_witness(const Witness& w, TargetKind target, const VerificationConfig& cfg, const Rng& rng,
                                  int threads) {
  cfg.validate();
  VerificationReport r;
  r.separable = certify(w, cfg.separable_count, cfg.alpha, rng.derive("separable"), threads, cfg.tolerance);
  const DensityMatrix rho_e = projector(target_state(target, w.n_qubits));
  const auto ps = werner_grid(cfg.entangled_count, cfg.p_max);
  std::vector<double> values(ps.size());
  parallel_for(ps.size(), threads, [&](std::size_t i) { values[i] = evaluate(w, werner_state(rho_e, ps[i])); });
  r.entangled = summarize(values, [](double v) { return !(v < 0.0); });
  return r;
}

}  // namespace wforge
