#include "wforge/rfe.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "wforge/parallel.hpp"

namespace wforge {

void RfeConfig::validate() const {
  if (!target_term_count && !tolerance_floor) throw ConfigError("rfe needs a target term count or a tolerance floor");
  if (target_term_count && *target_term_count < 1) throw ConfigError("rfe.target_terms must be >= 1");
  if (max_candidates_per_level && *max_candidates_per_level < 1) throw ConfigError("rfe.max_candidates must be >= 1");
  if (certificate_samples < 0) throw ConfigError("rfe.certificate_samples must be >= 0");
  if (!(certificate_alpha > 0.0)) throw ConfigError("rfe.certificate_alpha must be > 0");
  svm.validate();
  mso.validate();
}

namespace {

struct Scored {
  RfeCandidate candidate;
  Witness trained;  // before any bias shift
};

Scored score_candidate(const FeatureSet& keep, const PauliString& removed, const TrainingSet& data,
                       const DensityMatrix& rho_e, const RfeConfig& cfg, int n) {
  Scored s;
  s.candidate.removed = removed;
  if (keep.empty()) {
    // Nothing left to train: an identity-only witness never detects anything.
    s.trained.n_qubits = n;
    s.trained.set_identity_coefficient(1.0);
    s.candidate.proxy_minimum = 1.0;
    s.candidate.tolerance = 0.0;
    return s;
  }
  s.trained = from_hyperplane(train(data, keep, cfg.svm), n);
  s.candidate.proxy_minimum = eigenstate_minimum(s.trained).value;
  Witness shifted = s.trained;
  shifted.set_identity_coefficient(s.trained.identity_coefficient() - s.candidate.proxy_minimum);
  s.candidate.tolerance = noise_tolerance_analytic(shifted, rho_e).p_star;
  return s;
}

}  // namespace

RfeLevel rfe_level(const Witness& current, const TrainingSet& data, const RfeConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const FeatureSet feats = current.features();
  if (feats.empty()) throw InvalidInput("rfe level needs at least one non-identity term");
  const int n = current.n_qubits;
  const DensityMatrix rho_e = projector(target_state(cfg.target, n));

  std::vector<PauliString> removable = feats;
  if (cfg.max_candidates_per_level && static_cast<std::size_t>(*cfg.max_candidates_per_level) < removable.size()) {
    std::stable_sort(removable.begin(), removable.end(), [&](const auto& a, const auto& b) {
      return std::abs(current.terms.at(a)) < std::abs(current.terms.at(b));
    });
    removable.resize(static_cast<std::size_t>(*cfg.max_candidates_per_level));
    std::sort(removable.begin(), removable.end());
  }

  std::vector<Scored> scored(removable.size());
  std::vector<std::exception_ptr> failures(removable.size());
  parallel_for(removable.size(), cfg.threads, [&](std::size_t i) {
    FeatureSet keep;
    for (const auto& f : feats)
      if (f != removable[i]) keep.push_back(f);
    try {
      scored[i] = score_candidate(keep, removable[i], data, rho_e, cfg, n);
    } catch (const NumericalFailure&) {
      failures[i] = std::current_exception();
    }
  });

  RfeLevel level;
  std::ptrdiff_t best = -1;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (failures[i]) continue;
    level.candidates.push_back(scored[i].candidate);
    // Candidates are in canonical order, so strict > keeps the smallest label on ties.
    if (best < 0 || scored[i].candidate.tolerance > scored[static_cast<std::size_t>(best)].candidate.tolerance)
      best = static_cast<std::ptrdiff_t>(i);
  }
  if (best < 0) std::rethrow_exception(failures.front());

  const Scored& win = scored[static_cast<std::size_t>(best)];
  level.removed = win.candidate.removed;
  level.proxy_tolerance = win.candidate.tolerance;
  for (const auto& f : feats)
    if (f != level.removed) level.retained.push_back(f);

  Witness chosen = win.trained;
  if (!level.retained.empty()) chosen = adjust_bias(win.trained, optimize(win.trained, cfg.mso, cfg.threads));
  chosen.metadata = current.metadata;
  chosen.metadata.provenance = "rfe";
  level.tolerance = noise_tolerance_analytic(chosen, rho_e).p_star;

  const auto cert = certify(chosen, cfg.certificate_samples, cfg.certificate_alpha, Rng(cfg.certificate_seed),
                            cfg.threads);
  if (!cert.passed())
    throw NumericalFailure("rfe level winner failed the separability certificate",
                           "removed=" + level.removed.str() + " eigenstate_min=" + std::to_string(cert.eigenstate_min) +
                               " sample_min=" + std::to_string(cert.samples.min));
  level.witness = std::move(chosen);
  level.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return level;
}

RfeOutcome rfe_run(const Witness& initial, const TrainingSet& data, const RfeConfig& cfg) {
  cfg.validate();
  initial.validate();
  const DensityMatrix rho_e = projector(target_state(cfg.target, initial.n_qubits));
  RfeOutcome out;
  out.witness = initial;
  out.trace.initial_terms = initial.term_count();
  out.trace.initial_tolerance = noise_tolerance_analytic(initial, rho_e).p_star;

  while (true) {
    if (cfg.target_term_count && static_cast<int>(out.witness.term_count()) <= *cfg.target_term_count) break;
    if (out.witness.features().empty()) break;
    RfeLevel level = rfe_level(out.witness, data, cfg);
    if (cfg.tolerance_floor && level.tolerance < *cfg.tolerance_floor) {
      level.accepted = false;
      out.trace.levels.push_back(std::move(level));
      break;
    }
    out.witness = level.witness;
    out.trace.levels.push_back(std::move(level));
  }
  return out;
}

}  // namespace wforge
