#include "wforge/witness.hpp"

#include <algorithm>
#include <cmath>

namespace wforge {

double Witness::identity_coefficient() const {
  auto it = terms.find(PauliString::identity(n_qubits));
  return it == terms.end() ? 0.0 : it->second;
}

void Witness::set_identity_coefficient(double value) { terms[PauliString::identity(n_qubits)] = value; }

FeatureSet Witness::features() const {
  FeatureSet out;
  for (const auto& [p, c] : terms)
    if (!p.is_identity()) out.push_back(p);
  return out;
}

void Witness::validate() const {
  if (n_qubits < 1) throw InvalidInput("witness needs at least one qubit");
  for (const auto& [p, c] : terms) {
    if (p.size() != n_qubits) throw InvalidInput("term " + p.str() + " does not match the witness qubit count");
    if (!std::isfinite(c)) throw InvalidInput("coefficient of " + p.str() + " is not finite");
  }
}

Witness make_witness(int n_qubits, const std::vector<std::pair<std::string, double>>& terms) {
  Witness w;
  w.n_qubits = n_qubits;
  for (const auto& [label, c] : terms) w.terms[PauliString(label)] += c;
  w.validate();
  return w;
}

namespace {

void check_dimension(const Witness& w, Eigen::Index dim) {
  if (qubits_for_dimension(dim) != w.n_qubits) throw InvalidInput("state dimension does not match the witness");
}

}  // namespace

double evaluate(const Witness& w, const DensityMatrix& rho) {
  if (rho.rows() != rho.cols()) throw InvalidInput("density matrix is not square");
  check_dimension(w, rho.rows());
  double acc = 0.0;
  for (const auto& [p, c] : w.terms) acc += c * expectation(rho, p);
  return acc;
}

double evaluate_pure(const Witness& w, const StateVector& psi) {
  check_dimension(w, psi.size());
  double acc = 0.0;
  for (const auto& [p, c] : w.terms) acc += c * expectation_pure(psi, p);
  return acc;
}

double evaluate_features(const Witness& w, const FeatureSet& features, const Eigen::VectorXd& values) {
  const FeatureSet mine = w.features();
  const auto cols = feature_columns(features, mine);
  double acc = w.identity_coefficient();
  for (std::size_t k = 0; k < cols.size(); ++k) acc += w.terms.at(mine[k]) * values(cols[k]);
  return acc;
}

MatrixXc witness_operator(const Witness& w) {
  const auto dim = static_cast<Eigen::Index>(dimension_for_qubits(w.n_qubits));
  MatrixXc m = MatrixXc::Zero(dim, dim);
  for (const auto& [p, c] : w.terms) {
    const PauliAction act(p);
    const auto phase = act.global_phase<double>() * c;
    for (Eigen::Index r = 0; r < dim; ++r) {
      const auto ru = static_cast<std::uint64_t>(r);
      m(r, static_cast<Eigen::Index>(ru ^ act.flip)) += PauliAction::odd(ru & act.sign) ? -phase : phase;
    }
  }
  return m;
}

Witness from_hyperplane(const Hyperplane& h, int n_qubits) {
  if (h.weights.size() != static_cast<Eigen::Index>(h.features.size()))
    throw InvalidInput("hyperplane weights and features differ in length");
  Witness w;
  w.n_qubits = n_qubits;
  w.set_identity_coefficient(h.bias);
  for (std::size_t k = 0; k < h.features.size(); ++k) {
    if (h.features[k].is_identity()) throw InvalidInput("hyperplane features must exclude the identity");
    w.terms[h.features[k]] += h.weights(static_cast<Eigen::Index>(k));
  }
  w.validate();
  return w;
}

Hyperplane to_hyperplane(const Witness& w) {
  Hyperplane h;
  h.features = w.features();
  h.weights.resize(static_cast<Eigen::Index>(h.features.size()));
  for (std::size_t k = 0; k < h.features.size(); ++k) h.weights(static_cast<Eigen::Index>(k)) = w.terms.at(h.features[k]);
  h.bias = w.identity_coefficient();
  return h;
}

Witness mermin_witness(int n_qubits) {
  if (n_qubits < 3) throw InvalidInput("Mermin witness needs at least 3 qubits");
  if (n_qubits > 16) throw ResourceError("Mermin witness limited to 16 qubits");
  Witness w;
  w.n_qubits = n_qubits;
  w.metadata.target = "GHZ";
  w.metadata.provenance = "mermin";
  w.set_identity_coefficient(static_cast<double>(1u << (n_qubits - 2)));
  for (std::uint32_t mask = 0; mask < (1u << n_qubits); ++mask) {
    const int ys = std::popcount(mask);
    if (ys % 2 != 0) continue;
    std::string label(static_cast<std::size_t>(n_qubits), 'X');
    for (int q = 0; q < n_qubits; ++q)
      if (mask & (1u << (n_qubits - 1 - q))) label[static_cast<std::size_t>(q)] = 'Y';
    w.terms[PauliString(label)] = (ys % 4 == 0) ? -1.0 : 1.0;
  }
  return w;
}

NoiseToleranceReport noise_tolerance_scan(const Witness& w, const DensityMatrix& rho_e, double step) {
  if (!(step > 0.0 && step <= 1.0)) throw InvalidInput("scan step must lie in (0, 1]");
  NoiseToleranceReport r;
  r.method = ToleranceMethod::Scan;
  r.step = step;
  r.expectation_at_target = evaluate(w, rho_e);
  if (!(r.expectation_at_target < 0.0)) return r;
  const auto last = static_cast<long>(std::floor(1.0 / step + 1e-9));
  for (long j = 1; j <= last; ++j) {
    const double p = std::min(1.0, static_cast<double>(j) * step);
    if (!(evaluate(w, werner_state(rho_e, p)) < 0.0)) break;
    r.p_star = p;
  }
  return r;
}

NoiseToleranceReport noise_tolerance_analytic(const Witness& w, const DensityMatrix& rho_e) {
  NoiseToleranceReport r;
  r.method = ToleranceMethod::Analytic;
  const double e0 = evaluate(w, rho_e);
  r.expectation_at_target = e0;
  if (!(e0 < 0.0)) return r;
  // Non-identity Pauli strings are traceless, so the maximally mixed state
  // evaluates to the identity coefficient.
  const double e1 = w.identity_coefficient();
  if (e1 < 0.0) {
    r.p_star = 1.0;
    return r;
  }
  r.p_star = std::clamp(e0 / (e0 - e1), 0.0, 1.0);
  return r;
}

double fidelity_noise_tolerance(int n_qubits) {
  if (n_qubits < 2 || n_qubits > 52) throw InvalidInput("fidelity tolerance needs 2 <= N <= 52");
  const double dim = std::ldexp(1.0, n_qubits);
  return dim / (static_cast<double>(n_qubits) * (dim - 1.0));
}

Witness normalize(const Witness& w, const Normalization& convention) {
  const double target = std::visit(
      [](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, BiasTo>) {
          return c.value;
        } else {
          if (c.reference == nullptr) throw InvalidInput("normalization reference is missing");
          return c.reference->identity_coefficient();
        }
      },
      convention);
  const double current = w.identity_coefficient();
  if (current == 0.0) throw InvalidInput("cannot normalize a witness with zero identity coefficient");
  const double scale = target / current;
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw InvalidInput("normalization would need a non-positive scale factor");
  Witness out = w;
  for (auto& [p, c] : out.terms) c *= scale;
  return out;
}

double CoefficientComparison::max_abs_error() const {
  double m = 0.0;
  for (const auto& [p, e] : percent_error) m = std::max(m, std::abs(e));
  return m;
}

CoefficientComparison percent_error_vs(const Witness& w, const Witness& reference, double identity_tol) {
  if (w.n_qubits != reference.n_qubits) throw InvalidInput("witnesses act on different qubit counts");
  const double a = w.identity_coefficient();
  const double b = reference.identity_coefficient();
  if (std::abs(a - b) > identity_tol * std::max(1.0, std::abs(b)))
    throw InvalidInput("witnesses must be normalized to the same identity coefficient before comparison");
  CoefficientComparison out;
  for (const auto& [p, c] : w.terms) {
    if (p.is_identity()) continue;
    auto it = reference.terms.find(p);
    if (it == reference.terms.end()) {
      out.only_in_witness.push_back(p);
    } else {
      out.percent_error[p] = 100.0 * (c / it->second - 1.0);
    }
  }
  for (const auto& [p, c] : reference.terms)
    if (!p.is_identity() && !w.terms.contains(p)) out.only_in_reference.push_back(p);
  return out;
}

Witness prune_by_cutoff(const Witness& w, double cutoff) {
  const double scale = std::abs(w.identity_coefficient());
  Witness out = w;
  std::erase_if(out.terms, [&](const auto& kv) {
    return !kv.first.is_identity() && std::abs(kv.second) < cutoff * scale;
  });
  return out;
}

}  // namespace wforge
