#include "wforge/statesets.hpp"

#include <algorithm>
#include <cmath>

#include "wforge/parallel.hpp"

namespace wforge {

TargetKind parse_target_kind(const std::string& name) {
  if (name == "GHZ" || name == "ghz") return TargetKind::GHZ;
  if (name == "W" || name == "w") return TargetKind::W;
  throw InvalidInput("unknown target kind '" + name + "' (expected GHZ or W)");
}

std::string to_string(TargetKind kind) { return kind == TargetKind::GHZ ? "GHZ" : "W"; }

std::string to_string(SampleOrigin origin) {
  switch (origin) {
    case SampleOrigin::Eigenstate: return "eigenstate";
    case SampleOrigin::Perturbed: return "perturbed";
    case SampleOrigin::Werner: return "werner";
    case SampleOrigin::DirichletMixed: return "dirichlet-mixed";
  }
  return "unknown";
}

SampleOrigin parse_sample_origin(const std::string& name) {
  for (auto o : {SampleOrigin::Eigenstate, SampleOrigin::Perturbed, SampleOrigin::Werner, SampleOrigin::DirichletMixed})
    if (to_string(o) == name) return o;
  throw InvalidInput("unknown sample origin '" + name + "'");
}

std::size_t TrainingSet::count(int label) const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [&](const LabeledSample& s) { return s.label == label; }));
}

std::size_t TrainingSet::count(SampleOrigin origin) const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [&](const LabeledSample& s) { return s.origin == origin; }));
}

void TrainingSet::validate_for_training() const {
  if (features.empty()) throw InvalidInput("training set has no features");
  for (const auto& s : samples) {
    if (s.features.size() != static_cast<Eigen::Index>(features.size()))
      throw InvalidInput("sample feature length does not match the feature set");
    if (s.label != kSeparableLabel && s.label != kEntangledLabel) throw InvalidInput("labels must be +1 or -1");
    if (!s.features.allFinite()) throw InvalidInput("non-finite feature value");
  }
  if (count(kSeparableLabel) == 0 || count(kEntangledLabel) == 0)
    throw InvalidInput("training data must contain both separable and entangled samples");
}

std::vector<VectorXc> single_qubit_eigenstates() {
  using C = std::complex<double>;
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<VectorXc> out(6, VectorXc(2));
  out[0] << C(r), C(r);
  out[1] << C(r), C(-r);
  out[2] << C(r), C(0, r);
  out[3] << C(r), C(0, -r);
  out[4] << C(1), C(0);
  out[5] << C(0), C(1);
  return out;
}

namespace {

std::size_t pow6(int n) {
  std::size_t v = 1;
  for (int i = 0; i < n; ++i) v *= 6;
  return v;
}

std::vector<VectorXc> eigenstate_factors(std::size_t index, int n_qubits, const std::vector<VectorXc>& basis) {
  std::vector<VectorXc> f(static_cast<std::size_t>(n_qubits));
  for (int q = n_qubits - 1; q >= 0; --q) {
    f[static_cast<std::size_t>(q)] = basis[index % 6];
    index /= 6;
  }
  return f;
}

StateVector kron_all(const std::vector<VectorXc>& factors) {
  VectorXc v = VectorXc::Ones(1);
  for (const auto& f : factors) v = kron(v, f);
  return v;
}

}  // namespace

std::vector<StateVector> pauli_eigenstates(int n_qubits) {
  if (n_qubits < 1) throw InvalidInput("need at least one qubit");
  if (n_qubits > kDefaultMaxQubits) throw ResourceError("too many qubits for eigenstate enumeration");
  const auto basis = single_qubit_eigenstates();
  const std::size_t count = pow6(n_qubits);
  std::vector<StateVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(kron_all(eigenstate_factors(i, n_qubits, basis)));
  return out;
}

std::vector<Matrix2c> perturbation_factors(int n_qubits, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw InvalidInput("sigma must be non-negative");
  using C = std::complex<double>;
  const C i(0, 1);
  std::vector<Matrix2c> out;
  out.reserve(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) {
    // theta has density sin(theta)/2 on [0, pi].
    const double theta = std::acos(1.0 - 2.0 * rng.uniform());
    const double phi = 2.0 * M_PI * rng.uniform();
    const double omega = 2.0 * M_PI * rng.uniform();
    const double c = std::cos(sigma * theta / 2.0);
    const double s = std::sin(sigma * theta / 2.0);
    Matrix2c h;
    h << std::exp(-i * sigma * (phi + omega) / 2.0) * c, -std::exp(i * sigma * (phi - omega) / 2.0) * s,
        std::exp(-i * sigma * (phi - omega) / 2.0) * s, std::exp(i * sigma * (phi + omega) / 2.0) * c;
    out.push_back(h);
  }
  return out;
}

MatrixXc perturbation_unitary(int n_qubits, double sigma, Rng& rng) {
  MatrixXc h = MatrixXc::Ones(1, 1);
  for (const auto& f : perturbation_factors(n_qubits, sigma, rng)) h = kron(h, f);
  return h;
}

std::vector<std::vector<VectorXc>> separable_training_factors(int n_qubits, int extras, double sigma, const Rng& rng) {
  if (extras < 0) throw InvalidInput("extras per eigenstate must be non-negative");
  if (n_qubits < 1 || n_qubits > kDefaultMaxQubits) throw InvalidInput("unsupported qubit count");
  const auto basis = single_qubit_eigenstates();
  const std::size_t n_eig = pow6(n_qubits);
  std::vector<std::vector<VectorXc>> out;
  out.reserve(n_eig * static_cast<std::size_t>(extras + 1));
  for (std::size_t e = 0; e < n_eig; ++e) {
    auto factors = eigenstate_factors(e, n_qubits, basis);
    out.push_back(factors);
    Rng local = rng.derive(e);
    for (int k = 0; k < extras; ++k) {
      const auto h = perturbation_factors(n_qubits, sigma, local);
      std::vector<VectorXc> moved(factors.size());
      for (std::size_t q = 0; q < factors.size(); ++q) moved[q] = h[q] * factors[q];
      out.push_back(std::move(moved));
    }
  }
  return out;
}

std::vector<StateVector> separable_training_states(int n_qubits, int extras, double sigma, const Rng& rng) {
  const auto factors = separable_training_factors(n_qubits, extras, sigma, rng);
  std::vector<StateVector> out;
  out.reserve(factors.size());
  for (const auto& f : factors) out.push_back(kron_all(f));
  return out;
}

std::vector<double> werner_grid(int count, double p_max) {
  if (count < 1) throw InvalidInput("count must be at least 1");
  if (!(p_max > 0.0 && p_max < 1.0)) throw InvalidInput("p_max must lie in (0, 1)");
  if (count == 1) return {p_max};
  std::vector<double> ps(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) ps[static_cast<std::size_t>(j)] = p_max * j / (count - 1);
  return ps;
}

std::vector<DensityMatrix> entangled_training_states(const DensityMatrix& rho_e, int count, double p_max) {
  std::vector<DensityMatrix> out;
  for (double p : werner_grid(count, p_max)) out.push_back(werner_state(rho_e, p));
  return out;
}

StateVector target_state(TargetKind kind, int n_qubits) {
  if (n_qubits < 2) throw InvalidInput("target states need at least two qubits");
  if (n_qubits > kDefaultMaxQubits) throw ResourceError("too many qubits");
  const auto dim = static_cast<Eigen::Index>(dimension_for_qubits(n_qubits));
  StateVector psi = StateVector::Zero(dim);
  switch (kind) {
    case TargetKind::GHZ:
      psi(0) = psi(dim - 1) = 1.0 / std::sqrt(2.0);
      break;
    case TargetKind::W:
      for (int q = 0; q < n_qubits; ++q) psi(Eigen::Index{1} << q) = 1.0 / std::sqrt(static_cast<double>(n_qubits));
      break;
    default:
      throw InvalidInput("invalid target kind");
  }
  return psi;
}

std::vector<double> dirichlet_weights(double alpha, int count, Rng& rng) {
  if (!(alpha > 0.0)) throw InvalidInput("Dirichlet alpha must be positive");
  if (count < 1) throw InvalidInput("Dirichlet count must be at least 1");
  std::vector<double> logs(static_cast<std::size_t>(count));
  for (auto& l : logs) l = rng.log_gamma_draw(alpha);
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> w(logs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += (w[i] = std::exp(logs[i] - top));
  for (auto& x : w) x /= sum;
  return w;
}

StateVector random_kseparable_pure(int n_qubits, const PermutationSpec& spec, Rng& rng) {
  if (spec.n_qubits() != n_qubits) throw InvalidInput("arrangement '" + spec.label + "' does not cover N qubits");
  std::vector<VectorXc> parts;
  parts.reserve(spec.parts.size());
  for (int size : spec.parts) {
    VectorXc v(Eigen::Index{1} << size);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const double re = rng.normal();
      const double im = rng.normal();
      v(k) = {re, im};
    }
    parts.push_back(v / v.norm());
  }
  StateVector psi = arrange_product(parts, spec);
  return psi / psi.norm();
}

std::vector<PermutationSpec> test_arrangements(int n_qubits) {
  std::vector<PermutationSpec> out;
  if (n_qubits >= 3 && n_qubits <= 5) out = permutation_table(n_qubits);
  out.push_back(fully_separable_spec(n_qubits));
  return out;
}

DensityMatrix separable_test_state(int n_qubits, double alpha, const std::vector<PermutationSpec>& arrangements,
                                   Rng& rng) {
  const int mix = 1 << n_qubits;
  const auto dim = static_cast<Eigen::Index>(dimension_for_qubits(n_qubits));
  const auto weights = dirichlet_weights(alpha, mix, rng);
  DensityMatrix rho = DensityMatrix::Zero(dim, dim);
  for (int k = 0; k < mix; ++k) {
    const auto& spec = arrangements[rng.below(arrangements.size())];
    const StateVector psi = random_kseparable_pure(n_qubits, spec, rng);
    rho.noalias() += weights[static_cast<std::size_t>(k)] * (psi * psi.adjoint());
  }
  return rho;
}

std::vector<DensityMatrix> separable_test_states(int n_qubits, int count, double alpha, const Rng& rng, int threads) {
  if (count < 1) throw InvalidInput("count must be at least 1");
  if (!(alpha > 0.0)) throw InvalidInput("Dirichlet alpha must be positive");
  if (n_qubits < 1 || n_qubits > kDefaultMaxQubits) throw InvalidInput("unsupported qubit count");
  const auto arrangements = test_arrangements(n_qubits);
  std::vector<DensityMatrix> out(static_cast<std::size_t>(count));
  parallel_for(out.size(), threads, [&](std::size_t i) {
    Rng local = rng.derive(i);
    out[i] = separable_test_state(n_qubits, alpha, arrangements, local);
  });
  return out;
}

double product_expectation(const std::vector<VectorXc>& factors, const PauliString& p) {
  if (static_cast<int>(factors.size()) != p.size()) throw InvalidInput("factor count does not match Pauli string");
  double value = 1.0;
  for (int q = 1; q <= p.size(); ++q) {
    const auto& v = factors[static_cast<std::size_t>(q - 1)];
    const auto m = pauli_matrix(p.at(q));
    value *= (v.adjoint() * m * v)(0).real();
    if (value == 0.0) break;
  }
  return value;
}

TrainingSet build_training_set(TargetKind target, int n_qubits, const FeatureSet& features,
                               const TrainingDataConfig& cfg, std::uint64_t seed, int threads) {
  if (features.empty()) throw InvalidInput("feature set is empty");
  for (const auto& f : features)
    if (f.size() != n_qubits) throw InvalidInput("feature " + f.str() + " does not match the qubit count");

  TrainingSet set;
  set.n_qubits = n_qubits;
  set.features = features;
  set.seed = seed;

  const Rng rng(seed);
  const auto factors = separable_training_factors(n_qubits, cfg.extras_per_eigenstate, cfg.sigma, rng);
  const auto grid = werner_grid(cfg.entangled_count, cfg.p_max);
  set.samples.resize(factors.size() + grid.size());

  const auto n_features = static_cast<Eigen::Index>(features.size());
  const std::size_t stride = static_cast<std::size_t>(cfg.extras_per_eigenstate) + 1;
  parallel_for(factors.size(), threads, [&](std::size_t i) {
    auto& s = set.samples[i];
    s.features.resize(n_features);
    for (Eigen::Index k = 0; k < n_features; ++k)
      s.features(k) = product_expectation(factors[i], features[static_cast<std::size_t>(k)]);
    s.label = kSeparableLabel;
    s.origin = (i % stride == 0) ? SampleOrigin::Eigenstate : SampleOrigin::Perturbed;
  });

  const StateVector psi = target_state(target, n_qubits);
  const DensityMatrix rho_e = projector(psi);
  parallel_for(grid.size(), threads, [&](std::size_t j) {
    auto& s = set.samples[factors.size() + j];
    s.features = feature_vector(werner_state(rho_e, grid[j]), features);
    s.label = kEntangledLabel;
    s.origin = SampleOrigin::Werner;
  });
  return set;
}

}  // namespace wforge
