#include "wforge/mso.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "wforge/parallel.hpp"
#include "wforge/statesets.hpp"

namespace wforge {

int PartitionCatalog::total_slots() const {
  int a = 0;
  for (const auto& e : entries) a += e.copies();
  return a;
}

PartitionCatalog build_catalog(int n_qubits) {
  PartitionCatalog c;
  c.n_qubits = n_qubits;
  c.entries = permutation_table(n_qubits);
  return c;
}

std::size_t slot_parameter_count(const PermutationSpec& spec) {
  std::size_t n = 0;
  for (int nu : spec.parts) n += (std::size_t{2} << nu) - 1;
  return n;
}

ParameterLayout make_layout(const PartitionCatalog& catalog) {
  ParameterLayout l;
  l.catalog = catalog;
  std::size_t offset = 0;
  for (std::size_t e = 0; e < catalog.entries.size(); ++e) {
    const std::size_t per = slot_parameter_count(catalog.entries[e]);
    for (int c = 0; c < catalog.entries[e].copies(); ++c) {
      l.slots.push_back({e, offset, per});
      offset += per;
    }
  }
  l.mixing_offset = offset;
  l.size = offset + l.slots.size();
  return l;
}

std::size_t raw_parameter_count(int n_qubits) { return make_layout(build_catalog(n_qubits)).size; }

double estimate_memory_bytes(int n_qubits) {
  if (n_qubits < 2) throw InvalidInput("memory estimate needs N >= 2");
  const double n = n_qubits;
  return std::ldexp(1.0, 2 * n_qubits + 2) * std::tgamma(n) / std::sqrt(3.0) *
         std::exp(std::numbers::pi * std::sqrt(2.0 * n / 3.0));
}

Eigen::VectorXd constrain_magnitudes(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd sq = x.array().square();
  const double r = sq.norm();
  if (!(r > 0.0)) throw InvalidInput("magnitude parameters are all zero");
  return sq / r;
}

Eigen::VectorXd constrain_weights(const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::VectorXd sq = y.array().square();
  const double s = sq.sum();
  if (!(s > 0.0)) throw InvalidInput("mixing parameters are all zero");
  return sq / s;
}

VectorXc part_state(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  if (theta.size() != x.size() - 1) throw InvalidInput("phase count must be one less than magnitude count");
  const Eigen::VectorXd k = constrain_magnitudes(x);
  VectorXc a(k.size());
  a(0) = k(0);
  for (Eigen::Index j = 1; j < k.size(); ++j) a(j) = std::polar(k(j), theta(j - 1));
  return a;
}

namespace {

std::vector<VectorXc> slot_parts(const Eigen::Ref<const Eigen::VectorXd>& p, const PermutationSpec& spec) {
  std::vector<VectorXc> parts;
  Eigen::Index off = 0;
  for (int nu : spec.parts) {
    const Eigen::Index d = Eigen::Index{1} << nu;
    parts.push_back(part_state(p.segment(off, d), p.segment(off + d, d - 1)));
    off += 2 * d - 1;
  }
  return parts;
}

}  // namespace

StateVector assemble_pure(const Eigen::Ref<const Eigen::VectorXd>& slot_params, const PermutationSpec& spec) {
  if (static_cast<std::size_t>(slot_params.size()) != slot_parameter_count(spec))
    throw InvalidInput("slot parameter block does not match arrangement " + spec.label);
  return arrange_product(slot_parts(slot_params, spec), spec);
}

DensityMatrix assemble_mixed(const Eigen::VectorXd& params, const ParameterLayout& layout) {
  if (static_cast<std::size_t>(params.size()) != layout.size) throw InvalidInput("parameter vector has the wrong length");
  const Eigen::VectorXd p = constrain_weights(params.segment(layout.mixing_offset, layout.slots.size()));
  const auto dim = static_cast<Eigen::Index>(dimension_for_qubits(layout.catalog.n_qubits));
  DensityMatrix rho = DensityMatrix::Zero(dim, dim);
  for (std::size_t s = 0; s < layout.slots.size(); ++s) {
    const auto& sl = layout.slots[s];
    const StateVector psi = assemble_pure(params.segment(sl.offset, sl.size), layout.spec(s));
    rho.noalias() += p(static_cast<Eigen::Index>(s)) * psi * psi.adjoint();
  }
  return rho;
}

MsoObjective::MsoObjective(const Witness& w, ParameterLayout layout)
    : layout_(std::move(layout)), op_(witness_operator(w)) {
  if (w.n_qubits != layout_.catalog.n_qubits) throw InvalidInput("witness and catalog differ in qubit count");
}

double MsoObjective::loss(const Eigen::VectorXd& params) const {
  if (static_cast<std::size_t>(params.size()) != layout_.size) throw InvalidInput("parameter vector has the wrong length");
  const Eigen::VectorXd p = constrain_weights(params.segment(layout_.mixing_offset, layout_.slots.size()));
  double acc = 0.0;
  for (std::size_t s = 0; s < layout_.slots.size(); ++s) {
    const auto& sl = layout_.slots[s];
    const StateVector psi = assemble_pure(params.segment(sl.offset, sl.size), layout_.spec(s));
    acc += p(static_cast<Eigen::Index>(s)) * psi.dot(op_ * psi).real();
  }
  return acc;
}

double MsoObjective::loss_and_gradient(const Eigen::VectorXd& params, Eigen::VectorXd& grad) const {
  if (static_cast<std::size_t>(params.size()) != layout_.size) throw InvalidInput("parameter vector has the wrong length");
  if (!params.allFinite()) throw NumericalFailure("non-finite optimizer parameters", "");
  const std::size_t nslots = layout_.slots.size();
  const auto y = params.segment(layout_.mixing_offset, nslots);
  const double ysum = y.squaredNorm();
  if (!(ysum > 0.0)) throw InvalidInput("mixing parameters are all zero");
  grad.setZero(params.size());
  Eigen::VectorXd e(nslots);

  for (std::size_t s = 0; s < nslots; ++s) {
    const auto& sl = layout_.slots[s];
    const auto& spec = layout_.spec(s);
    const auto block = params.segment(sl.offset, sl.size);
    const auto parts = slot_parts(block, spec);
    const StateVector psi = arrange_product(parts, spec);
    const VectorXc g = op_ * psi;
    e(s) = psi.dot(g).real();

    // Back to product ordering: h[j] = g[map[j]].
    const auto map = spec.index_map();
    VectorXc h(g.size());
    for (std::size_t j = 0; j < map.size(); ++j) h(static_cast<Eigen::Index>(j)) = g(static_cast<Eigen::Index>(map[j]));

    const std::size_t m_count = parts.size();
    std::vector<int> shift(m_count);
    int bits = 0;
    for (std::size_t m = m_count; m-- > 0;) {
      shift[m] = bits;
      bits += spec.parts[m];
    }

    const double weight = y(static_cast<Eigen::Index>(s)) * y(static_cast<Eigen::Index>(s)) / ysum;
    Eigen::Index off = 0;
    for (std::size_t m = 0; m < m_count; ++m) {
      const Eigen::Index d = parts[m].size();
      VectorXc gm = VectorXc::Zero(d);
      for (Eigen::Index j = 0; j < h.size(); ++j) {
        std::complex<double> prod = std::conj(h(j));
        for (std::size_t o = 0; o < m_count; ++o) {
          if (o == m) continue;
          prod *= parts[o](static_cast<Eigen::Index>((static_cast<std::uint64_t>(j) >> shift[o]) & ((1u << spec.parts[o]) - 1)));
        }
        gm(static_cast<Eigen::Index>((static_cast<std::uint64_t>(j) >> shift[m]) & ((1u << spec.parts[m]) - 1))) += prod;
      }

      const auto x = block.segment(off, d);
      const auto theta = block.segment(off + d, d - 1);
      Eigen::VectorXd de_dk(d);
      de_dk(0) = 2.0 * gm(0).real();
      for (Eigen::Index a = 1; a < d; ++a) {
        de_dk(a) = 2.0 * (gm(a) * std::polar(1.0, theta(a - 1))).real();
        grad(static_cast<Eigen::Index>(sl.offset) + off + d + a - 1) = -2.0 * weight * (gm(a) * parts[m](a)).imag();
      }
      const double r = x.array().square().matrix().norm();
      const double mix = (de_dk.array() * x.array().square()).sum();
      for (Eigen::Index b = 0; b < d; ++b) {
        const double xb = x(b);
        grad(static_cast<Eigen::Index>(sl.offset) + off + b) =
            weight * (de_dk(b) * 2.0 * xb / r - 2.0 * xb * xb * xb / (r * r * r) * mix);
      }
      off += 2 * d - 1;
    }
  }

  const double total = (y.array().square() * e.array()).sum() / ysum;
  for (std::size_t s = 0; s < nslots; ++s) {
    const auto i = static_cast<Eigen::Index>(s);
    grad(static_cast<Eigen::Index>(layout_.mixing_offset) + i) = 2.0 * y(i) / ysum * (e(i) - total);
  }
  return total;
}

double loss(const Eigen::VectorXd& params, const Witness& w) {
  return MsoObjective(w, make_layout(build_catalog(w.n_qubits))).loss(params);
}

Eigen::VectorXd gradient(const Eigen::VectorXd& params, const Witness& w) {
  Eigen::VectorXd g;
  MsoObjective(w, make_layout(build_catalog(w.n_qubits))).loss_and_gradient(params, g);
  return g;
}

void MsoConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("mso.max_iterations must be >= 1");
  if (convergence_window < 1) throw ConfigError("mso.convergence_window must be >= 1");
  if (!(relative_tolerance > 0.0)) throw ConfigError("mso.relative_tolerance must be > 0");
  if (restarts < 1) throw ConfigError("mso.restarts must be >= 1");
  if (!(adam.step_size > 0.0)) throw ConfigError("mso.step_size must be > 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) || !(adam.beta2 >= 0.0 && adam.beta2 < 1.0))
    throw ConfigError("mso Adam betas must lie in [0, 1)");
  if (!(adam.epsilon > 0.0)) throw ConfigError("mso.epsilon must be > 0");
}

Eigen::VectorXd random_parameters(const ParameterLayout& layout, Rng& rng) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(layout.size));
  auto fill = [&](Eigen::Index off, Eigen::Index n, bool guard) {
    do {
      for (Eigen::Index i = 0; i < n; ++i) p(off + i) = rng.uniform(-1.0, 1.0);
    } while (guard && p.segment(off, n).isZero(0.0));
  };
  for (std::size_t s = 0; s < layout.slots.size(); ++s) {
    Eigen::Index off = static_cast<Eigen::Index>(layout.slots[s].offset);
    for (int nu : layout.spec(s).parts) {
      const Eigen::Index d = Eigen::Index{1} << nu;
      fill(off, d, true);
      fill(off + d, d - 1, false);
      off += 2 * d - 1;
    }
  }
  fill(static_cast<Eigen::Index>(layout.mixing_offset), static_cast<Eigen::Index>(layout.slots.size()), true);
  return p;
}

namespace {

struct RunOutcome {
  RestartTrace trace;
  Eigen::VectorXd best_params;
  int iterations = 0;
};

RunOutcome run_adam(const MsoObjective& obj, const MsoConfig& cfg, int restart, Rng rng) {
  RunOutcome out;
  out.trace.restart = restart;
  out.trace.best_loss = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x = random_parameters(obj.layout(), rng);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd g;
  const auto& a = cfg.adam;
  double b1t = 1.0, b2t = 1.0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    double l = 0.0;
    try {
      l = obj.loss_and_gradient(x, g);
    } catch (const std::exception&) {
      out.trace.diverged = true;
      break;
    }
    if (!std::isfinite(l) || !g.allFinite()) {
      out.trace.diverged = true;
      break;
    }
    out.trace.losses.push_back({it, l});
    out.iterations = it + 1;
    if (l < out.trace.best_loss) {
      out.trace.best_loss = l;
      out.best_params = x;
    }
    const auto n = out.trace.losses.size();
    if (n > static_cast<std::size_t>(cfg.convergence_window)) {
      const double prev = out.trace.losses[n - 1 - static_cast<std::size_t>(cfg.convergence_window)].loss;
      if (std::abs(l - prev) / std::max(std::abs(l), 1.0) < cfg.relative_tolerance) break;
    }
    b1t *= a.beta1;
    b2t *= a.beta2;
    m = a.beta1 * m + (1.0 - a.beta1) * g;
    v = a.beta2 * v + (1.0 - a.beta2) * g.cwiseProduct(g);
    const double lr = a.step_size * std::sqrt(1.0 - b2t) / (1.0 - b1t);
    x.array() -= lr * m.array() / (v.array().sqrt() + a.epsilon);
  }
  if (out.best_params.size() == 0) out.trace.diverged = true;
  return out;
}

}  // namespace

EigenstateMinimum eigenstate_minimum(const Witness& w, int threads) {
  const int n = w.n_qubits;
  if (n > kDefaultMaxQubits) throw ResourceError("too many qubits for eigenstate enumeration");
  std::size_t count = 1;
  for (int q = 0; q < n; ++q) count *= 6;
  // Eigenstate index digits: qubit 1 most significant; digit / 2 selects the
  // axis X, Y, Z and digit % 2 the sign.
  std::vector<std::pair<std::string, double>> terms;
  for (const auto& [p, c] : w.terms) terms.emplace_back(p.str(), c);
  const std::size_t chunk = 216;
  const std::size_t chunks = (count + chunk - 1) / chunk;
  std::vector<EigenstateMinimum> mins(chunks, {std::numeric_limits<double>::infinity(), 0});
  parallel_for(chunks, threads, [&](std::size_t ci) {
    std::vector<int> axis(static_cast<std::size_t>(n)), sign(static_cast<std::size_t>(n));
    for (std::size_t i = ci * chunk; i < std::min(count, (ci + 1) * chunk); ++i) {
      std::size_t r = i;
      for (int q = n - 1; q >= 0; --q) {
        const int d = static_cast<int>(r % 6);
        r /= 6;
        axis[static_cast<std::size_t>(q)] = d / 2;
        sign[static_cast<std::size_t>(q)] = d % 2 == 0 ? 1 : -1;
      }
      double acc = 0.0;
      for (const auto& [s, c] : terms) {
        int v = 1;
        for (int q = 0; q < n && v != 0; ++q) {
          const char ch = s[static_cast<std::size_t>(q)];
          if (ch == 'I') continue;
          const int ax = ch == 'X' ? 0 : ch == 'Y' ? 1 : 2;
          v = ax == axis[static_cast<std::size_t>(q)] ? v * sign[static_cast<std::size_t>(q)] : 0;
        }
        acc += c * v;
      }
      if (acc < mins[ci].value) mins[ci] = {acc, i};
    }
  });
  EigenstateMinimum best = mins.front();
  for (const auto& m : mins)
    if (m.value < best.value) best = m;
  return best;
}

StateVector pauli_eigenstate(int n_qubits, std::size_t index) {
  const auto basis = single_qubit_eigenstates();
  std::vector<VectorXc> factors(static_cast<std::size_t>(n_qubits));
  for (int q = n_qubits - 1; q >= 0; --q) {
    factors[static_cast<std::size_t>(q)] = basis[index % 6];
    index /= 6;
  }
  if (index != 0) throw InvalidInput("eigenstate index out of range");
  VectorXc out = VectorXc::Ones(1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

MsoResult optimize(const Witness& w, const MsoConfig& cfg, int threads) {
  cfg.validate();
  w.validate();
  const MsoObjective obj(w, make_layout(build_catalog(w.n_qubits)));
  const Rng root(cfg.seed);
  std::vector<RunOutcome> runs(static_cast<std::size_t>(cfg.restarts));
  parallel_for(runs.size(), threads, [&](std::size_t r) {
    runs[r] = run_adam(obj, cfg, static_cast<int>(r), root.derive(static_cast<std::uint64_t>(r)));
  });

  MsoResult res;
  int best = -1;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    res.restarts.push_back(runs[r].trace);
    if (runs[r].trace.diverged) continue;
    if (best < 0 || runs[r].trace.best_loss < runs[static_cast<std::size_t>(best)].trace.best_loss) best = static_cast<int>(r);
  }
  if (best < 0) {
    std::string diag;
    for (const auto& t : res.restarts)
      diag += "restart " + std::to_string(t.restart) + ": " + std::to_string(t.losses.size()) + " finite iterations\n";
    throw NumericalFailure("every optimizer restart diverged", diag);
  }
  const auto& win = runs[static_cast<std::size_t>(best)];
  res.restart_index = best;
  res.iterations_used = win.iterations;
  res.loss_trace = win.trace.losses;
  res.argmin_params = win.best_params;
  res.argmin = assemble_mixed(win.best_params, obj.layout());
  res.min_expectation = evaluate(w, res.argmin);
  const auto floor = eigenstate_minimum(w, threads);
  res.eigenstate_floor = floor.value;
  if (floor.value < res.min_expectation) {
    res.eigenstate_won = true;
    res.argmin = projector(pauli_eigenstate(w.n_qubits, floor.index));
    res.min_expectation = evaluate(w, res.argmin);
  }
  return res;
}

Witness adjust_bias(const Witness& w, const MsoResult& result) {
  Witness out = w;
  out.set_identity_coefficient(w.identity_coefficient() - result.min_expectation);
  out.metadata.provenance = "mso-adjusted";
  return out;
}

void write_trace_csv(std::ostream& out, const MsoResult& result) {
  out << "iteration,loss,restart\n";
  out.precision(17);
  for (const auto& t : result.restarts)
    for (const auto& p : t.losses) out << p.iteration << ',' << p.loss << ',' << t.restart << '\n';
}

}  // namespace wforge
