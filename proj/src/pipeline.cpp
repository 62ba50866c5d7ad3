#include "wforge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace wforge {

namespace {

json default_config_json() {
  const PipelineConfig d;
  json j = config_to_json(d);
  j["seed"] = nullptr;  // must be supplied
  return j;
}

void overlay(json& base, const json& top, const std::string& path) {
  if (!top.is_object()) throw ConfigError("config" + (path.empty() ? "" : " section '" + path + "'") + " must be an object");
  for (auto it = top.begin(); it != top.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown config key '" + key + "'");
    json& slot = base[it.key()];
    if (slot.is_object() && it.value().is_object()) {
      overlay(slot, it.value(), key);
    } else {
      slot = it.value();
    }
  }
}

void apply_override(json& base, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;  // bare words such as GHZ or mermin
  }
  json* node = &base;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(part)) throw ConfigError("unknown config key '" + key + "'");
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_object()) throw ConfigError("config key '" + key + "' names a section, not a value");
  *node = value;
}

template <typename T>
T field(const json& j, const std::string& section, const std::string& key) {
  const std::string name = section.empty() ? key : section + "." + key;
  const json& s = section.empty() ? j : j.at(section);
  const json& v = s.at(key);
  try {
    if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw ConfigError("config field '" + name + "' has the wrong type (got " + v.dump() + ")");
  }
}

template <typename T>
std::optional<T> optional_field(const json& j, const std::string& section, const std::string& key) {
  if (j.at(section).at(key).is_null()) return std::nullopt;
  return field<T>(j, section, key);
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  if (j.at("seed").is_null()) throw ConfigError("config field 'seed' is required (set it in the file or pass --seed)");
  c.seed = field<std::uint64_t>(j, "", "seed");
  c.n_qubits = field<int>(j, "", "n_qubits");
  try {
    c.target = parse_target_kind(field<std::string>(j, "", "target"));
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config field 'target': ") + e.what());
  }
  const json& f = j.at("features");
  if (f.is_string()) {
    c.feature_mode = f.get<std::string>();
  } else if (f.is_array()) {
    c.feature_mode = "list";
    for (const auto& s : f) {
      if (!s.is_string()) throw ConfigError("config field 'features' must list Pauli labels as strings");
      c.feature_list.push_back(s.get<std::string>());
    }
  } else {
    throw ConfigError("config field 'features' must be \"full\", \"mermin\", \"file:PATH\" or a list of labels");
  }
  c.output = field<std::string>(j, "", "output");

  c.data.extras_per_eigenstate = field<int>(j, "data", "extras_per_eigenstate");
  c.data.sigma = field<double>(j, "data", "sigma");
  c.data.entangled_count = field<int>(j, "data", "entangled_count");
  c.data.p_max = field<double>(j, "data", "p_max");

  c.svm.learning_rate = field<double>(j, "svm", "learning_rate");
  c.svm.batch_size = field<int>(j, "svm", "batch_size");
  c.svm.lambda = field<double>(j, "svm", "lambda");
  c.svm.epochs = field<int>(j, "svm", "epochs");

  c.mso.max_iterations = field<int>(j, "mso", "max_iterations");
  c.mso.convergence_window = field<int>(j, "mso", "convergence_window");
  c.mso.relative_tolerance = field<double>(j, "mso", "relative_tolerance");
  c.mso.adam.step_size = field<double>(j, "mso", "step_size");
  c.mso.adam.beta1 = field<double>(j, "mso", "beta1");
  c.mso.adam.beta2 = field<double>(j, "mso", "beta2");
  c.mso.adam.epsilon = field<double>(j, "mso", "epsilon");
  c.mso.restarts = field<int>(j, "mso", "restarts");

  c.rfe.target_term_count = optional_field<int>(j, "rfe", "target_terms");
  c.rfe.tolerance_floor = optional_field<double>(j, "rfe", "tolerance_floor");
  c.rfe.max_candidates_per_level = optional_field<int>(j, "rfe", "max_candidates");
  c.rfe.certificate_samples = field<int>(j, "rfe", "certificate_samples");
  c.rfe.certificate_alpha = field<double>(j, "rfe", "certificate_alpha");

  c.verify.separable_count = field<int>(j, "verify", "separable_count");
  c.verify.entangled_count = field<int>(j, "verify", "entangled_count");
  c.verify.alpha = field<double>(j, "verify", "alpha");
  c.verify.p_max = field<double>(j, "verify", "p_max");
  c.verify.tolerance = field<double>(j, "verify", "tolerance");
  c.validate();
  return c;
}

fs::path out_path(const PipelineConfig& cfg, const char* name) { return fs::path(cfg.output) / name; }

void save_config(const PipelineConfig& cfg) {
  atomic_write(out_path(cfg, run_files::kConfig), config_to_json(cfg).dump(2) + "\n");
}

void write_json(const fs::path& path, const json& j) { atomic_write(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

Witness stamp(Witness w, const PipelineConfig& cfg, const std::string& provenance) {
  w.metadata.target = to_string(cfg.target);
  w.metadata.provenance = provenance;
  w.metadata.seed = cfg.seed;
  w.metadata.config_digest = cfg.digest();
  return w;
}

fs::path pick_witness(const PipelineConfig& cfg, const std::optional<fs::path>& given,
                      std::initializer_list<const char*> fallbacks) {
  if (given) return *given;
  for (const char* f : fallbacks)
    if (fs::exists(out_path(cfg, f))) return out_path(cfg, f);
  throw ConfigError("no witness file given and none found in " + cfg.output);
}

DensityMatrix target_density(const PipelineConfig& cfg) { return projector(target_state(cfg.target, cfg.n_qubits)); }

json stats_json(const ClassStats& s) {
  json j{{"count", s.count}, {"min", s.min}, {"max", s.max}, {"misclassified", s.misclassified.size()}};
  std::vector<std::size_t> first(s.misclassified.begin(),
                                 s.misclassified.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(100, s.misclassified.size())));
  j["misclassified_indices"] = first;
  return j;
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

json config_to_json(const PipelineConfig& c) {
  json j;
  j["n_qubits"] = c.n_qubits;
  j["target"] = to_string(c.target);
  if (c.feature_mode == "list") {
    j["features"] = c.feature_list;
  } else {
    j["features"] = c.feature_mode;
  }
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["data"] = {{"extras_per_eigenstate", c.data.extras_per_eigenstate},
               {"sigma", c.data.sigma},
               {"entangled_count", c.data.entangled_count},
               {"p_max", c.data.p_max}};
  j["svm"] = {{"learning_rate", c.svm.learning_rate},
              {"batch_size", c.svm.batch_size},
              {"lambda", c.svm.lambda},
              {"epochs", c.svm.epochs}};
  j["mso"] = {{"max_iterations", c.mso.max_iterations},
              {"convergence_window", c.mso.convergence_window},
              {"relative_tolerance", c.mso.relative_tolerance},
              {"step_size", c.mso.adam.step_size},
              {"beta1", c.mso.adam.beta1},
              {"beta2", c.mso.adam.beta2},
              {"epsilon", c.mso.adam.epsilon},
              {"restarts", c.mso.restarts}};
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  j["rfe"] = {{"target_terms", opt(c.rfe.target_term_count)},
              {"tolerance_floor", opt(c.rfe.tolerance_floor)},
              {"max_candidates", opt(c.rfe.max_candidates_per_level)},
              {"certificate_samples", c.rfe.certificate_samples},
              {"certificate_alpha", c.rfe.certificate_alpha}};
  j["verify"] = {{"separable_count", c.verify.separable_count},
                 {"entangled_count", c.verify.entangled_count},
                 {"alpha", c.verify.alpha},
                 {"p_max", c.verify.p_max},
                 {"tolerance", c.verify.tolerance}};
  return j;
}

void PipelineConfig::validate() const {
  if (n_qubits < 3 || n_qubits > 5) throw ConfigError("config field 'n_qubits' must be 3, 4 or 5 (permutation catalog range)");
  if (data.extras_per_eigenstate < 0) throw ConfigError("config field 'data.extras_per_eigenstate' must be >= 0");
  if (!(data.sigma >= 0.0)) throw ConfigError("config field 'data.sigma' must be >= 0");
  if (data.entangled_count < 1) throw ConfigError("config field 'data.entangled_count' must be >= 1");
  if (!(data.p_max > 0.0 && data.p_max < 1.0)) throw ConfigError("config field 'data.p_max' must lie in (0, 1)");
  try {
    svm.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("svm: ") + e.what());
  }
  mso.validate();
  verify.validate();
  if (output.empty()) throw ConfigError("config field 'output' must not be empty");
  if (feature_mode != "full" && feature_mode != "mermin" && feature_mode != "list" && feature_mode.rfind("file:", 0) != 0)
    throw ConfigError("config field 'features' has unknown mode '" + feature_mode + "'");
  if (feature_mode == "list" && feature_list.empty()) throw ConfigError("config field 'features' is an empty list");
}

FeatureSet PipelineConfig::resolve_features() const {
  FeatureSet out;
  if (feature_mode == "full") {
    out = full_feature_set(n_qubits, false);
  } else if (feature_mode == "mermin") {
    out = mermin_witness(n_qubits).features();
  } else if (feature_mode.rfind("file:", 0) == 0) {
    const Witness w = read_witness(feature_mode.substr(5));
    if (w.n_qubits != n_qubits) throw ConfigError("feature file acts on a different qubit count");
    out = w.features();
  } else {
    try {
      out = parse_feature_set(feature_list);
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("config field 'features': ") + e.what());
    }
  }
  std::erase_if(out, [](const PauliString& p) { return p.is_identity(); });
  if (out.empty()) throw ConfigError("config field 'features' resolves to an empty subset");
  for (const auto& p : out)
    if (p.size() != n_qubits) throw ConfigError("feature " + p.str() + " does not match n_qubits");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t PipelineConfig::stream_seed(const char* name) const { return Rng(seed).derive(name).key(); }

std::string PipelineConfig::digest() const {
  json j = config_to_json(*this);
  j.erase("output");
  return digest_hex(j.dump());
}

PipelineConfig load_config(const std::optional<fs::path>& file, const std::vector<std::string>& overrides) {
  json j = default_config_json();
  if (file) {
    json user;
    try {
      user = json::parse(read_file(*file));
    } catch (const json::parse_error& e) {
      throw ConfigError(file->string() + ": " + e.what());
    } catch (const ResourceError& e) {
      throw ConfigError(e.what());
    }
    overlay(j, user, "");
  }
  for (const auto& o : overrides) apply_override(j, o);
  return config_from_json(j);
}

TrainingSet load_training_set(const fs::path& run_dir) {
  const fs::path manifest_path = run_dir / run_files::kManifest;
  if (!fs::exists(manifest_path)) throw ConfigError("no training data in " + run_dir.string() + " (run gen-data first)");
  const json m = read_json(manifest_path);
  TrainingSet ts;
  ts.n_qubits = m.at("n_qubits").get<int>();
  ts.seed = m.at("data_seed").get<std::uint64_t>();
  for (const char* name : {run_files::kSeparable, run_files::kEntangled}) {
    const fs::path p = run_dir / name;
    const std::string key = fs::path(name).stem().string();
    if (file_digest(p) != m.at("files").at(key).get<std::string>())
      throw InvalidInput(p.string() + " does not match its manifest digest");
    read_samples_csv(p, ts);
  }
  return ts;
}

int cmd_gen_data(const PipelineConfig& cfg, int threads) {
  cfg.validate();
  const FeatureSet features = cfg.resolve_features();
  const TrainingSet ts = build_training_set(cfg.target, cfg.n_qubits, features, cfg.data, cfg.stream_seed("data"), threads);
  save_config(cfg);
  const std::string sep = samples_to_csv(ts, kSeparableLabel);
  const std::string ent = samples_to_csv(ts, kEntangledLabel);
  atomic_write(out_path(cfg, run_files::kSeparable), sep);
  atomic_write(out_path(cfg, run_files::kEntangled), ent);
  json m;
  m["n_qubits"] = cfg.n_qubits;
  m["target"] = to_string(cfg.target);
  m["features"] = json::array();
  for (const auto& f : features) m["features"].push_back(f.str());
  m["counts"] = {{"separable", ts.count(kSeparableLabel)},
                 {"entangled", ts.count(kEntangledLabel)},
                 {"eigenstate", ts.count(SampleOrigin::Eigenstate)},
                 {"perturbed", ts.count(SampleOrigin::Perturbed)},
                 {"werner", ts.count(SampleOrigin::Werner)}};
  m["master_seed"] = cfg.seed;
  m["data_seed"] = ts.seed;
  m["config_digest"] = cfg.digest();
  m["files"] = {{"separable", digest_hex(sep)}, {"entangled", digest_hex(ent)}};
  write_json(out_path(cfg, run_files::kManifest), m);
  std::cout << "samples: " << ts.count(kSeparableLabel) << " separable, " << ts.count(kEntangledLabel)
            << " entangled, " << features.size() << " features\n";
  return kExitOk;
}

int cmd_train(const PipelineConfig& cfg, int threads) {
  (void)threads;
  cfg.validate();
  const TrainingSet ts = load_training_set(cfg.output);
  if (ts.n_qubits != cfg.n_qubits) throw ConfigError("training data has a different qubit count than the config");
  const FeatureSet features = cfg.resolve_features();
  SvmConfig svm = cfg.svm;
  svm.seed = cfg.stream_seed("svm");
  const Hyperplane h = train(ts, features, svm);
  const Witness w = stamp(from_hyperplane(h, cfg.n_qubits), cfg, "svm");
  save_config(cfg);
  write_witness(out_path(cfg, run_files::kTrained), w);
  const double acc = training_accuracy(h, ts);
  const SvmProblem prob = make_problem(ts, features);
  write_json(out_path(cfg, run_files::kTrainSummary),
             {{"features", features.size()},
              {"terms", w.term_count()},
              {"samples", ts.samples.size()},
              {"training_accuracy", acc},
              {"objective", svm_objective(prob, h.weights, h.bias, svm.lambda)},
              {"bias", h.bias}});
  std::cout << "trained " << w.term_count() << "-term witness, training accuracy " << fmt(acc) << "\n";
  return kExitOk;
}

int cmd_adjust(const PipelineConfig& cfg, const std::optional<fs::path>& witness, int threads) {
  cfg.validate();
  const Witness w = read_witness(pick_witness(cfg, witness, {run_files::kTrained}));
  if (w.n_qubits != cfg.n_qubits) throw ConfigError("witness qubit count differs from the config");
  MsoConfig mso = cfg.mso;
  mso.seed = cfg.stream_seed("mso");
  const MsoResult r = optimize(w, mso, threads);
  Witness a = adjust_bias(w, r);
  a = stamp(a, cfg, "mso-adjusted");
  save_config(cfg);
  write_witness(out_path(cfg, run_files::kAdjusted), a);
  std::ostringstream trace;
  write_trace_csv(trace, r);
  atomic_write(out_path(cfg, run_files::kMsoTrace), trace.str());

  const DensityMatrix rho_e = target_density(cfg);
  json s;
  s["min_expectation"] = r.min_expectation;
  s["eigenstate_floor"] = r.eigenstate_floor;
  s["eigenstate_won"] = r.eigenstate_won;
  s["restart_index"] = r.restart_index;
  s["iterations_used"] = r.iterations_used;
  s["bias_before"] = w.identity_coefficient();
  s["bias_after"] = a.identity_coefficient();
  s["adjusted_eigenstate_min"] = eigenstate_minimum(a, threads).value;
  s["noise_tolerance_scan"] = noise_tolerance_scan(a, rho_e).p_star;
  s["noise_tolerance_analytic"] = noise_tolerance_analytic(a, rho_e).p_star;
  s["restarts"] = json::array();
  for (const auto& t : r.restarts)
    s["restarts"].push_back({{"restart", t.restart},
                             {"best_loss", t.diverged ? json(nullptr) : json(t.best_loss)},
                             {"iterations", t.losses.size()},
                             {"diverged", t.diverged}});
  write_json(out_path(cfg, run_files::kMsoSummary), s);
  std::cout << "separable minimum " << fmt(r.min_expectation, 9) << " (eigenstate floor " << fmt(r.eigenstate_floor)
            << "), bias " << fmt(w.identity_coefficient(), 9) << " -> " << fmt(a.identity_coefficient(), 9) << "\n";
  return kExitOk;
}

int cmd_rfe(const PipelineConfig& cfg, const std::optional<fs::path>& witness, int threads) {
  cfg.validate();
  const Witness w = read_witness(pick_witness(cfg, witness, {run_files::kAdjusted}));
  if (w.n_qubits != cfg.n_qubits) throw ConfigError("witness qubit count differs from the config");
  const TrainingSet ts = load_training_set(cfg.output);
  RfeConfig rc = cfg.rfe;
  rc.svm = cfg.svm;
  rc.svm.seed = cfg.stream_seed("svm");
  rc.mso = cfg.mso;
  rc.mso.seed = cfg.stream_seed("mso");
  rc.target = cfg.target;
  rc.threads = threads;
  rc.certificate_seed = cfg.stream_seed("verify");
  try {
    rc.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  const RfeOutcome out = rfe_run(w, ts, rc);
  const Witness final_w = stamp(out.witness, cfg, out.trace.levels.empty() ? w.metadata.provenance : "rfe");
  save_config(cfg);
  write_witness(out_path(cfg, run_files::kRfeWitness), final_w);

  const DensityMatrix rho_e = target_density(cfg);
  json t;
  t["initial_terms"] = out.trace.initial_terms;
  t["initial_tolerance"] = out.trace.initial_tolerance;
  t["final_terms"] = final_w.term_count();
  t["final_tolerance_scan"] = noise_tolerance_scan(final_w, rho_e).p_star;
  t["levels"] = json::array();
  std::ostringstream levels, cands;
  levels << "level,terms,removed,tolerance,proxy_tolerance,accepted,wall_seconds\n";
  cands << "level,removed,proxy_minimum,tolerance\n";
  bool monotone = true;
  double prev = out.trace.initial_tolerance;
  for (std::size_t i = 0; i < out.trace.levels.size(); ++i) {
    const auto& l = out.trace.levels[i];
    json lj;
    lj["removed"] = l.removed.str();
    lj["terms"] = l.retained.size() + 1;
    lj["retained"] = json::array();
    for (const auto& f : l.retained) lj["retained"].push_back(f.str());
    lj["tolerance"] = l.tolerance;
    lj["proxy_tolerance"] = l.proxy_tolerance;
    lj["accepted"] = l.accepted;
    lj["wall_seconds"] = l.wall_seconds;
    lj["candidates"] = json::array();
    for (const auto& c : l.candidates) {
      lj["candidates"].push_back({{"removed", c.removed.str()}, {"proxy_minimum", c.proxy_minimum}, {"tolerance", c.tolerance}});
      cands << i + 1 << ',' << c.removed.str() << ',' << fmt(c.proxy_minimum, 17) << ',' << fmt(c.tolerance, 17) << '\n';
    }
    t["levels"].push_back(lj);
    levels << i + 1 << ',' << l.retained.size() + 1 << ',' << l.removed.str() << ',' << fmt(l.tolerance, 17) << ','
           << fmt(l.proxy_tolerance, 17) << ',' << (l.accepted ? 1 : 0) << ',' << fmt(l.wall_seconds) << '\n';
    if (l.accepted && l.tolerance < prev) monotone = false;
    if (l.accepted) prev = l.tolerance;
  }
  t["monotone"] = monotone;
  write_json(out_path(cfg, run_files::kRfeTrace), t);
  atomic_write(out_path(cfg, run_files::kRfeLevels), levels.str());
  atomic_write(out_path(cfg, run_files::kRfeCandidates), cands.str());
  std::cout << "rfe: " << out.trace.initial_terms << " -> " << final_w.term_count() << " terms, tolerance "
            << fmt(out.trace.initial_tolerance) << " -> " << fmt(t["final_tolerance_scan"].get<double>())
            << (monotone ? "" : " (tolerance fell at some level)") << "\n";
  return kExitOk;
}

int cmd_verify(const PipelineConfig& cfg, const std::optional<fs::path>& witness, int threads) {
  cfg.validate();
  const fs::path path = pick_witness(cfg, witness, {run_files::kRfeWitness, run_files::kAdjusted, run_files::kTrained});
  const Witness w = read_witness(path);
  if (w.n_qubits != cfg.n_qubits) throw ConfigError("witness qubit count differs from the config");
  const VerificationReport v = verify_witness(w, cfg.target, cfg.verify, Rng(cfg.stream_seed("verify")), threads);
  save_config(cfg);
  json j;
  // Relative to the run directory when inside it, so reruns elsewhere match byte for byte.
  const fs::path rel = fs::relative(path, cfg.output);
  j["witness"] = (!rel.empty() && *rel.begin() != "..") ? rel.generic_string() : path.string();
  j["eigenstate_min"] = v.separable.eigenstate_min;
  j["separable"] = stats_json(v.separable.samples);
  j["entangled"] = stats_json(v.entangled);
  j["alpha"] = cfg.verify.alpha;
  j["p_max"] = cfg.verify.p_max;
  j["passed"] = v.passed();
  write_json(out_path(cfg, run_files::kVerify), j);
  std::cout << "separable: " << v.separable.samples.count << " samples, min " << fmt(v.separable.samples.min)
            << ", eigenstate min " << fmt(v.separable.eigenstate_min) << ", misclassified "
            << v.separable.samples.misclassified.size() << "\nentangled: " << v.entangled.count << " samples, max "
            << fmt(v.entangled.max) << ", misclassified " << v.entangled.misclassified.size() << "\n"
            << (v.passed() ? "verification passed" : "verification FAILED") << "\n";
  return v.passed() ? kExitOk : kExitVerification;
}

int cmd_compare(const PipelineConfig& cfg, const std::optional<fs::path>& witness, const std::string& reference) {
  cfg.validate();
  const Witness w = read_witness(pick_witness(cfg, witness, {run_files::kAdjusted, run_files::kTrained}));
  const Witness ref = reference == "mermin" ? mermin_witness(w.n_qubits) : read_witness(reference);
  if (ref.n_qubits != w.n_qubits) throw InvalidInput("witness and reference act on different qubit counts");
  const Witness nw = normalize(w, MatchIdentityOf{&ref});
  const CoefficientComparison cmp = percent_error_vs(nw, ref);

  std::ostringstream csv, txt;
  csv << "feature,reference,witness,percent_error\n";
  csv.precision(17);
  txt << std::left << std::setw(12) << "Feature" << std::right << std::setw(14) << "Reference" << std::setw(14)
      << "Witness" << std::setw(14) << "Percent err" << '\n';
  const PauliString id = PauliString::identity(w.n_qubits);
  std::vector<PauliString> rows{id};
  for (const auto& [p, c] : ref.terms)
    if (!p.is_identity()) rows.push_back(p);
  for (const auto& p : cmp.only_in_witness) rows.push_back(p);
  for (const auto& p : rows) {
    const auto r = ref.terms.find(p);
    const auto x = nw.terms.find(p);
    const std::string rs = r == ref.terms.end() ? "-" : fmt(r->second);
    const std::string xs = x == nw.terms.end() ? "-" : fmt(x->second);
    std::string es = "-";
    if (p.is_identity()) {
      es = "normalized";
    } else if (auto e = cmp.percent_error.find(p); e != cmp.percent_error.end()) {
      es = fmt(e->second, 4);
    }
    csv << p.str() << ',' << (r == ref.terms.end() ? "" : fmt(r->second, 17)) << ','
        << (x == nw.terms.end() ? "" : fmt(x->second, 17)) << ','
        << (es == "-" || es == "normalized" ? "" : fmt(cmp.percent_error.at(p), 17)) << '\n';
    txt << std::left << std::setw(12) << p.str() << std::right << std::setw(14) << rs << std::setw(14) << xs
        << std::setw(14) << es << '\n';
  }
  txt << "max |percent error|: " << fmt(cmp.max_abs_error(), 4) << '\n';
  if (!cmp.only_in_reference.empty()) {
    txt << "missing from witness:";
    for (const auto& p : cmp.only_in_reference) txt << ' ' << p.str();
    txt << '\n';
  }
  if (!cmp.only_in_witness.empty()) {
    txt << "absent from reference:";
    for (const auto& p : cmp.only_in_witness) txt << ' ' << p.str();
    txt << '\n';
  }
  atomic_write(out_path(cfg, run_files::kCompareCsv), csv.str());
  atomic_write(out_path(cfg, run_files::kCompareText), txt.str());
  std::cout << txt.str();
  return kExitOk;
}

int cmd_report(const fs::path& run_dir) {
  std::vector<std::string> missing;
  auto need = [&](const char* name) {
    const bool ok = fs::exists(run_dir / name);
    if (!ok) missing.emplace_back(name);
    return ok;
  };
  std::ostringstream md;
  md << "# wforge run report\n\n";

  std::optional<PipelineConfig> cfg;
  if (need(run_files::kConfig)) cfg = load_config(run_dir / run_files::kConfig, {});
  std::optional<json> manifest;
  if (need(run_files::kManifest)) manifest = read_json(run_dir / run_files::kManifest);
  if (cfg) {
    md << "- qubits: " << cfg->n_qubits << ", target: " << to_string(cfg->target) << ", master seed: " << cfg->seed << "\n";
    md << "- config digest: `" << cfg->digest() << "`";
    if (manifest) {
      const auto mdig = manifest->at("config_digest").get<std::string>();
      md << (mdig == cfg->digest() ? " (matches the data manifest)" : " (data manifest has `" + mdig + "`)");
    }
    md << "\n";
    const double mem = estimate_memory_bytes(cfg->n_qubits);
    md << "- optimizer memory estimate for N=" << cfg->n_qubits << ": " << fmt(mem, 4) << " bytes ("
       << fmt(mem / std::pow(2.0, 30), 4) << " GiB)\n";
  }
  md << "\n";

  md << "## Training\n\n";
  if (manifest) {
    const auto& c = manifest->at("counts");
    md << "- samples: " << c.at("separable") << " separable (" << c.at("eigenstate") << " eigenstates, "
       << c.at("perturbed") << " perturbed), " << c.at("entangled") << " entangled\n";
    md << "- features: " << manifest->at("features").size() << "\n";
  }
  if (need(run_files::kTrainSummary)) {
    const json t = read_json(run_dir / run_files::kTrainSummary);
    md << "- trained witness: " << t.at("terms") << " terms, training accuracy " << t.at("training_accuracy")
       << ", objective " << t.at("objective") << "\n";
  } else {
    md << "_Training summary missing._\n";
  }
  md << "\n## Bias adjustment\n\n";
  if (need(run_files::kMsoSummary)) {
    const json s = read_json(run_dir / run_files::kMsoSummary);
    md << "- separable minimum found: " << s.at("min_expectation") << " (eigenstate floor " << s.at("eigenstate_floor")
       << ")\n";
    md << "- bias: " << s.at("bias_before") << " -> " << s.at("bias_after") << "\n";
    md << "- best restart " << s.at("restart_index") << " after " << s.at("iterations_used") << " iterations\n";
    md << "- noise tolerance (0.001 scan): " << s.at("noise_tolerance_scan") << "\n\n";
    md << "| restart | best loss | iterations |\n|---|---|---|\n";
    for (const auto& r : s.at("restarts")) md << "| " << r.at("restart") << " | " << r.at("best_loss") << " | " << r.at("iterations") << " |\n";
  } else {
    md << "_Bias adjustment missing._\n";
  }
  md << "\n## Feature elimination\n\n";
  if (need(run_files::kRfeTrace)) {
    const json t = read_json(run_dir / run_files::kRfeTrace);
    md << "- terms: " << t.at("initial_terms") << " -> " << t.at("final_terms") << "\n";
    md << "- tolerance: " << t.at("initial_tolerance") << " -> " << t.at("final_tolerance_scan") << " (scan)\n";
    if (!t.at("monotone").get<bool>()) md << "- **warning:** tolerance decreased at some level\n";
    md << "\n| level | terms | removed | tolerance | accepted |\n|---|---|---|---|---|\n";
    int i = 0;
    for (const auto& l : t.at("levels"))
      md << "| " << ++i << " | " << l.at("terms") << " | " << l.at("removed").get<std::string>() << " | "
         << l.at("tolerance") << " | " << (l.at("accepted").get<bool>() ? "yes" : "no") << " |\n";
  } else {
    md << "_Feature elimination missing._\n";
  }
  md << "\n## Verification\n\n";
  if (need(run_files::kVerify)) {
    const json v = read_json(run_dir / run_files::kVerify);
    const auto& s = v.at("separable");
    const auto& e = v.at("entangled");
    md << "- witness: `" << v.at("witness").get<std::string>() << "`\n";
    md << "- eigenstate minimum: " << v.at("eigenstate_min") << "\n";
    md << "- separable: " << s.at("count") << " samples (alpha " << v.at("alpha") << "), min " << s.at("min")
       << ", misclassified " << s.at("misclassified") << "\n";
    md << "- entangled: " << e.at("count") << " Werner samples (p <= " << v.at("p_max") << "), max " << e.at("max")
       << ", misclassified " << e.at("misclassified") << "\n";
    md << "- result: " << (v.at("passed").get<bool>() ? "passed" : "FAILED") << "\n";
  } else {
    md << "_Verification missing._\n";
  }
  md << "\n## Comparison\n\n";
  if (need(run_files::kCompareText)) {
    md << "```\n" << read_file(run_dir / run_files::kCompareText) << "```\n";
  } else {
    md << "_Comparison missing._\n";
  }
  if (!missing.empty()) {
    md << "\n## Missing artifacts\n\n";
    for (const auto& m : missing) md << "- `" << m << "`\n";
  }
  atomic_write(run_dir / run_files::kReport, md.str());
  std::cout << "wrote " << (run_dir / run_files::kReport).string();
  if (!missing.empty()) std::cout << " (" << missing.size() << " artifacts missing)";
  std::cout << "\n";
  return missing.empty() ? kExitOk : kExitVerification;
}

}  // namespace wforge
