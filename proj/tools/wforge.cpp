#include <CLI11.hpp>

#include <iostream>

#include "wforge/parallel.hpp"
#include "wforge/pipeline.hpp"

using namespace wforge;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string output;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON config file");
  sub->add_option("--seed", c.seed, "master seed (overrides the config)");
  sub->add_option("--threads", c.threads, "worker threads (default: WFORGE_THREADS or 1)");
  sub->add_option("--output", c.output, "run directory (overrides the config)");
  sub->add_option("--set", c.sets, "override a config value, e.g. --set svm.epochs=300")->take_all();
}

PipelineConfig resolve(const Common& c) {
  std::vector<std::string> sets = c.sets;
  if (c.seed) sets.push_back("seed=" + std::to_string(*c.seed));
  if (!c.output.empty()) sets.push_back("output=" + nlohmann::json(c.output).dump());
  std::optional<fs::path> file;
  if (!c.config.empty()) file = c.config;
  return load_config(file, sets);
}

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wforge: SVM-derived entanglement witnesses"};
  app.require_subcommand(1);

  Common common;
  std::string witness;
  std::string reference = "mermin";
  std::string run_dir;

  auto* gen = app.add_subcommand("gen-data", "generate separable and entangled training samples");
  add_common(gen, common);
  auto* trn = app.add_subcommand("train", "train the SVM and write the raw witness");
  add_common(trn, common);
  auto* adj = app.add_subcommand("adjust", "shift the bias to the separable minimum found by the optimizer");
  add_common(adj, common);
  adj->add_option("--witness", witness, "witness file (default: the run's trained witness)");
  auto* rfe = app.add_subcommand("rfe", "recursive feature elimination");
  add_common(rfe, common);
  rfe->add_option("--witness", witness, "witness file (default: the run's adjusted witness)");
  auto* ver = app.add_subcommand("verify", "check a witness on fresh separable and entangled test states");
  add_common(ver, common);
  ver->add_option("--witness", witness, "witness file (default: newest witness in the run)");
  auto* cmp = app.add_subcommand("compare", "coefficient table against a reference witness");
  add_common(cmp, common);
  cmp->add_option("--witness", witness, "witness file (default: the run's adjusted witness)");
  cmp->add_option("--reference", reference, "\"mermin\" or a witness file");
  auto* rep = app.add_subcommand("report", "collect a run directory into report.md");
  rep->add_option("run_dir", run_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (rep->parsed()) return cmd_report(run_dir);
    const PipelineConfig cfg = resolve(common);
    const int threads = resolve_threads(common.threads);
    if (gen->parsed()) return cmd_gen_data(cfg, threads);
    if (trn->parsed()) return cmd_train(cfg, threads);
    if (adj->parsed()) return cmd_adjust(cfg, opt_path(witness), threads);
    if (rfe->parsed()) return cmd_rfe(cfg, opt_path(witness), threads);
    if (ver->parsed()) return cmd_verify(cfg, opt_path(witness), threads);
    if (cmp->parsed()) return cmd_compare(cfg, opt_path(witness), reference);
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    if (!e.diagnostics().empty()) std::cerr << e.diagnostics() << "\n";
    return kExitNumerical;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
