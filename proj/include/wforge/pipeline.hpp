#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wforge/io.hpp"
#include "wforge/rfe.hpp"

namespace wforge {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2, kExitVerification = 3 };

struct PipelineConfig {
  int n_qubits = 3;
  TargetKind target = TargetKind::GHZ;
  // "full", "mermin", "file:PATH" (a witness JSON whose terms are used), or an
  // explicit list of labels.
  std::string feature_mode = "mermin";
  std::vector<std::string> feature_list;
  TrainingDataConfig data;
  SvmConfig svm;
  MsoConfig mso;
  RfeConfig rfe;
  VerificationConfig verify;
  std::uint64_t seed = 0;
  std::string output = "run";

  void validate() const;
  // Non-identity features to train on.
  FeatureSet resolve_features() const;
  std::uint64_t stream_seed(const char* name) const;
  // Digest of the resolved config without the output directory.
  std::string digest() const;
};

json config_to_json(const PipelineConfig& cfg);
// Starts from defaults, overlays `file` (if any) and then each "a.b=value"
// override. Unknown keys and ill-typed values raise ConfigError.
PipelineConfig load_config(const std::optional<fs::path>& file, const std::vector<std::string>& overrides);

// Each command reads and writes inside cfg.output and returns an ExitCode.
int cmd_gen_data(const PipelineConfig& cfg, int threads);
int cmd_train(const PipelineConfig& cfg, int threads);
int cmd_adjust(const PipelineConfig& cfg, const std::optional<fs::path>& witness, int threads);
int cmd_rfe(const PipelineConfig& cfg, const std::optional<fs::path>& witness, int threads);
int cmd_verify(const PipelineConfig& cfg, const std::optional<fs::path>& witness, int threads);
// `reference` is "mermin" or a witness file.
int cmd_compare(const PipelineConfig& cfg, const std::optional<fs::path>& witness, const std::string& reference);
int cmd_report(const fs::path& run_dir);

// Run-directory layout shared by the commands.
namespace run_files {
inline constexpr const char* kConfig = "config.json";
inline constexpr const char* kSeparable = "data/separable.csv";
inline constexpr const char* kEntangled = "data/entangled.csv";
inline constexpr const char* kManifest = "data/manifest.json";
inline constexpr const char* kTrained = "witness_trained.json";
inline constexpr const char* kTrainSummary = "train_summary.json";
inline constexpr const char* kAdjusted = "witness_adjusted.json";
inline constexpr const char* kMsoTrace = "mso_trace.csv";
inline constexpr const char* kMsoSummary = "mso_summary.json";
inline constexpr const char* kRfeWitness = "witness_rfe.json";
inline constexpr const char* kRfeTrace = "rfe_trace.json";
inline constexpr const char* kRfeLevels = "rfe_levels.csv";
inline constexpr const char* kRfeCandidates = "rfe_candidates.csv";
inline constexpr const char* kVerify = "verify.json";
inline constexpr const char* kCompareCsv = "compare.csv";
inline constexpr const char* kCompareText = "compare.txt";
inline constexpr const char* kReport = "report.md";
}  // namespace run_files

// Loads the sample files and checks them against the manifest digests.
TrainingSet load_training_set(const fs::path& run_dir);

}  // namespace wforge
