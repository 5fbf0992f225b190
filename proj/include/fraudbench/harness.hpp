#ifndef FRAUDBENCH_HARNESS_HPP
#define FRAUDBENCH_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fraudbench/graph.hpp"
#include "fraudbench/metrics.hpp"
#include "fraudbench/pda.hpp"
#include "fraudbench/synth.hpp"

namespace fraudbench {

struct MechanismConfig {
  enum class Type { Exact, Pda, Synth };
  Type type = Type::Exact;
  int k = 5;
  double rho = 1.0;
  SynthMethod method = SynthMethod::Sbm;
  double d_multiplier = 1.0;

  std::string name() const;
  static MechanismConfig from_string(const std::string& name);
};

struct ExperimentConfig {
  // graph source: either files or SBM params, optionally with an injected clique
  std::string edges_path, labels_path, metadata_path;
  std::optional<SbmParams> sbm;
  int clique_size = 0;
  double clique_density = 0.0;

  std::vector<std::string> detectors;  // builtin detector names
  std::string mode = "one_shot";       // one_shot | leaderboard | top1 | decomposition
  MechanismConfig mechanism;
  std::vector<MechanismConfig> grid;   // decomposition mode

  double epsilon = 1.0;
  double delta = 1e-8;
  int trials = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

// Flat `key = value` config file; '#' comments. Documented keys: graph.*,
// detectors, mode, mechanism, mechanism.*, epsilon, delta, trials, seed.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

struct ReleaseRecord {
  int trial = 0;
  std::string mechanism;
  std::string mode;
  // one row per released value; top1 carries only the winner's name
  struct Row {
    std::string detector;
    std::optional<double> value;
    std::optional<double> noiseless_value;
  };
  std::vector<Row> rows;
  double epsilon_charged = 0.0;
  double delta_charged = 0.0;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;  // not serialized; outputs stay seed-deterministic
  std::vector<BudgetLedger::Entry> charges;
};

LabeledGraph build_graph(const ExperimentConfig& config);

std::vector<ReleaseRecord> run_one_shot(const ExperimentConfig& config,
                                        const LabeledGraph& graph);
std::vector<ReleaseRecord> run_leaderboard(const ExperimentConfig& config,
                                           const LabeledGraph& graph);
std::vector<ReleaseRecord> run_top1(const ExperimentConfig& config,
                                    const LabeledGraph& graph);

struct DecompositionRow {
  std::string mechanism;
  double noiseless_error_mean = 0.0;
  double noiseless_error_stderr = 0.0;
  double noisy_error_mean = 0.0;
  double noisy_error_stderr = 0.0;
  int trials = 0;
};

// Top-1 error of each mechanism with noise disabled (x) and enabled (y).
std::vector<DecompositionRow> run_decomposition(const ExperimentConfig& config,
                                                const LabeledGraph& graph);

// Dispatches on config.mode; writes the result CSV to out_path and the
// per-trial ledgers to out_path + ".ledger.json".
void run_experiment(const ExperimentConfig& config, const std::string& out_path);

std::string records_to_csv(const std::vector<ReleaseRecord>& records);
std::string decomposition_to_csv(const std::vector<DecompositionRow>& rows);

}  // namespace fraudbench

#endif
