#ifndef FRAUDBENCH_PDA_HPP
#define FRAUDBENCH_PDA_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fraudbench/detectors.hpp"
#include "fraudbench/dp.hpp"
#include "fraudbench/graph.hpp"

namespace fraudbench {

struct PdaConfig {
  int k = 2;           // partition count
  double rho = 1.0;    // fraud subsample rate in (0, 1]
  double epsilon = 1.0;
  bool noise_enabled = true;

  void validate(const LabeledGraph& graph) const;
};

// Accuracy statistic with range-1 global sensitivity (AUC or best-threshold F1).
using AccuracyFn = std::function<double(const ScoreVector&, const LabeledGraph&)>;

struct PdaReleaseRecord {
  double released = 0.0;        // partition mean (+ Laplace noise if enabled)
  double partition_mean = 0.0;  // the noise-free aggregate
  double epsilon_charged = 0.0;
  std::uint64_t seed = 0;
};

// Benign vertices split uniformly into k near-equal sets; each partition gets
// an independent uniform fraud subset of size max(1, round(rho * n_F)).
std::vector<LabeledGraph> partition_duplicate(const LabeledGraph& graph,
                                              const PdaConfig& config,
                                              std::uint64_t seed);

PdaReleaseRecord pda_release(const CompiledDetector& detector, const LabeledGraph& graph,
                             const PdaConfig& config, const AccuracyFn& accuracy,
                             BudgetLedger& ledger, std::uint64_t seed,
                             const std::string& charge_label = "pda_release");

// Normal approximation of the expected degree-detector AUC on an SBM graph:
// Phi(E[delta] / SD[delta]) for the degree gap between a random fraud and a
// random benign vertex.
double expected_auc_sbm_degree(const SbmParams& params);

struct BiasRow {
  double rho = 0.0;
  double mean_bias = 0.0;
  double std_err = 0.0;
};

// Noise-free partition bias of the degree detector on sampled SBM graphs:
// mean over partitions of AUC minus the full-graph AUC, per subsample rate.
std::vector<BiasRow> bias_simulation(const SbmParams& params, int k,
                                     const std::vector<double>& rho_grid, int trials,
                                     std::uint64_t seed);

}  // namespace fraudbench

#endif
