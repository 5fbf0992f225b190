#ifndef FRAUDBENCH_SYNTH_HPP
#define FRAUDBENCH_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fraudbench/dp.hpp"
#include "fraudbench/graph.hpp"

namespace fraudbench {

enum class SynthMethod { Sbm, Agm, AgmTriangles, TopmFilter };

SynthMethod synth_method_from_string(const std::string& name);
const char* synth_method_name(SynthMethod m);

struct NoisyStatEntry {
  Statistic statistic;
  double noisy_value = 0.0;  // clamped released value (scalar statistics)
  double noise_scale = 0.0;  // 0 when released exactly
  double epsilon_share = 0.0;
};

// Private estimates of the sufficient statistics a synthesis method consumes.
// Fraud-only statistics carry no noise. Counts are clamped to >= 0 and degree
// entries to [0, D] after noising.
struct NoisyStats {
  SynthMethod method = SynthMethod::Sbm;
  std::int64_t d = 0;              // truncation threshold used
  double smooth_sensitivity = 0.0; // S^beta_trunc on the truncated graph
  double beta = 0.0;
  bool noise_enabled = true;

  int n_benign = 0;  // after truncation
  int n_fraud = 0;

  std::vector<NoisyStatEntry> entries;          // scalar statistics
  std::vector<double> noisy_degree_sequence;    // agm methods, clamped to [0, D]
  double degree_noise_scale = 0.0;
  double degree_epsilon_share = 0.0;
  double adjacency_noise_scale = 0.0;           // topm, per upper-triangle entry
  double adjacency_epsilon_share = 0.0;

  std::int64_t exact_ff_edges = 0;  // fraud block, released without noise

  double value(Statistic s) const;
  double scale(Statistic s) const;
};

// Algorithm: truncate benign vertices with degree > d, compute the smooth
// sensitivity of truncation, split epsilon evenly across the statistics the
// method needs, and add Laplace(2 * S * Delta_D / eps_share) to each
// benign-involving statistic. noise_enabled=false returns exact statistics.
NoisyStats estimate_stats_private(const LabeledGraph& graph, SynthMethod method,
                                  double epsilon, double delta, std::int64_t d,
                                  bool noise_enabled, std::uint64_t seed);

LabeledGraph fit_and_sample_sbm(const NoisyStats& stats, std::uint64_t seed);

LabeledGraph sample_agm(const NoisyStats& stats, bool with_triangles, std::uint64_t seed);

// Per benign-involving pair: noisy score = 1[edge] + Laplace(per-entry scale);
// keeps the (m~ - m_ff) highest-scoring pairs. The fraud block is copied
// exactly. Noise off reproduces the input graph bit-exactly.
LabeledGraph topm_filter(const LabeledGraph& truncated_graph, const NoisyStats& stats,
                         std::uint64_t seed);

// Full pipeline: derive D from the benign max degree, estimate, sample.
LabeledGraph generate_synthetic(const LabeledGraph& graph, SynthMethod method,
                                double epsilon, double delta, double d_multiplier,
                                bool noise_enabled, std::uint64_t seed);

struct StatErrorRow {
  SynthMethod method;
  double d_multiplier = 0.0;
  std::string statistic;
  double mean_relative_error = 0.0;
};

// Mean over trials of the released statistics' relative error. Scalars use
// |noisy - true| / |true| (absolute when true == 0). Vector statistics use
// aggregate L1: sum|noisy_i - true_i| / sum|true_i|; the degree sequence is
// measured on the clamped released values, the adjacency on the raw noisy
// scores before filtering.
std::vector<StatErrorRow> stat_error_report(const LabeledGraph& graph,
                                            const std::vector<SynthMethod>& methods,
                                            double epsilon, double delta,
                                            const std::vector<double>& d_multipliers,
                                            int trials, std::uint64_t seed);

}  // namespace fraudbench

#endif
