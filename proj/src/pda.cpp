#include "fraudbench/pda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fraudbench/metrics.hpp"

namespace fraudbench {

void PdaConfig::validate(const LabeledGraph& graph) const {
  if (k < 2) throw std::invalid_argument("pda: k must be >= 2");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("pda: rho must be in (0,1]");
  if (!(epsilon > 0.0)) throw std::invalid_argument("pda: epsilon must be positive");
  if (k > graph.n_benign()) throw std::invalid_argument("pda: k exceeds benign count");
}

std::vector<LabeledGraph> partition_duplicate(const LabeledGraph& graph,
                                              const PdaConfig& config,
                                              std::uint64_t seed) {
  config.validate(graph);
  Rng rng(seed);

  std::vector<int> benign = graph.benign_vertices();
  std::vector<int> fraud = graph.fraud_vertices();
  // Fisher-Yates
  for (std::size_t i = benign.size(); i > 1; --i)
    std::swap(benign[i - 1], benign[rng.uniform_index(i)]);

  const int k = config.k;
  const auto nb = static_cast<int>(benign.size());
  const int base = nb / k;
  const int remainder = nb % k;

  std::size_t fraud_take = 0;
  if (!fraud.empty()) {
    fraud_take = static_cast<std::size_t>(
        std::max<std::int64_t>(1, std::llround(config.rho * static_cast<double>(fraud.size()))));
    fraud_take = std::min(fraud_take, fraud.size());
  }

  std::vector<LabeledGraph> parts;
  parts.reserve(k);
  int offset = 0;
  for (int i = 0; i < k; ++i) {
    const int sz = base + (i < remainder ? 1 : 0);
    std::vector<int> members(benign.begin() + offset, benign.begin() + offset + sz);
    offset += sz;

    // independent uniform fraud subset per partition
    for (std::size_t j = 0; j < fraud_take; ++j) {
      auto pick = j + rng.uniform_index(fraud.size() - j);
      std::swap(fraud[j], fraud[pick]);
    }
    members.insert(members.end(), fraud.begin(), fraud.begin() + fraud_take);
    std::sort(members.begin(), members.end());
    parts.push_back(graph.induced_subgraph(members));
  }
  return parts;
}

PdaReleaseRecord pda_release(const CompiledDetector& detector, const LabeledGraph& graph,
                             const PdaConfig& config, const AccuracyFn& accuracy,
                             BudgetLedger& ledger, std::uint64_t seed,
                             const std::string& charge_label) {
  auto parts = partition_duplicate(graph, config, seed);
  double mean = 0.0;
  for (const auto& part : parts) mean += accuracy(detector(part), part);
  mean /= static_cast<double>(parts.size());

  PdaReleaseRecord rec;
  rec.partition_mean = mean;
  rec.seed = seed;
  if (config.noise_enabled) {
    ledger.charge(charge_label, config.epsilon);
    Rng noise_rng(derive_seed(seed, 0x9da0u));
    rec.released = mean + sample_laplace(1.0 / (config.k * config.epsilon), noise_rng);
    rec.epsilon_charged = config.epsilon;
  } else {
    rec.released = mean;
  }
  return rec;
}

double expected_auc_sbm_degree(const SbmParams& params) {
  params.validate();
  const double nf = static_cast<double>(params.n_fraud);
  const double nb = static_cast<double>(params.n_benign);
  const double mean = (nf - 1.0) * params.p_fraud - (nb - 1.0) * params.p_benign;
  const double var = (nf - 1.0) * params.p_fraud * (1.0 - params.p_fraud) +
                     (nb - 1.0) * params.p_benign * (1.0 - params.p_benign);
  if (!(var > 0.0)) throw std::invalid_argument("expected_auc_sbm_degree: zero variance");
  const double z = mean / std::sqrt(var);
  return 0.5 * std::erfc(-z / std::sqrt(2.0));  // standard normal CDF at z
}

std::vector<BiasRow> bias_simulation(const SbmParams& params, int k,
                                     const std::vector<double>& rho_grid, int trials,
                                     std::uint64_t seed) {
  params.validate();
  if (trials < 1) throw std::invalid_argument("bias_simulation: trials must be >= 1");

  // the degree detector oriented so fraud scores higher under p_F > p_B
  CompiledDetector degree_detector = [](const LabeledGraph& g) {
    ScoreVector s(g.n());
    for (int v = 0; v < g.n(); ++v) s[v] = static_cast<double>(g.degree(v));
    return s;
  };

  std::vector<BiasRow> rows;
  for (std::size_t r = 0; r < rho_grid.size(); ++r) {
    PdaConfig cfg;
    cfg.k = k;
    cfg.rho = rho_grid[r];
    cfg.epsilon = 1.0;  // unused, noise off
    cfg.noise_enabled = false;

    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
      std::uint64_t trial_seed = derive_seed(seed, r * 1000003ULL + t);
      LabeledGraph g = sample_sbm(params, trial_seed);
      double full = auc(degree_detector(g), g);
      auto parts = partition_duplicate(g, cfg, derive_seed(trial_seed, 1));
      double mean = 0.0;
      for (const auto& part : parts) mean += auc(degree_detector(part), part);
      mean /= static_cast<double>(parts.size());
      double bias = mean - full;
      sum += bias;
      sumsq += bias * bias;
    }
    BiasRow row;
    row.rho = rho_grid[r];
    row.mean_bias = sum / trials;
    if (trials > 1) {
      double var = (sumsq - sum * sum / trials) / (trials - 1);
      row.std_err = std::sqrt(std::max(0.0, var) / trials);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fraudbench
