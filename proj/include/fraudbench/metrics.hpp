#ifndef FRAUDBENCH_METRICS_HPP
#define FRAUDBENCH_METRICS_HPP

#include <map>
#include <string>
#include <vector>

#include "fraudbench/detectors.hpp"
#include "fraudbench/graph.hpp"

namespace fraudbench {

// Descending by value, ties broken lexicographically by name.
struct Leaderboard {
  std::vector<std::pair<std::string, double>> entries;
  bool noisy = false;

  static Leaderboard from_values(const std::map<std::string, double>& values, bool noisy);
};

// Strict-inequality AUC: ties contribute 0, not the conventional half credit.
double auc(const ScoreVector& scores, const LabeledGraph& graph);

// Conventional ROC convention (ties count 1/2); used for attack evaluation,
// not the benchmark statistic.
double auc_half_ties(const ScoreVector& scores, const LabeledGraph& graph);

// Best F1 over thresholds of the form `score >= t`, t ranging over the
// distinct observed scores.
double f1_best_threshold(const ScoreVector& scores, const LabeledGraph& graph);

double l1_error(double true_value, double noisy_value);

double top1_error(const std::map<std::string, double>& true_aucs,
                  const std::string& released_best);

// Inversion count between the true ranking (descending AUC) and the noisy
// ranking, each inversion weighted by the true-AUC gap.
double weighted_kendall_tau(const std::map<std::string, double>& true_aucs,
                            const Leaderboard& noisy_ranking);

// Expected weighted Kendall-Tau distance between the true leaderboard and a
// uniformly random permutation.
double random_permutation_baseline(const std::map<std::string, double>& true_aucs);

}  // namespace fraudbench

#endif
