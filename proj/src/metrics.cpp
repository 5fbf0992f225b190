#include "fraudbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fraudbench {

Leaderboard Leaderboard::from_values(const std::map<std::string, double>& values,
                                     bool noisy) {
  Leaderboard lb;
  lb.noisy = noisy;
  lb.entries.assign(values.begin(), values.end());
  std::sort(lb.entries.begin(), lb.entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return lb;
}

namespace {

void split_scores(const ScoreVector& scores, const LabeledGraph& g,
                  std::vector<double>& fraud, std::vector<double>& benign) {
  if (static_cast<int>(scores.size()) != g.n())
    throw std::invalid_argument("auc: score vector does not match graph");
  for (int v = 0; v < g.n(); ++v) {
    if (!std::isfinite(scores[v])) throw std::invalid_argument("auc: non-finite score");
    (g.is_fraud(v) ? fraud : benign).push_back(scores[v]);
  }
  if (fraud.empty() || benign.empty())
    throw std::invalid_argument("auc: need at least one fraud and one benign vertex");
}

double auc_impl(const ScoreVector& scores, const LabeledGraph& g, double tie_credit) {
  std::vector<double> fraud, benign;
  split_scores(scores, g, fraud, benign);
  std::sort(benign.begin(), benign.end());
  double total = 0.0;
  for (double f : fraud) {
    auto lo = std::lower_bound(benign.begin(), benign.end(), f);
    auto hi = std::upper_bound(lo, benign.end(), f);
    total += static_cast<double>(lo - benign.begin());
    total += tie_credit * static_cast<double>(hi - lo);
  }
  return total / (static_cast<double>(fraud.size()) * static_cast<double>(benign.size()));
}

}  // namespace

double auc(const ScoreVector& scores, const LabeledGraph& graph) {
  return auc_impl(scores, graph, 0.0);
}

double auc_half_ties(const ScoreVector& scores, const LabeledGraph& graph) {
  return auc_impl(scores, graph, 0.5);
}

double f1_best_threshold(const ScoreVector& scores, const LabeledGraph& graph) {
  if (static_cast<int>(scores.size()) != graph.n())
    throw std::invalid_argument("f1: score vector does not match graph");
  std::int64_t n_fraud = graph.n_fraud();
  if (n_fraud == 0) throw std::invalid_argument("f1: no fraud vertices");

  // sort by score descending; sweeping the threshold down adds vertices to
  // the predicted-fraud set one distinct score at a time
  std::vector<std::pair<double, bool>> items;
  items.reserve(scores.size());
  for (int v = 0; v < graph.n(); ++v) items.emplace_back(scores[v], graph.is_fraud(v));
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  double best = 0.0;
  std::int64_t tp = 0, predicted = 0;
  std::size_t i = 0;
  while (i < items.size()) {
    double t = items[i].first;
    while (i < items.size() && items[i].first == t) {
      tp += items[i].second ? 1 : 0;
      ++predicted;
      ++i;
    }
    if (tp > 0) {
      double precision = static_cast<double>(tp) / static_cast<double>(predicted);
      double recall = static_cast<double>(tp) / static_cast<double>(n_fraud);
      best = std::max(best, 2.0 * precision * recall / (precision + recall));
    }
  }
  return best;
}

double l1_error(double true_value, double noisy_value) {
  return std::abs(true_value - noisy_value);
}

double top1_error(const std::map<std::string, double>& true_aucs,
                  const std::string& released_best) {
  auto it = true_aucs.find(released_best);
  if (it == true_aucs.end())
    throw std::invalid_argument("top1_error: unknown detector " + released_best);
  double best = it->second;
  for (const auto& [name, v] : true_aucs) best = std::max(best, v);
  return best - it->second;
}

double weighted_kendall_tau(const std::map<std::string, double>& true_aucs,
                            const Leaderboard& noisy_ranking) {
  if (true_aucs.size() != noisy_ranking.entries.size())
    throw std::invalid_argument("weighted_kendall_tau: detector sets differ in size");
  std::map<std::string, int> noisy_rank;
  for (std::size_t i = 0; i < noisy_ranking.entries.size(); ++i) {
    const auto& name = noisy_ranking.entries[i].first;
    if (!true_aucs.count(name))
      throw std::invalid_argument("weighted_kendall_tau: mismatched detector " + name);
    noisy_rank[name] = static_cast<int>(i);
  }

  Leaderboard truth = Leaderboard::from_values(true_aucs, false);
  double dist = 0.0;
  for (std::size_t i = 0; i < truth.entries.size(); ++i)
    for (std::size_t j = i + 1; j < truth.entries.size(); ++j) {
      const auto& hi = truth.entries[i];
      const auto& lo = truth.entries[j];
      if (noisy_rank[hi.first] > noisy_rank[lo.first]) dist += hi.second - lo.second;
    }
  return dist;
}

double random_permutation_baseline(const std::map<std::string, double>& true_aucs) {
  if (true_aucs.size() < 2)
    throw std::invalid_argument("random_permutation_baseline: need >= 2 detectors");
  std::vector<double> vals;
  for (const auto& [name, v] : true_aucs) vals.push_back(v);
  std::sort(vals.begin(), vals.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t j = i + 1; j < vals.size(); ++j) sum += vals[i] - vals[j];
  return 0.5 * sum;
}

}  // namespace fraudbench
