#include "fraudbench/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fraudbench {

void PrivacyParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must be in [0, 1)");
}

BudgetLedger::BudgetLedger(double epsilon_allotment) : allotment_(epsilon_allotment) {
  if (!(epsilon_allotment > 0.0))
    throw std::invalid_argument("ledger: allotment must be positive");
}

double BudgetLedger::spent_epsilon() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.epsilon;
  return s;
}

double BudgetLedger::spent_delta() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.delta;
  return s;
}

void BudgetLedger::charge(const std::string& label, double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("ledger: charge must be positive");
  if (delta < 0.0) throw std::invalid_argument("ledger: negative delta");
  // small slack for accumulated rounding when a budget is split into shares
  if (spent_epsilon() + epsilon > allotment_ * (1.0 + 1e-12))
    throw std::runtime_error("ledger: overdraft refused for " + label);
  entries_.push_back({label, epsilon, delta});
}

std::string BudgetLedger::to_json() const {
  nlohmann::json j;
  j["epsilon_allotment"] = allotment_;
  j["spent_epsilon"] = spent_epsilon();
  j["spent_delta"] = spent_delta();
  j["charges"] = nlohmann::json::array();
  for (const auto& e : entries_)
    j["charges"].push_back({{"label", e.label}, {"epsilon", e.epsilon}, {"delta", e.delta}});
  return j.dump(2);
}

double sample_laplace(double scale, Rng& rng) {
  if (!(scale > 0.0)) throw std::invalid_argument("sample_laplace: scale must be positive");
  // u in (-1/2, 1/2]; inverse CDF
  double u = rng.uniform() - 0.5;
  double sign = (u < 0.0) ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(u));
}

double laplace_mechanism(double value, double sensitivity, double epsilon, Rng& rng) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("laplace_mechanism: epsilon <= 0");
  if (sensitivity < 0.0)
    throw std::invalid_argument("laplace_mechanism: negative sensitivity");
  if (sensitivity == 0.0) return value;
  return value + sample_laplace(sensitivity / epsilon, rng);
}

double smooth_sensitivity_truncation(const LabeledGraph& graph, std::int64_t d,
                                     double beta) {
  if (!(beta > 0.0))
    throw std::invalid_argument("smooth_sensitivity_truncation: beta must be positive");
  if (d < 0) throw std::invalid_argument("smooth_sensitivity_truncation: D must be >= 0");

  std::vector<std::int64_t> degrees;
  for (int v = 0; v < graph.n(); ++v)
    if (!graph.is_fraud(v)) degrees.push_back(graph.degree(v));
  std::sort(degrees.begin(), degrees.end());
  const auto nb = static_cast<std::int64_t>(degrees.size());

  auto count_in = [&](std::int64_t lo, std::int64_t hi) -> std::int64_t {
    auto l = std::lower_bound(degrees.begin(), degrees.end(), lo);
    auto h = std::upper_bound(degrees.begin(), degrees.end(), hi);
    return h - l;
  };

  // Past t_sat every benign degree is inside [d - t, d + t + 1], so the term
  // becomes e^{-beta t} (1 + t + n_B), unimodal with integer peak near
  // 1/beta - 1 - n_B. Scanning to the larger of the two covers the global max.
  std::int64_t t_sat = 0;
  if (nb > 0)
    t_sat = std::max<std::int64_t>(
        std::max<std::int64_t>(d - degrees.front(), degrees.back() - d - 1), 0);
  std::int64_t t_peak = static_cast<std::int64_t>(std::ceil(1.0 / beta)) + 1;
  const std::int64_t t_max = std::max(t_sat, t_peak);

  double best = 0.0;
  for (std::int64_t t = 0; t <= t_max; ++t) {
    double decay = std::exp(-beta * static_cast<double>(t));
    std::int64_t n_t = count_in(d - t, d + t + 1);
    best = std::max(best, decay * static_cast<double>(1 + t + n_t));
  }
  return best;
}

double beta_from_privacy(double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("beta_from_privacy: epsilon <= 0");
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("beta_from_privacy: delta must be in (0, 1/2)");
  return epsilon / (2.0 * std::log(1.0 / (2.0 * delta)));
}

const char* statistic_name(Statistic s) {
  switch (s) {
    case Statistic::EdgeCount: return "edge_count";
    case Statistic::EdgeCountBB: return "edge_count_bb";
    case Statistic::EdgeCountBF: return "edge_count_bf";
    case Statistic::DegreeSequenceBenign: return "degree_sequence_benign";
    case Statistic::TriangleCount: return "triangle_count";
    case Statistic::AdjacencyUpperTriangle: return "adjacency";
  }
  return "?";
}

double restricted_sensitivity(Statistic statistic, std::int64_t d) {
  if (d < 0) throw std::invalid_argument("restricted_sensitivity: D must be >= 0");
  const double dd = static_cast<double>(d);
  switch (statistic) {
    case Statistic::EdgeCount:
    case Statistic::EdgeCountBB:
    case Statistic::EdgeCountBF:
      return dd;
    case Statistic::DegreeSequenceBenign:
      return 3.0 * dd;
    case Statistic::TriangleCount:
      return dd * (dd - 1.0) < 0.0 ? 0.0 : dd * (dd - 1.0);
    case Statistic::AdjacencyUpperTriangle:
      return 2.0 * dd;
  }
  throw std::invalid_argument("restricted_sensitivity: unknown statistic");
}

std::string report_noisy_argmax(const std::map<std::string, double>& values,
                                double per_query_noise_scale, Rng& rng) {
  if (values.empty()) throw std::invalid_argument("report_noisy_argmax: empty map");
  if (per_query_noise_scale < 0.0)
    throw std::invalid_argument("report_noisy_argmax: negative scale");
  std::string best_name;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [name, value] : values) {
    double noisy = value;
    if (per_query_noise_scale > 0.0) noisy += sample_laplace(per_query_noise_scale, rng);
    if (noisy > best) {  // map iteration is name-ordered, so ties keep the first name
      best = noisy;
      best_name = name;
    }
  }
  return best_name;
}

}  // namespace fraudbench
