#ifndef FRAUDBENCH_DP_HPP
#define FRAUDBENCH_DP_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fraudbench/graph.hpp"
#include "fraudbench/rng.hpp"

namespace fraudbench {

struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 1e-8;

  void validate() const;
};

// Append-only record of privacy charges against a fixed allotment. A value
// type; callers serialize updates (single-writer contract).
class BudgetLedger {
 public:
  struct Entry {
    std::string label;
    double epsilon = 0.0;
    double delta = 0.0;
  };

  explicit BudgetLedger(double epsilon_allotment);

  // Throws on nonpositive charge or overdraft; the operation must be refused.
  void charge(const std::string& label, double epsilon, double delta = 0.0);

  double allotment() const { return allotment_; }
  double spent_epsilon() const;
  double spent_delta() const;
  double remaining() const { return allotment_ - spent_epsilon(); }
  const std::vector<Entry>& entries() const { return entries_; }

  std::string to_json() const;

 private:
  double allotment_;
  std::vector<Entry> entries_;
};

// One draw from Laplace(0, scale) via inverse CDF.
double sample_laplace(double scale, Rng& rng);

// value + Laplace(sensitivity / epsilon); sensitivity 0 returns the value.
double laplace_mechanism(double value, double sensitivity, double epsilon, Rng& rng);

// Smooth sensitivity of degree truncation at threshold d:
//   max over t >= 0 of e^{-beta t} * (1 + t + N_t)
// where N_t counts benign vertices with degree in [d - t, d + t + 1].
double smooth_sensitivity_truncation(const LabeledGraph& graph, std::int64_t d,
                                     double beta);

// beta = epsilon / (2 ln(1/(2 delta))); requires 0 < delta < 1/2.
double beta_from_privacy(double epsilon, double delta);

enum class Statistic {
  EdgeCount,
  EdgeCountBB,
  EdgeCountBF,
  DegreeSequenceBenign,  // L1
  TriangleCount,
  AdjacencyUpperTriangle,  // L1
};

const char* statistic_name(Statistic s);

// Worst-case L1 change of the statistic across graphs of max degree <= d
// differing in one benign vertex's edges.
double restricted_sensitivity(Statistic statistic, std::int64_t d);

// Adds independent Laplace(scale) to every value and returns only the name of
// the maximum (ties by name). The noisy values are not exposed.
std::string report_noisy_argmax(const std::map<std::string, double>& values,
                                double per_query_noise_scale, Rng& rng);

}  // namespace fraudbench

#endif
