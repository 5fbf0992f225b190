#include "fraudbench/detectors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "fraudbench/rng.hpp"

namespace fraudbench {

namespace {

ScoreVector neg_degree(const LabeledGraph& g) {
  ScoreVector s(g.n());
  for (int v = 0; v < g.n(); ++v) s[v] = -static_cast<double>(g.degree(v));
  return s;
}

ScoreVector neg_clustering(const LabeledGraph& g) {
  ScoreVector s(g.n(), 0.0);
  for (int v = 0; v < g.n(); ++v) {
    const auto& nb = g.neighbors(v);
    const int d = static_cast<int>(nb.size());
    if (d < 2) continue;
    std::int64_t links = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (g.has_edge(nb[i], nb[j])) ++links;
    s[v] = -(2.0 * static_cast<double>(links)) / (static_cast<double>(d) * (d - 1));
  }
  return s;
}

// Reconstruction error of the best rank-r approximation, restricted to edge
// positions, aggregated per vertex row by sum or max.
ScoreVector svd_error(const LabeledGraph& g, int rank, bool use_max) {
  const int n = g.n();
  if (n == 0) throw std::invalid_argument("svd detector: empty graph");
  if (rank < 1 || rank > n)
    throw std::invalid_argument("svd detector: rank must be in [1, n]");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [u, v] : g.edges()) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const int r = std::min<int>(rank, static_cast<int>(sv.size()));
  Eigen::MatrixXd approx = svd.matrixU().leftCols(r) * sv.head(r).asDiagonal() *
                           svd.matrixV().leftCols(r).transpose();

  ScoreVector s(n, 0.0);
  for (int v = 0; v < n; ++v) {
    double acc = 0.0;
    for (int u : g.neighbors(v)) {
      double err = std::abs(a(v, u) - approx(v, u));
      acc = use_max ? std::max(acc, err) : acc + err;
    }
    s[v] = acc;
  }
  return s;
}

// Synchronous label propagation, max-label tie-break, capped at 100 rounds.
// Stands in for Leiden; only community sizes are consumed downstream.
ScoreVector community_size(const LabeledGraph& g) {
  const int n = g.n();
  std::vector<int> label(n);
  for (int v = 0; v < n; ++v) label[v] = v;

  std::vector<int> next(n);
  std::unordered_map<int, int> counts;
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int v = 0; v < n; ++v) {
      const auto& nb = g.neighbors(v);
      if (nb.empty()) {
        next[v] = label[v];
        continue;
      }
      counts.clear();
      for (int u : nb) ++counts[label[u]];
      int best = -1, best_count = 0;
      for (const auto& [lab, c] : counts)
        if (c > best_count || (c == best_count && lab > best)) {
          best = lab;
          best_count = c;
        }
      next[v] = best;
      changed |= (best != label[v]);
    }
    label.swap(next);
    if (!changed) break;
  }

  std::unordered_map<int, int> sizes;
  for (int v = 0; v < n; ++v) ++sizes[label[v]];
  ScoreVector s(n);
  for (int v = 0; v < n; ++v) s[v] = -static_cast<double>(sizes[label[v]]);
  return s;
}

// min-max to [0,1]; constant vectors map to all-0.5
ScoreVector normalize(const ScoreVector& s) {
  auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  ScoreVector out(s.size());
  if (*hi - *lo <= 0.0) {
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = (s[i] - *lo) / (*hi - *lo);
  return out;
}

ScoreVector random_scores(const LabeledGraph& g, std::uint64_t seed) {
  Rng rng(seed);
  ScoreVector s(g.n());
  for (auto& x : s) x = rng.uniform();
  return s;
}

ScoreVector metadata_linear(const LabeledGraph& g, const std::vector<double>& w) {
  if (!g.has_metadata())
    throw std::invalid_argument("metadata_linear: graph has no metadata");
  if (static_cast<int>(w.size()) != g.metadata_dim())
    throw std::invalid_argument("metadata_linear: weight dimension mismatch");
  ScoreVector s(g.n(), 0.0);
  for (int v = 0; v < g.n(); ++v) {
    const auto& m = g.metadata(v);
    for (std::size_t i = 0; i < w.size(); ++i) s[v] += w[i] * m[i];
  }
  return s;
}

}  // namespace

ScoreVector score(const DetectorSpec& spec, const LabeledGraph& graph) {
  if (graph.n() == 0) throw std::invalid_argument("score: empty graph");
  switch (spec.kind) {
    case DetectorSpec::Kind::NegDegree:
      return neg_degree(graph);
    case DetectorSpec::Kind::NegClustering:
      return neg_clustering(graph);
    case DetectorSpec::Kind::SvdErrorSum:
      return svd_error(graph, spec.rank, false);
    case DetectorSpec::Kind::SvdErrorMax:
      return svd_error(graph, spec.rank, true);
    case DetectorSpec::Kind::CommunitySize:
      return community_size(graph);
    case DetectorSpec::Kind::Random:
      return random_scores(graph, spec.seed);
    case DetectorSpec::Kind::MetadataLinear:
      return metadata_linear(graph, spec.weights);
    case DetectorSpec::Kind::AggregateAverage:
    case DetectorSpec::Kind::AggregateMax: {
      if (spec.children.empty())
        throw std::invalid_argument("aggregate detector: no children");
      const bool avg = spec.kind == DetectorSpec::Kind::AggregateAverage;
      if (avg && spec.weights.size() != spec.children.size())
        throw std::invalid_argument("aggregate detector: weight count mismatch");
      ScoreVector out(graph.n(), avg ? 0.0 : -1.0);
      double wsum = 0.0;
      for (std::size_t c = 0; c < spec.children.size(); ++c) {
        ScoreVector child = normalize(score(spec.children[c], graph));
        if (avg) {
          for (int v = 0; v < graph.n(); ++v) out[v] += spec.weights[c] * child[v];
          wsum += spec.weights[c];
        } else {
          for (int v = 0; v < graph.n(); ++v) out[v] = std::max(out[v], child[v]);
        }
      }
      if (avg) {
        if (wsum <= 0.0) throw std::invalid_argument("aggregate detector: zero weight sum");
        for (auto& x : out) x /= wsum;
      }
      return out;
    }
  }
  throw std::logic_error("score: unknown detector kind");
}

std::vector<DetectorSpec> builtin_suite() {
  DetectorSpec neg_deg{.name = "neg_degree", .kind = DetectorSpec::Kind::NegDegree};
  DetectorSpec neg_clust{.name = "neg_clustering", .kind = DetectorSpec::Kind::NegClustering};
  DetectorSpec svd_sum{.name = "svd_error_sum", .kind = DetectorSpec::Kind::SvdErrorSum,
                       .rank = 10};
  DetectorSpec svd_max{.name = "svd_error_max", .kind = DetectorSpec::Kind::SvdErrorMax,
                       .rank = 50};
  DetectorSpec comm{.name = "community_size", .kind = DetectorSpec::Kind::CommunitySize};

  DetectorSpec agg1{.name = "agg_avg_structure",
                    .kind = DetectorSpec::Kind::AggregateAverage,
                    .weights = {0.5, 0.5},
                    .children = {neg_deg, neg_clust}};
  DetectorSpec agg2{.name = "agg_avg_spectral",
                    .kind = DetectorSpec::Kind::AggregateAverage,
                    .weights = {1.0 / 3, 1.0 / 3, 1.0 / 3},
                    .children = {svd_sum, svd_max, comm}};
  DetectorSpec agg3{.name = "agg_max_degree_svd",
                    .kind = DetectorSpec::Kind::AggregateMax,
                    .children = {neg_deg, svd_sum}};
  DetectorSpec agg4{.name = "agg_max_clustering_community",
                    .kind = DetectorSpec::Kind::AggregateMax,
                    .children = {neg_clust, comm}};
  DetectorSpec rnd{.name = "random", .kind = DetectorSpec::Kind::Random, .seed = 0x5eedULL};

  return {neg_deg, neg_clust, svd_sum, svd_max, comm, agg1, agg2, agg3, agg4, rnd};
}

DetectorSpec builtin_detector(const std::string& name) {
  for (auto& d : builtin_suite())
    if (d.name == name) return d;
  throw std::invalid_argument("unknown detector: " + name);
}

}  // namespace fraudbench
