#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "fraudbench/detectors.hpp"
#include "fraudbench/graph.hpp"
#include "fraudbench/rng.hpp"

using namespace fraudbench;

namespace {

LabeledGraph tiny(std::vector<char> fraud, std::vector<LabeledGraph::Edge> edges,
                  std::optional<LabeledGraph::Metadata> meta = std::nullopt) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < fraud.size(); ++i) ids.push_back("v" + std::to_string(i));
  return LabeledGraph::create(std::move(ids), std::move(fraud), std::move(edges),
                              std::move(meta));
}

LabeledGraph random_graph(int n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<char> fraud;
  for (int i = 0; i < n; ++i) fraud.push_back(rng.bernoulli(0.3) ? 1 : 0);
  std::vector<LabeledGraph::Edge> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.bernoulli(p)) edges.push_back({a, b});
  return tiny(std::move(fraud), std::move(edges));
}

DetectorSpec make(DetectorSpec::Kind kind) {
  DetectorSpec s;
  s.name = "test";
  s.kind = kind;
  return s;
}

}  // namespace

TEST_CASE("neg_degree: star center strictly lowest") {
  LabeledGraph g = tiny({0, 0, 0, 0, 0}, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  ScoreVector s = score(make(DetectorSpec::Kind::NegDegree), g);
  for (int v = 1; v < g.n(); ++v) CHECK(s[0] < s[v]);
}

TEST_CASE("neg_degree: degree(u) > degree(v) iff score(u) < score(v)") {
  LabeledGraph g = random_graph(25, 0.25, 17);
  ScoreVector s = score(make(DetectorSpec::Kind::NegDegree), g);
  for (int u = 0; u < g.n(); ++u)
    for (int v = 0; v < g.n(); ++v)
      CHECK((g.degree(u) > g.degree(v)) == (s[u] < s[v]));
}

TEST_CASE("neg_clustering: triangle scores all -1") {
  LabeledGraph g = tiny({0, 0, 0}, {{0, 1}, {0, 2}, {1, 2}});
  ScoreVector s = score(make(DetectorSpec::Kind::NegClustering), g);
  for (double x : s) CHECK(x == doctest::Approx(-1.0));
}

TEST_CASE("neg_clustering: degree < 2 scores 0") {
  LabeledGraph g = tiny({0, 0, 0}, {{0, 1}});
  ScoreVector s = score(make(DetectorSpec::Kind::NegClustering), g);
  CHECK(s[0] == 0.0);
  CHECK(s[2] == 0.0);
}

TEST_CASE("svd_error_sum: full rank reconstructs exactly") {
  LabeledGraph g = random_graph(8, 0.5, 4);
  DetectorSpec spec = make(DetectorSpec::Kind::SvdErrorSum);
  spec.rank = g.n();
  for (double x : score(spec, g)) CHECK(x == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("svd detectors: rank validation") {
  LabeledGraph g = random_graph(6, 0.5, 4);
  DetectorSpec spec = make(DetectorSpec::Kind::SvdErrorMax);
  spec.rank = 7;
  CHECK_THROWS_AS(score(spec, g), std::invalid_argument);
  spec.rank = 0;
  CHECK_THROWS_AS(score(spec, g), std::invalid_argument);
}

TEST_CASE("svd_error_max bounded by svd_error_sum per vertex") {
  LabeledGraph g = random_graph(20, 0.3, 9);
  DetectorSpec sum_spec = make(DetectorSpec::Kind::SvdErrorSum);
  DetectorSpec max_spec = make(DetectorSpec::Kind::SvdErrorMax);
  sum_spec.rank = max_spec.rank = 3;
  ScoreVector ssum = score(sum_spec, g);
  ScoreVector smax = score(max_spec, g);
  for (int v = 0; v < g.n(); ++v) CHECK(smax[v] <= ssum[v] + 1e-12);
}

TEST_CASE("community_size: two components score by component size") {
  // clique of 3 and clique of 5, disconnected
  std::vector<LabeledGraph::Edge> edges = {{0, 1}, {0, 2}, {1, 2}};
  for (int a = 3; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) edges.push_back({a, b});
  LabeledGraph g = tiny(std::vector<char>(8, 0), std::move(edges));
  ScoreVector s = score(make(DetectorSpec::Kind::CommunitySize), g);
  // smaller community means higher (less negative) score
  for (int small = 0; small < 3; ++small)
    for (int big = 3; big < 8; ++big) CHECK(s[small] > s[big]);
}

TEST_CASE("random: reproducible from spec seed, uniform range") {
  LabeledGraph g = random_graph(50, 0.1, 2);
  DetectorSpec spec = make(DetectorSpec::Kind::Random);
  spec.seed = 1234;
  ScoreVector a = score(spec, g);
  ScoreVector b = score(spec, g);
  CHECK(a == b);
  spec.seed = 1235;
  CHECK(a != score(spec, g));
  for (double x : a) {
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("metadata_linear: dot product, invariant to edge changes") {
  LabeledGraph::Metadata meta = {{1.0, 2.0}, {0.5, -1.0}, {0.0, 3.0}};
  LabeledGraph g1 = tiny({0, 0, 1}, {{0, 1}}, meta);
  LabeledGraph g2 = tiny({0, 0, 1}, {{0, 2}, {1, 2}}, meta);
  DetectorSpec spec = make(DetectorSpec::Kind::MetadataLinear);
  spec.weights = {2.0, 1.0};
  ScoreVector s1 = score(spec, g1);
  ScoreVector s2 = score(spec, g2);
  CHECK(s1 == s2);
  CHECK(s1[0] == doctest::Approx(4.0));
  CHECK(s1[1] == doctest::Approx(0.0));
  CHECK(s1[2] == doctest::Approx(3.0));
}

TEST_CASE("metadata_linear: missing metadata rejected") {
  LabeledGraph g = tiny({0, 1}, {{0, 1}});
  DetectorSpec spec = make(DetectorSpec::Kind::MetadataLinear);
  spec.weights = {1.0};
  CHECK_THROWS_AS(score(spec, g), std::invalid_argument);
}

TEST_CASE("aggregate: single child with weight 1 preserves ranking") {
  LabeledGraph g = random_graph(20, 0.3, 13);
  DetectorSpec child = make(DetectorSpec::Kind::NegDegree);
  DetectorSpec agg = make(DetectorSpec::Kind::AggregateAverage);
  agg.children = {child};
  agg.weights = {1.0};
  ScoreVector cs = score(child, g);
  ScoreVector as = score(agg, g);
  for (int u = 0; u < g.n(); ++u)
    for (int v = 0; v < g.n(); ++v) CHECK((cs[u] < cs[v]) == (as[u] < as[v]));
}

TEST_CASE("aggregate: constant child normalizes to 0.5") {
  LabeledGraph g = tiny({0, 0, 0}, {{0, 1}, {0, 2}, {1, 2}});  // triangle, all degree 2
  DetectorSpec agg = make(DetectorSpec::Kind::AggregateAverage);
  agg.children = {make(DetectorSpec::Kind::NegDegree)};
  agg.weights = {1.0};
  for (double x : score(agg, g)) CHECK(x == doctest::Approx(0.5));
}

TEST_CASE("aggregate: max of children in [0,1] and above each normalized child mean") {
  LabeledGraph g = random_graph(20, 0.3, 29);
  DetectorSpec agg = make(DetectorSpec::Kind::AggregateMax);
  agg.children = {make(DetectorSpec::Kind::NegDegree),
                  make(DetectorSpec::Kind::NegClustering)};
  for (double x : score(agg, g)) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("aggregate: no children rejected") {
  LabeledGraph g = tiny({0, 1}, {{0, 1}});
  CHECK_THROWS_AS(score(make(DetectorSpec::Kind::AggregateAverage), g),
                  std::invalid_argument);
}

TEST_CASE("builtin_suite: exactly 10 uniquely named detectors, fixed svd ranks") {
  std::vector<DetectorSpec> suite = builtin_suite();
  CHECK(suite.size() == 10);
  std::set<std::string> names;
  for (const auto& s : suite) names.insert(s.name);
  CHECK(names.size() == 10);
  CHECK(builtin_detector("svd_error_sum").rank == 10);
  CHECK(builtin_detector("svd_error_max").rank == 50);
  CHECK_THROWS_AS(builtin_detector("nope"), std::invalid_argument);
}

TEST_CASE("builtin_suite: every detector scores a mid-size graph deterministically") {
  LabeledGraph g = random_graph(60, 0.15, 31);
  for (const auto& spec : builtin_suite()) {
    ScoreVector a = score(spec, g);
    ScoreVector b = score(spec, g);
    REQUIRE(a.size() == static_cast<std::size_t>(g.n()));
    CHECK(a == b);
    for (double x : a) CHECK(std::isfinite(x));
  }
}

TEST_CASE("compile wraps score") {
  LabeledGraph g = random_graph(10, 0.4, 3);
  DetectorSpec spec = make(DetectorSpec::Kind::NegDegree);
  CHECK(compile(spec)(g) == score(spec, g));
}
