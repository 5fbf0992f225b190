#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "fraudbench/graph.hpp"
#include "fraudbench/rng.hpp"

using namespace fraudbench;

namespace {

std::string write_tmp(const std::string& name, const std::string& content) {
  std::string path = "tmp_" + name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

LabeledGraph tiny(std::vector<char> fraud, std::vector<LabeledGraph::Edge> edges) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < fraud.size(); ++i) ids.push_back("v" + std::to_string(i));
  return LabeledGraph::create(std::move(ids), std::move(fraud), std::move(edges));
}

std::int64_t brute_triangles(const LabeledGraph& g) {
  std::int64_t count = 0;
  for (int a = 0; a < g.n(); ++a)
    for (int b = a + 1; b < g.n(); ++b)
      for (int c = b + 1; c < g.n(); ++c)
        if (g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c)) ++count;
  return count;
}

LabeledGraph random_graph(int n, double p, std::uint64_t seed, double fraud_frac = 0.3) {
  Rng rng(seed);
  std::vector<char> fraud;
  for (int i = 0; i < n; ++i) fraud.push_back(rng.bernoulli(fraud_frac) ? 1 : 0);
  std::vector<LabeledGraph::Edge> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.bernoulli(p)) edges.push_back({a, b});
  return tiny(std::move(fraud), std::move(edges));
}

}  // namespace

TEST_CASE("load_graph: minimal graph") {
  auto edges = write_tmp("min.edges", "a b\n");
  auto labels = write_tmp("min.labels", "vertex,label\na,0\nb,1\n");
  LabeledGraph g = load_graph(edges, labels);
  CHECK(g.n() == 2);
  CHECK(g.n_benign() == 1);
  CHECK(g.n_fraud() == 1);
  CHECK(g.edge_count() == 1);
  std::remove(edges.c_str());
  std::remove(labels.c_str());
}

TEST_CASE("load_graph: self-loop rejected with line number") {
  auto edges = write_tmp("loop.edges", "# comment\na a\n");
  auto labels = write_tmp("loop.labels", "vertex,label\na,0\n");
  CHECK_THROWS_WITH_AS(load_graph(edges, labels),
                       doctest::Contains(":2: self-loop"), std::runtime_error);
  std::remove(edges.c_str());
  std::remove(labels.c_str());
}

TEST_CASE("load_graph: duplicate and reversed edges deduplicated") {
  auto edges = write_tmp("dup.edges", "a b\nb a\na b\n");
  auto labels = write_tmp("dup.labels", "vertex,label\na,0\nb,0\n");
  LabeledGraph g = load_graph(edges, labels);
  CHECK(g.edge_count() == 1);
  std::remove(edges.c_str());
  std::remove(labels.c_str());
}

TEST_CASE("load_graph: missing label is an error, isolated labeled vertex kept") {
  auto edges = write_tmp("ml.edges", "a b\n");
  auto bad = write_tmp("ml.labels", "vertex,label\na,0\n");
  CHECK_THROWS_AS(load_graph(edges, bad), std::runtime_error);
  auto good = write_tmp("ml2.labels", "vertex,label\na,0\nb,1\nc,0\n");
  LabeledGraph g = load_graph(edges, good);
  CHECK(g.n() == 3);  // c is isolated but declared
  CHECK(g.edge_count() == 1);
  std::remove(edges.c_str());
  std::remove(bad.c_str());
  std::remove(good.c_str());
}

TEST_CASE("load_graph: metadata parsed with fixed dimension") {
  auto edges = write_tmp("md.edges", "a b\n");
  auto labels = write_tmp("md.labels", "vertex,label\na,0\nb,1\n");
  auto meta = write_tmp("md.meta", "vertex,f1,f2\na,1.5,-2\nb,0,3.25\n");
  LabeledGraph g = load_graph(edges, labels, meta);
  REQUIRE(g.has_metadata());
  CHECK(g.metadata_dim() == 2);
  int a = g.id(0) == "a" ? 0 : 1;
  CHECK(g.metadata(a)[0] == doctest::Approx(1.5));
  std::remove(edges.c_str());
  std::remove(labels.c_str());
  std::remove(meta.c_str());
}

TEST_CASE("save_graph then load_graph round-trips") {
  LabeledGraph g = random_graph(12, 0.3, 99);
  save_graph(g, "tmp_rt.edges", "tmp_rt.labels");
  LabeledGraph h = load_graph("tmp_rt.edges", "tmp_rt.labels");
  REQUIRE(h.n() == g.n());
  CHECK(h.edge_count() == g.edge_count());
  CHECK(h.n_fraud() == g.n_fraud());
  std::remove("tmp_rt.edges");
  std::remove("tmp_rt.labels");
}

TEST_CASE("create: validation") {
  CHECK_THROWS_AS(tiny({0, 0}, {{0, 0}}), std::invalid_argument);  // self loop
  CHECK_THROWS_AS(tiny({0, 0}, {{0, 5}}), std::invalid_argument);  // out of range
  LabeledGraph g = tiny({0, 1}, {{0, 1}, {1, 0}, {0, 1}});
  CHECK(g.edge_count() == 1);
}

TEST_CASE("sample_sbm: degenerate probabilities") {
  SbmParams zero{2, 3, 0.0, 0.0, 0.0};
  CHECK(sample_sbm(zero, 1).edge_count() == 0);
  SbmParams one{2, 2, 1.0, 1.0, 1.0};
  LabeledGraph g = sample_sbm(one, 1);
  CHECK(g.n() == 4);
  CHECK(g.edge_count() == 6);
}

TEST_CASE("sample_sbm: deterministic in seed") {
  SbmParams p{20, 100, 0.3, 0.05, 0.01};
  LabeledGraph a = sample_sbm(p, 7);
  LabeledGraph b = sample_sbm(p, 7);
  LabeledGraph c = sample_sbm(p, 8);
  CHECK(a.edges() == b.edges());
  CHECK(a.edges() != c.edges());
}

TEST_CASE("sample_sbm: mean benign degree matches (n_B - 1) p_B") {
  SbmParams p{100, 1000, 10.0 / 99.0, 5.0 / 999.0, 0.0};
  double total = 0.0;
  int trials = 100;
  for (int t = 0; t < trials; ++t) {
    LabeledGraph g = sample_sbm(p, 1000 + static_cast<std::uint64_t>(t));
    double sum = 0.0;
    for (int v : g.benign_vertices()) sum += g.degree(v);
    total += sum / static_cast<double>(g.n_benign());
  }
  CHECK(total / trials == doctest::Approx(5.0).epsilon(0.04));  // +-0.2
}

TEST_CASE("sample_sbm: cross edges only via p_cross") {
  SbmParams p{5, 5, 0.0, 0.0, 1.0};
  LabeledGraph g = sample_sbm(p, 3);
  CHECK(g.edge_count() == 25);
  for (const auto& [u, v] : g.edges()) CHECK(g.is_fraud(u) != g.is_fraud(v));
}

TEST_CASE("inject_fraud_clique: size 0 is identity") {
  LabeledGraph g = random_graph(10, 0.2, 5);
  LabeledGraph h = inject_fraud_clique(g, 0, 0.5, 1);
  CHECK(h.edges() == g.edges());
  CHECK(h.n_fraud() == g.n_fraud());
}

TEST_CASE("inject_fraud_clique: density 1 on edgeless benign graph forms a triangle") {
  LabeledGraph g = tiny({0, 0, 0, 0, 0}, {});
  LabeledGraph h = inject_fraud_clique(g, 3, 1.0, 2);
  CHECK(h.n_fraud() == 3);
  CHECK(h.edge_count() == 3);
  for (const auto& [u, v] : h.edges()) {
    CHECK(h.is_fraud(u));
    CHECK(h.is_fraud(v));
  }
}

TEST_CASE("inject_fraud_clique: relabels exactly size vertices, never removes edges") {
  LabeledGraph g = random_graph(40, 0.1, 11, 0.0);
  LabeledGraph h = inject_fraud_clique(g, 22, 0.8, 3);
  CHECK(h.n_fraud() == g.n_fraud() + 22);
  std::set<LabeledGraph::Edge> before(g.edges().begin(), g.edges().end());
  std::set<LabeledGraph::Edge> after(h.edges().begin(), h.edges().end());
  for (const auto& e : before) CHECK(after.count(e) == 1);
}

TEST_CASE("inject_fraud_clique: expected new pair count near density * C(size,2)") {
  LabeledGraph g = tiny(std::vector<char>(200, 0), {});
  double total = 0.0;
  int trials = 50;
  for (int t = 0; t < trials; ++t)
    total += static_cast<double>(
        inject_fraud_clique(g, 22, 0.8, static_cast<std::uint64_t>(t)).edge_count());
  double expected = 0.8 * 22 * 21 / 2.0;  // 184.8
  CHECK(total / trials == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("inject_fraud_clique: size above benign count rejected") {
  LabeledGraph g = tiny({0, 0, 1}, {});
  CHECK_THROWS_AS(inject_fraud_clique(g, 3, 1.0, 1), std::invalid_argument);
}

TEST_CASE("truncate_by_degree: star center removed, leaves isolated") {
  LabeledGraph g = tiny({0, 0, 0, 0, 0, 0},
                        {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  LabeledGraph h = truncate_by_degree(g, 4);
  CHECK(h.n() == 5);
  CHECK(h.edge_count() == 0);
}

TEST_CASE("truncate_by_degree: D = max degree keeps the graph") {
  LabeledGraph g = random_graph(30, 0.2, 21);
  std::int64_t dmax = compute_stats(g).max_degree;
  LabeledGraph h = truncate_by_degree(g, dmax);
  CHECK(h.n() == g.n());
  CHECK(h.edge_count() == g.edge_count());
}

TEST_CASE("truncate_by_degree: fraud vertices never removed") {
  // fraud hub of degree 10, threshold 2
  std::vector<char> fraud(11, 0);
  fraud[0] = 1;
  std::vector<LabeledGraph::Edge> edges;
  for (int i = 1; i <= 10; ++i) edges.push_back({0, i});
  LabeledGraph g = tiny(std::move(fraud), std::move(edges));
  LabeledGraph h = truncate_by_degree(g, 2);
  CHECK(h.n_fraud() == 1);
  CHECK(h.n() == 11);  // leaves have degree 1
}

TEST_CASE("truncate_by_degree: single pass, decisions on input degrees") {
  // path a-b-c-d where b and c have degree 2; with D=1 both go even though
  // removing one would drop the other's degree
  LabeledGraph g = tiny({0, 0, 0, 0}, {{0, 1}, {1, 2}, {2, 3}});
  LabeledGraph h = truncate_by_degree(g, 1);
  CHECK(h.n() == 2);
  CHECK(h.edge_count() == 0);
}

TEST_CASE("compute_stats: benign triangle") {
  LabeledGraph g = tiny({0, 0, 0}, {{0, 1}, {0, 2}, {1, 2}});
  GraphStats s = compute_stats(g);
  CHECK(s.triangle_count == 1);
  CHECK(s.edge_count_bb == 3);
  CHECK(s.edge_count_bf == 0);
  CHECK(s.edge_count_ff == 0);
  CHECK(s.degree_sequence_benign == std::vector<std::int64_t>{2, 2, 2});
  CHECK(s.max_degree == 2);
}

TEST_CASE("compute_stats: 4-cycle has no triangles") {
  LabeledGraph g = tiny({0, 0, 0, 0}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  CHECK(compute_stats(g).triangle_count == 0);
}

TEST_CASE("compute_stats: block edge counts split by labels") {
  LabeledGraph g = tiny({1, 1, 0, 0}, {{0, 1}, {0, 2}, {2, 3}});
  GraphStats s = compute_stats(g);
  CHECK(s.edge_count_ff == 1);
  CHECK(s.edge_count_bf == 1);
  CHECK(s.edge_count_bb == 1);
  CHECK(s.edge_count_total() == 3);
}

TEST_CASE("compute_stats: triangles match brute force on random small graphs") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    LabeledGraph g = random_graph(8, 0.5, seed);
    GraphStats s = compute_stats(g);
    CHECK(s.triangle_count == brute_triangles(g));
    CHECK(s.edge_count_total() == g.edge_count());
    CHECK(static_cast<int>(s.degree_sequence_benign.size()) == g.n_benign());
  }
}

TEST_CASE("induced_subgraph preserves labels and internal edges") {
  LabeledGraph g = tiny({1, 0, 0, 1}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  LabeledGraph h = g.induced_subgraph({0, 1, 2});
  CHECK(h.n() == 3);
  CHECK(h.n_fraud() == 1);
  CHECK(h.edge_count() == 2);
}
