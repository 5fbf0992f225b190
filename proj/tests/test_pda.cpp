#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "fraudbench/metrics.hpp"
#include "fraudbench/pda.hpp"
#include "fraudbench/rng.hpp"

using namespace fraudbench;

namespace {

AccuracyFn auc_fn() {
  return [](const ScoreVector& s, const LabeledGraph& g) { return auc(s, g); };
}

LabeledGraph meta_graph(int n_benign, int n_fraud, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> ids;
  std::vector<char> fraud;
  LabeledGraph::Metadata meta;
  for (int i = 0; i < n_benign + n_fraud; ++i) {
    ids.push_back("v" + std::to_string(i));
    fraud.push_back(i >= n_benign ? 1 : 0);
    meta.push_back({rng.uniform(), rng.uniform()});
  }
  std::vector<LabeledGraph::Edge> edges;
  for (int a = 0; a < n_benign + n_fraud; ++a)
    for (int b = a + 1; b < n_benign + n_fraud; ++b)
      if (rng.bernoulli(0.15)) edges.push_back({a, b});
  return LabeledGraph::create(std::move(ids), std::move(fraud), std::move(edges),
                              std::move(meta));
}

CompiledDetector metadata_detector() {
  DetectorSpec spec;
  spec.name = "meta";
  spec.kind = DetectorSpec::Kind::MetadataLinear;
  spec.weights = {1.0, -0.5};
  return compile(spec);
}

CompiledDetector degree_detector() {
  return [](const LabeledGraph& g) {
    ScoreVector s(g.n());
    for (int v = 0; v < g.n(); ++v) s[v] = static_cast<double>(g.degree(v));
    return s;
  };
}

}  // namespace

TEST_CASE("partition_duplicate: benign sets near-equal, disjoint, covering") {
  LabeledGraph g = meta_graph(23, 5, 1);
  PdaConfig cfg;
  cfg.k = 4;
  cfg.rho = 1.0;
  auto parts = partition_duplicate(g, cfg, 9);
  REQUIRE(parts.size() == 4);
  std::multiset<std::string> benign_ids;
  for (const auto& p : parts) {
    int nb = p.n_benign();
    CHECK((nb == 5 || nb == 6));  // floor/ceil of 23/4
    for (int v = 0; v < p.n(); ++v)
      if (!p.is_fraud(v)) benign_ids.insert(p.id(v));
  }
  CHECK(benign_ids.size() == 23);
  CHECK(std::set<std::string>(benign_ids.begin(), benign_ids.end()).size() == 23);
}

TEST_CASE("partition_duplicate: rho=1 duplicates every fraud vertex") {
  LabeledGraph g = meta_graph(12, 4, 2);
  PdaConfig cfg;
  cfg.k = 3;
  cfg.rho = 1.0;
  for (const auto& p : partition_duplicate(g, cfg, 5)) CHECK(p.n_fraud() == 4);
}

TEST_CASE("partition_duplicate: fraud subset size is max(1, round(rho n_F))") {
  LabeledGraph g = meta_graph(12, 10, 3);
  PdaConfig cfg;
  cfg.k = 2;
  cfg.rho = 0.25;
  for (const auto& p : partition_duplicate(g, cfg, 5)) CHECK(p.n_fraud() == 3);
  cfg.rho = 0.01;  // rounds to 0, clamped to 1
  for (const auto& p : partition_duplicate(g, cfg, 5)) CHECK(p.n_fraud() == 1);
}

TEST_CASE("partition_duplicate: benign-benign edges never shared across partitions") {
  LabeledGraph g = meta_graph(30, 6, 4);
  PdaConfig cfg;
  cfg.k = 5;
  cfg.rho = 0.5;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& p : partition_duplicate(g, cfg, 6)) {
    for (const auto& [u, v] : p.edges()) {
      if (p.is_fraud(u) || p.is_fraud(v)) continue;
      auto key = std::minmax(p.id(u), p.id(v));
      CHECK(seen.insert(key).second);  // each bb edge in at most one partition
    }
  }
}

TEST_CASE("partition_duplicate: deterministic in seed, validation errors") {
  LabeledGraph g = meta_graph(10, 3, 5);
  PdaConfig cfg;
  cfg.k = 3;
  cfg.rho = 1.0;
  auto a = partition_duplicate(g, cfg, 42);
  auto b = partition_duplicate(g, cfg, 42);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].edges() == b[i].edges());

  cfg.k = 11;  // k > n_B
  CHECK_THROWS_AS(partition_duplicate(g, cfg, 1), std::invalid_argument);
  cfg.k = 1;
  CHECK_THROWS_AS(partition_duplicate(g, cfg, 1), std::invalid_argument);
  cfg.k = 3;
  cfg.rho = 0.0;
  CHECK_THROWS_AS(partition_duplicate(g, cfg, 1), std::invalid_argument);
}

TEST_CASE("pda_release: metadata detector, rho=1, noise off recovers full-graph AUC exactly") {
  for (int k : {2, 3, 4, 6}) {
    LabeledGraph g = meta_graph(24, 6, 10 + static_cast<std::uint64_t>(k));
    PdaConfig cfg;
    cfg.k = k;
    cfg.rho = 1.0;
    cfg.epsilon = 1.0;
    cfg.noise_enabled = false;
    BudgetLedger ledger(1.0);
    CompiledDetector det = metadata_detector();
    PdaReleaseRecord rec = pda_release(det, g, cfg, auc_fn(), ledger, 77);
    // machine precision: partition-mean summation rounds in the last ulps
    CHECK(rec.released == doctest::Approx(auc(det(g), g)).epsilon(1e-13));
    CHECK(ledger.entries().empty());        // no noise, no charge
  }
}

TEST_CASE("pda_release: noise on charges epsilon once") {
  LabeledGraph g = meta_graph(20, 5, 8);
  PdaConfig cfg;
  cfg.k = 4;
  cfg.rho = 1.0;
  cfg.epsilon = 0.7;
  BudgetLedger ledger(0.7);
  pda_release(degree_detector(), g, cfg, auc_fn(), ledger, 3);
  REQUIRE(ledger.entries().size() == 1);
  CHECK(ledger.entries()[0].epsilon == doctest::Approx(0.7));
  CHECK_THROWS_AS(pda_release(degree_detector(), g, cfg, auc_fn(), ledger, 4),
                  std::runtime_error);  // budget exhausted
}

TEST_CASE("pda_release: huge epsilon returns the partition mean") {
  LabeledGraph g = meta_graph(20, 5, 9);
  PdaConfig cfg;
  cfg.k = 5;
  cfg.rho = 1.0;
  cfg.epsilon = 1e12;
  BudgetLedger ledger(1e12);
  PdaReleaseRecord rec = pda_release(degree_detector(), g, cfg, auc_fn(), ledger, 3);
  CHECK(rec.released == doctest::Approx(rec.partition_mean).epsilon(1e-9));
}

TEST_CASE("pda_release: noise std near sqrt(2)/(k eps) with a constant accuracy") {
  LabeledGraph g = meta_graph(40, 5, 12);
  PdaConfig cfg;
  cfg.k = 20;
  cfg.rho = 1.0;
  cfg.epsilon = 5.0;
  AccuracyFn constant = [](const ScoreVector&, const LabeledGraph&) { return 0.5; };
  const int reps = 1000;
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < reps; ++r) {
    BudgetLedger ledger(5.0);
    double x = pda_release(degree_detector(), g, cfg, constant, ledger,
                           static_cast<std::uint64_t>(r))
                   .released -
               0.5;
    sum += x;
    sumsq += x * x;
  }
  double var = sumsq / reps - (sum / reps) * (sum / reps);
  CHECK(std::sqrt(var) == doctest::Approx(std::sqrt(2.0) * 0.01).epsilon(0.1));
}

TEST_CASE("pda_release: deterministic given seed") {
  LabeledGraph g = meta_graph(20, 4, 13);
  PdaConfig cfg;
  cfg.k = 4;
  cfg.rho = 0.5;
  cfg.epsilon = 1.0;
  BudgetLedger l1(1.0), l2(1.0);
  double a = pda_release(degree_detector(), g, cfg, auc_fn(), l1, 99).released;
  double b = pda_release(degree_detector(), g, cfg, auc_fn(), l2, 99).released;
  CHECK(a == b);
}

TEST_CASE("expected_auc_sbm_degree: symmetric case is 0.5") {
  SbmParams p{100, 100, 0.05, 0.05, 0.0};
  CHECK(expected_auc_sbm_degree(p) == doctest::Approx(0.5));
}

TEST_CASE("expected_auc_sbm_degree: closed-form check") {
  // E = 99*0.1 - 999*0.005 = 4.905; SD = sqrt(99*.1*.9 + 999*.005*.995) = 3.7259
  SbmParams p{100, 1000, 0.1, 0.005, 0.0};
  double e = 99.0 * 0.1 - 999.0 * 0.005;
  double sd = std::sqrt(99.0 * 0.1 * 0.9 + 999.0 * 0.005 * 0.995);
  CHECK(e == doctest::Approx(4.905));
  CHECK(sd == doctest::Approx(3.7259).epsilon(1e-4));
  CHECK(expected_auc_sbm_degree(p) == doctest::Approx(0.906).epsilon(2e-3));
}

TEST_CASE("expected_auc_sbm_degree: zero variance rejected") {
  SbmParams p{2, 2, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(expected_auc_sbm_degree(p), std::invalid_argument);
}

TEST_CASE("bias_simulation: table shape, determinism, rho order preserved") {
  SbmParams p{20, 200, 0.5, 0.025, 0.0};
  std::vector<double> grid = {0.05, 0.5, 1.0};
  auto rows = bias_simulation(p, 10, grid, 5, 21);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].rho == grid[i]);
    CHECK(std::isfinite(rows[i].mean_bias));
    CHECK(rows[i].std_err >= 0.0);
  }
  auto again = bias_simulation(p, 10, grid, 5, 21);
  CHECK(rows[1].mean_bias == again[1].mean_bias);
}
