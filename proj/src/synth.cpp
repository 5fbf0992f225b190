#include "fraudbench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace fraudbench {

SynthMethod synth_method_from_string(const std::string& name) {
  if (name == "sbm") return SynthMethod::Sbm;
  if (name == "agm") return SynthMethod::Agm;
  if (name == "agm_triangles") return SynthMethod::AgmTriangles;
  if (name == "topm_filter") return SynthMethod::TopmFilter;
  throw std::invalid_argument("unknown synthesis method: " + name);
}

const char* synth_method_name(SynthMethod m) {
  switch (m) {
    case SynthMethod::Sbm: return "sbm";
    case SynthMethod::Agm: return "agm";
    case SynthMethod::AgmTriangles: return "agm_triangles";
    case SynthMethod::TopmFilter: return "topm_filter";
  }
  return "?";
}

double NoisyStats::value(Statistic s) const {
  for (const auto& e : entries)
    if (e.statistic == s) return e.noisy_value;
  throw std::invalid_argument(std::string("NoisyStats: statistic not present: ") +
                              statistic_name(s));
}

double NoisyStats::scale(Statistic s) const {
  for (const auto& e : entries)
    if (e.statistic == s) return e.noise_scale;
  throw std::invalid_argument(std::string("NoisyStats: statistic not present: ") +
                              statistic_name(s));
}

namespace {

std::vector<Statistic> statistics_for(SynthMethod method) {
  switch (method) {
    case SynthMethod::Sbm:
      return {Statistic::EdgeCountBB, Statistic::EdgeCountBF};
    case SynthMethod::Agm:
      return {Statistic::EdgeCountBB, Statistic::EdgeCountBF,
              Statistic::DegreeSequenceBenign};
    case SynthMethod::AgmTriangles:
      return {Statistic::EdgeCountBB, Statistic::EdgeCountBF,
              Statistic::DegreeSequenceBenign, Statistic::TriangleCount};
    case SynthMethod::TopmFilter:
      return {Statistic::EdgeCount, Statistic::AdjacencyUpperTriangle};
  }
  throw std::logic_error("statistics_for: unknown method");
}

double exact_value(Statistic s, const GraphStats& g) {
  switch (s) {
    case Statistic::EdgeCountBB: return static_cast<double>(g.edge_count_bb);
    case Statistic::EdgeCountBF: return static_cast<double>(g.edge_count_bf);
    case Statistic::TriangleCount: return static_cast<double>(g.triangle_count);
    // benign-involving edges only; the fraud block is released exactly
    case Statistic::EdgeCount:
      return static_cast<double>(g.edge_count_bb + g.edge_count_bf);
    default:
      throw std::logic_error("exact_value: not a scalar statistic");
  }
}

}  // namespace

NoisyStats estimate_stats_private(const LabeledGraph& graph, SynthMethod method,
                                  double epsilon, double delta, std::int64_t d,
                                  bool noise_enabled, std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("estimate_stats_private: epsilon <= 0");
  if (d < 0) throw std::invalid_argument("estimate_stats_private: D < 0");

  LabeledGraph truncated = truncate_by_degree(graph, d);
  GraphStats exact = compute_stats(truncated);

  NoisyStats out;
  out.method = method;
  out.d = d;
  out.noise_enabled = noise_enabled;
  out.n_benign = truncated.n_benign();
  out.n_fraud = truncated.n_fraud();
  out.exact_ff_edges = exact.edge_count_ff;
  out.beta = beta_from_privacy(epsilon, delta);
  out.smooth_sensitivity = smooth_sensitivity_truncation(truncated, d, out.beta);

  const auto stats = statistics_for(method);
  const double share = epsilon / static_cast<double>(stats.size());
  Rng rng(seed);

  for (Statistic s : stats) {
    const double scale =
        2.0 * out.smooth_sensitivity * restricted_sensitivity(s, d) / share;
    if (s == Statistic::DegreeSequenceBenign) {
      out.degree_epsilon_share = share;
      out.degree_noise_scale = noise_enabled ? scale : 0.0;
      out.noisy_degree_sequence.reserve(exact.degree_sequence_benign.size());
      for (std::int64_t deg : exact.degree_sequence_benign) {
        double v = static_cast<double>(deg);
        if (noise_enabled && scale > 0.0) v += sample_laplace(scale, rng);
        out.noisy_degree_sequence.push_back(
            std::clamp(v, 0.0, static_cast<double>(d)));
      }
    } else if (s == Statistic::AdjacencyUpperTriangle) {
      // per-entry noise is drawn by the consumer (topm_filter); only the
      // calibrated scale is fixed here
      out.adjacency_epsilon_share = share;
      out.adjacency_noise_scale = noise_enabled ? scale : 0.0;
    } else {
      NoisyStatEntry e;
      e.statistic = s;
      e.epsilon_share = share;
      e.noise_scale = noise_enabled ? scale : 0.0;
      double v = exact_value(s, exact);
      if (noise_enabled && scale > 0.0) v += sample_laplace(scale, rng);
      e.noisy_value = std::max(0.0, v);
      if (s == Statistic::EdgeCount) e.noisy_value += static_cast<double>(out.exact_ff_edges);
      out.entries.push_back(e);
    }
  }
  return out;
}

namespace {

struct SynthBase {
  std::vector<std::string> ids;
  std::vector<char> fraud;
};

SynthBase make_vertices(int n_benign, int n_fraud) {
  SynthBase b;
  for (int i = 0; i < n_benign; ++i) {
    b.ids.push_back("b" + std::to_string(i));
    b.fraud.push_back(0);
  }
  for (int i = 0; i < n_fraud; ++i) {
    b.ids.push_back("f" + std::to_string(i));
    b.fraud.push_back(1);
  }
  return b;
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

double pairs_of(std::int64_t n) { return 0.5 * static_cast<double>(n) * (n - 1); }

}  // namespace

LabeledGraph fit_and_sample_sbm(const NoisyStats& stats, std::uint64_t seed) {
  const int nb = stats.n_benign;
  const int nf = stats.n_fraud;
  if (nb == 0 || nf == 0)
    throw std::invalid_argument("fit_and_sample_sbm: zero-sized block");

  SbmParams p;
  p.n_benign = nb;
  p.n_fraud = nf;
  p.p_benign = nb >= 2 ? clamp01(stats.value(Statistic::EdgeCountBB) / pairs_of(nb)) : 0.0;
  p.p_cross = clamp01(stats.value(Statistic::EdgeCountBF) /
                      (static_cast<double>(nf) * static_cast<double>(nb)));
  p.p_fraud =
      nf >= 2 ? clamp01(static_cast<double>(stats.exact_ff_edges) / pairs_of(nf)) : 0.0;
  return sample_sbm(p, seed);
}

namespace {

// Mutable adjacency for the triangle-targeting rewiring pass.
struct RewireState {
  std::vector<std::unordered_set<int>> adj;
  std::vector<std::pair<int, int>> edges;  // candidates for rewiring

  std::int64_t common(int a, int b) const {
    const auto& sa = adj[a].size() <= adj[b].size() ? adj[a] : adj[b];
    const auto& sb = adj[a].size() <= adj[b].size() ? adj[b] : adj[a];
    std::int64_t c = 0;
    for (int x : sa) c += sb.count(x);
    return c;
  }
  bool has(int a, int b) const { return adj[a].count(b) > 0; }
  void add(int a, int b) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  void remove(int a, int b) {
    adj[a].erase(b);
    adj[b].erase(a);
  }
};

}  // namespace

LabeledGraph sample_agm(const NoisyStats& stats, bool with_triangles, std::uint64_t seed) {
  if (stats.noisy_degree_sequence.empty() && stats.n_benign > 0)
    throw std::invalid_argument("sample_agm: degree sequence not present in stats");
  const int nb = stats.n_benign;
  const int nf = stats.n_fraud;
  Rng rng(seed);

  const double m_bb = stats.value(Statistic::EdgeCountBB);
  const auto& deg = stats.noisy_degree_sequence;
  const double deg_sum = std::accumulate(deg.begin(), deg.end(), 0.0);

  std::vector<LabeledGraph::Edge> edges;
  if (m_bb > 0.0 && deg_sum <= 0.0) {
    // degenerate degree target: fall back to uniform edges matching m_bb
    std::vector<std::int64_t> pool(static_cast<std::size_t>(pairs_of(nb)));
    std::iota(pool.begin(), pool.end(), 0);
    auto want = std::min<std::int64_t>(std::llround(m_bb),
                                       static_cast<std::int64_t>(pool.size()));
    for (std::int64_t i = 0; i < want; ++i) {
      auto j = i + static_cast<std::int64_t>(rng.uniform_index(pool.size() - i));
      std::swap(pool[i], pool[j]);
      std::int64_t idx = pool[i];
      // unrank over pairs of [0, nb)
      std::int64_t row = nb - 1, a = 0;
      while (idx >= row) {
        idx -= row;
        --row;
        ++a;
      }
      edges.emplace_back(static_cast<int>(a), static_cast<int>(a + 1 + idx));
    }
  } else if (m_bb > 0.0) {
    // expected-degree (Chung-Lu) scheme on the benign block
    for (int i = 0; i < nb; ++i) {
      if (deg[i] <= 0.0) continue;
      for (int j = i + 1; j < nb; ++j) {
        double p = std::min(1.0, deg[i] * deg[j] / (2.0 * m_bb));
        if (rng.bernoulli(p)) edges.emplace_back(i, j);
      }
    }
  }

  // cross and fraud blocks as in the SBM fit
  const double p_cross =
      nb > 0 && nf > 0
          ? clamp01(stats.value(Statistic::EdgeCountBF) /
                    (static_cast<double>(nf) * static_cast<double>(nb)))
          : 0.0;
  const double p_fraud =
      nf >= 2 ? clamp01(static_cast<double>(stats.exact_ff_edges) / pairs_of(nf)) : 0.0;
  for (int i = 0; i < nb; ++i)
    for (int f = 0; f < nf; ++f)
      if (rng.bernoulli(p_cross)) edges.emplace_back(i, nb + f);
  for (int i = 0; i < nf; ++i)
    for (int j = i + 1; j < nf; ++j)
      if (rng.bernoulli(p_fraud)) edges.emplace_back(nb + i, nb + j);

  auto base = make_vertices(nb, nf);
  LabeledGraph g = LabeledGraph::create(base.ids, base.fraud, edges);
  if (!with_triangles) return g;

  const double target = stats.value(Statistic::TriangleCount);
  RewireState st;
  st.adj.resize(g.n());
  for (const auto& [u, v] : g.edges()) {
    st.adj[u].insert(v);
    st.adj[v].insert(u);
    if (!g.is_fraud(u) && !g.is_fraud(v)) st.edges.emplace_back(u, v);
  }

  std::int64_t tri = compute_stats(g).triangle_count;
  const std::int64_t t_max = 10LL * g.n();
  const double tolerance = 0.05 * std::max(1.0, std::abs(target));
  for (std::int64_t step = 0; step < t_max && st.edges.size() >= 2; ++step) {
    if (std::abs(static_cast<double>(tri) - target) <= tolerance) break;
    auto ei = rng.uniform_index(st.edges.size());
    auto ej = rng.uniform_index(st.edges.size());
    if (ei == ej) continue;
    auto [a, b] = st.edges[ei];
    auto [c, d] = st.edges[ej];
    if (a == c || a == d || b == c || b == d) continue;
    // propose (a,b),(c,d) -> (a,d),(c,b); degree-preserving
    if (st.has(a, d) || st.has(c, b)) continue;

    std::int64_t delta = 0;
    delta -= st.common(a, b);
    st.remove(a, b);
    delta -= st.common(c, d);
    st.remove(c, d);
    delta += st.common(a, d);
    st.add(a, d);
    delta += st.common(c, b);
    st.add(c, b);

    std::int64_t next = tri + delta;
    if (std::abs(static_cast<double>(next) - target) <
        std::abs(static_cast<double>(tri) - target)) {
      tri = next;
      st.edges[ei] = {a, d};
      st.edges[ej] = {c, b};
    } else {
      st.remove(a, d);
      st.remove(c, b);
      st.add(a, b);
      st.add(c, d);
    }
  }

  std::vector<LabeledGraph::Edge> final_edges;
  for (int v = 0; v < g.n(); ++v)
    for (int u : st.adj[v])
      if (v < u) final_edges.emplace_back(v, u);
  return LabeledGraph::create(base.ids, base.fraud, std::move(final_edges));
}

LabeledGraph topm_filter(const LabeledGraph& truncated_graph, const NoisyStats& stats,
                         std::uint64_t seed) {
  const LabeledGraph& g = truncated_graph;
  Rng rng(seed);

  std::vector<int> benign = g.benign_vertices();
  std::vector<int> fraud = g.fraud_vertices();
  const std::int64_t m_ff_count = [&] {
    std::int64_t c = 0;
    for (const auto& [u, v] : g.edges())
      if (g.is_fraud(u) && g.is_fraud(v)) ++c;
    return c;
  }();

  const double benign_pairs =
      pairs_of(g.n()) - pairs_of(static_cast<std::int64_t>(fraud.size()));
  double m_target = stats.value(Statistic::EdgeCount);
  m_target = std::clamp(m_target, static_cast<double>(m_ff_count),
                        static_cast<double>(m_ff_count) + benign_pairs);
  const auto keep = static_cast<std::int64_t>(std::llround(m_target)) - m_ff_count;

  const double scale = stats.adjacency_noise_scale;

  // enumerate benign-involving pairs in a fixed order; ties resolved by index
  struct Scored {
    double score;
    int u, v;
  };
  std::vector<Scored> scored;
  scored.reserve(static_cast<std::size_t>(benign_pairs));
  for (int u = 0; u < g.n(); ++u) {
    for (int v = u + 1; v < g.n(); ++v) {
      if (g.is_fraud(u) && g.is_fraud(v)) continue;
      double s = g.has_edge(u, v) ? 1.0 : 0.0;
      if (scale > 0.0) s += sample_laplace(scale, rng);
      scored.push_back({s, u, v});
    }
  }
  auto better = [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  };
  auto cut = std::min<std::int64_t>(keep, static_cast<std::int64_t>(scored.size()));
  std::nth_element(scored.begin(), scored.begin() + cut, scored.end(), better);

  std::vector<LabeledGraph::Edge> edges;
  for (std::int64_t i = 0; i < cut; ++i) edges.emplace_back(scored[i].u, scored[i].v);
  for (const auto& [u, v] : g.edges())
    if (g.is_fraud(u) && g.is_fraud(v)) edges.emplace_back(u, v);

  std::vector<std::string> ids;
  std::vector<char> labels;
  for (int v = 0; v < g.n(); ++v) {
    ids.push_back(g.id(v));
    labels.push_back(g.is_fraud(v) ? 1 : 0);
  }
  return LabeledGraph::create(std::move(ids), std::move(labels), std::move(edges));
}

namespace {

std::int64_t threshold_from_multiplier(const LabeledGraph& g, double multiplier) {
  if (!(multiplier > 0.0))
    throw std::invalid_argument("generate_synthetic: multiplier must be positive");
  std::int64_t max_benign = 0;
  for (int v = 0; v < g.n(); ++v)
    if (!g.is_fraud(v)) max_benign = std::max<std::int64_t>(max_benign, g.degree(v));
  return std::llround(multiplier * static_cast<double>(max_benign));
}

}  // namespace

LabeledGraph generate_synthetic(const LabeledGraph& graph, SynthMethod method,
                                double epsilon, double delta, double d_multiplier,
                                bool noise_enabled, std::uint64_t seed) {
  const std::int64_t d = threshold_from_multiplier(graph, d_multiplier);
  NoisyStats stats = estimate_stats_private(graph, method, epsilon, delta, d,
                                            noise_enabled, derive_seed(seed, 1));
  const std::uint64_t sample_seed = derive_seed(seed, 2);
  switch (method) {
    case SynthMethod::Sbm:
      return fit_and_sample_sbm(stats, sample_seed);
    case SynthMethod::Agm:
      return sample_agm(stats, false, sample_seed);
    case SynthMethod::AgmTriangles:
      return sample_agm(stats, true, sample_seed);
    case SynthMethod::TopmFilter:
      return topm_filter(truncate_by_degree(graph, d), stats, sample_seed);
  }
  throw std::logic_error("generate_synthetic: unknown method");
}

std::vector<StatErrorRow> stat_error_report(const LabeledGraph& graph,
                                            const std::vector<SynthMethod>& methods,
                                            double epsilon, double delta,
                                            const std::vector<double>& d_multipliers,
                                            int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("stat_error_report: trials must be >= 1");
  std::vector<StatErrorRow> rows;
  std::uint64_t stream = 0;

  for (SynthMethod method : methods) {
    for (double mult : d_multipliers) {
      const std::int64_t d = threshold_from_multiplier(graph, mult);
      const LabeledGraph truncated = truncate_by_degree(graph, d);
      const GraphStats truth = compute_stats(truncated);

      std::map<std::string, double> acc;
      for (int t = 0; t < trials; ++t) {
        NoisyStats st = estimate_stats_private(graph, method, epsilon, delta, d, true,
                                               derive_seed(seed, ++stream));
        for (const auto& e : st.entries) {
          double tv = exact_value(e.statistic, truth);
          if (e.statistic == Statistic::EdgeCount)
            tv += static_cast<double>(truth.edge_count_ff);
          double err = std::abs(e.noisy_value - tv);
          acc[statistic_name(e.statistic)] += tv != 0.0 ? err / std::abs(tv) : err;
        }
        if (!st.noisy_degree_sequence.empty()) {
          double l1 = 0.0, base = 0.0;
          for (std::size_t i = 0; i < st.noisy_degree_sequence.size(); ++i) {
            l1 += std::abs(st.noisy_degree_sequence[i] -
                           static_cast<double>(truth.degree_sequence_benign[i]));
            base += static_cast<double>(truth.degree_sequence_benign[i]);
          }
          acc[statistic_name(Statistic::DegreeSequenceBenign)] +=
              base != 0.0 ? l1 / base : l1;
        }
        if (st.adjacency_noise_scale > 0.0) {
          // raw noisy adjacency scores vs the 0/1 truth, before filtering
          Rng rng(derive_seed(seed, ++stream));
          double l1 = 0.0;
          const double pairs = pairs_of(truncated.n()) -
                               pairs_of(static_cast<std::int64_t>(truncated.n_fraud()));
          const auto n_pairs = static_cast<std::int64_t>(pairs);
          for (std::int64_t i = 0; i < n_pairs; ++i)
            l1 += std::abs(sample_laplace(st.adjacency_noise_scale, rng));
          const double base =
              static_cast<double>(truth.edge_count_bb + truth.edge_count_bf);
          acc[statistic_name(Statistic::AdjacencyUpperTriangle)] +=
              base != 0.0 ? l1 / base : l1;
        }
      }

      for (const auto& [name, total] : acc)
        rows.push_back({method, mult, name, total / static_cast<double>(trials)});
    }
  }
  return rows;
}

}  // namespace fraudbench
