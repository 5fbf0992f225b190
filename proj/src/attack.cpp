#include "fraudbench/attack.hpp"

#include <algorithm>
#include <stdexcept>

#include "fraudbench/metrics.hpp"

namespace fraudbench {

bool AttackQuery::evaluate(const LabeledGraph& graph) const {
  int iu = -1, iv = -1;
  for (int w = 0; w < graph.n(); ++w) {
    if (graph.id(w) == u) iu = w;
    if (kind == Kind::EdgePresence && graph.id(w) == v) iv = w;
  }
  if (kind == Kind::VertexMembership) return iu >= 0;
  // absent endpoints make the query false
  if (iu < 0 || iv < 0) return false;
  return graph.has_edge(iu, iv);
}

CompiledDetector make_attack_detector(const AttackSpec& spec) {
  if (!spec.accurate || !spec.inaccurate)
    throw std::invalid_argument("make_attack_detector: missing child detector");
  return [spec](const LabeledGraph& g) {
    return spec.query.evaluate(g) ? spec.accurate(g) : spec.inaccurate(g);
  };
}

std::vector<AttackTrial> run_attack_trials(const AttackServer& server,
                                           const SbmParams& family,
                                           int n_positive, int n_negative,
                                           std::uint64_t seed) {
  if (n_positive < 0 || n_negative < 0)
    throw std::invalid_argument("run_attack_trials: negative trial count");
  if (family.n_benign < 2)
    throw std::invalid_argument("run_attack_trials: family needs >= 2 benign vertices");

  // the degree detector oriented so fraud scores higher (p_F > p_B families)
  CompiledDetector accurate = [](const LabeledGraph& g) {
    ScoreVector s(g.n());
    for (int w = 0; w < g.n(); ++w) s[w] = static_cast<double>(g.degree(w));
    return s;
  };

  AttackQuery query;
  query.kind = AttackQuery::Kind::EdgePresence;
  query.u = "b0";
  query.v = "b1";

  std::vector<AttackTrial> trials;
  const int total = n_positive + n_negative;
  for (int t = 0; t < total; ++t) {
    const bool truth = t < n_positive;
    const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(t));

    LabeledGraph base = sample_sbm(family, trial_seed);
    // force the target edge's truth value; other structure untouched
    int iu = -1, iv = -1;
    for (int w = 0; w < base.n(); ++w) {
      if (base.id(w) == query.u) iu = w;
      if (base.id(w) == query.v) iv = w;
    }
    std::vector<LabeledGraph::Edge> edges = base.edges();
    auto target = std::make_pair(std::min(iu, iv), std::max(iu, iv));
    edges.erase(std::remove(edges.begin(), edges.end(), target), edges.end());
    if (truth) edges.push_back(target);
    std::vector<std::string> ids;
    std::vector<char> labels;
    for (int w = 0; w < base.n(); ++w) {
      ids.push_back(base.id(w));
      labels.push_back(base.is_fraud(w) ? 1 : 0);
    }
    LabeledGraph g = LabeledGraph::create(std::move(ids), std::move(labels),
                                          std::move(edges));

    AttackSpec spec;
    spec.accurate = accurate;
    spec.inaccurate = compile(DetectorSpec{.name = "random",
                                           .kind = DetectorSpec::Kind::Random,
                                           .seed = derive_seed(trial_seed, 7)});
    spec.query = query;
    CompiledDetector attacker = make_attack_detector(spec);

    double released = 0.0;
    switch (server.mode) {
      case AttackServer::Mode::Exact:
        released = auc(attacker(g), g);
        break;
      case AttackServer::Mode::Pda: {
        BudgetLedger ledger(server.pda.epsilon);
        released = pda_release(attacker, g, server.pda,
                               [](const ScoreVector& s, const LabeledGraph& gg) {
                                 return auc(s, gg);
                               },
                               ledger, derive_seed(trial_seed, 11))
                       .released;
        break;
      }
      case AttackServer::Mode::Synth: {
        LabeledGraph synthetic =
            generate_synthetic(g, server.method, server.epsilon, server.delta,
                               server.d_multiplier, true, derive_seed(trial_seed, 13));
        released = auc(attacker(synthetic), synthetic);
        break;
      }
    }
    trials.push_back({truth, released});
  }
  return trials;
}

RocCurve roc_curve(const std::vector<AttackTrial>& trials) {
  std::int64_t pos = 0, neg = 0;
  for (const auto& t : trials) (t.ground_truth ? pos : neg)++;
  if (pos == 0 || neg == 0)
    throw std::invalid_argument("roc_curve: both classes required");

  std::vector<AttackTrial> sorted = trials;
  std::sort(sorted.begin(), sorted.end(), [](const AttackTrial& a, const AttackTrial& b) {
    return a.released_value > b.released_value;
  });

  RocCurve out;
  out.points.push_back({0.0, 0.0, sorted.front().released_value + 1.0});
  std::int64_t tp = 0, fp = 0;
  double strict = 0.0, ties = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double v = sorted[i].released_value;
    std::int64_t tie_pos = 0, tie_neg = 0;
    while (i < sorted.size() && sorted[i].released_value == v) {
      (sorted[i].ground_truth ? tie_pos : tie_neg)++;
      ++i;
    }
    // positives above this group's negatives count fully; within-group half
    strict += static_cast<double>(tp) * tie_neg;
    ties += static_cast<double>(tie_pos) * tie_neg;
    tp += tie_pos;
    fp += tie_neg;
    out.points.push_back({static_cast<double>(fp) / neg, static_cast<double>(tp) / pos, v});
  }
  out.auc = (strict + 0.5 * ties) / (static_cast<double>(pos) * static_cast<double>(neg));
  return out;
}

}  // namespace fraudbench
