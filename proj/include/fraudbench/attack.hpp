#ifndef FRAUDBENCH_ATTACK_HPP
#define FRAUDBENCH_ATTACK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fraudbench/detectors.hpp"
#include "fraudbench/graph.hpp"
#include "fraudbench/pda.hpp"
#include "fraudbench/synth.hpp"

namespace fraudbench {

// Binary query on a graph: presence of a target edge, or membership of a
// target vertex.
struct AttackQuery {
  enum class Kind { EdgePresence, VertexMembership };
  Kind kind = Kind::EdgePresence;
  std::string u, v;  // edge endpoints (v unused for membership)

  bool evaluate(const LabeledGraph& graph) const;
};

struct AttackSpec {
  CompiledDetector accurate;
  CompiledDetector inaccurate;
  AttackQuery query;
};

// The submitted "detector": evaluates the query on whatever graph it is run
// on and dispatches to the accurate detector if true, else the inaccurate one.
CompiledDetector make_attack_detector(const AttackSpec& spec);

struct AttackServer {
  enum class Mode { Exact, Pda, Synth };
  Mode mode = Mode::Exact;
  PdaConfig pda;          // mode == Pda
  SynthMethod method = SynthMethod::Sbm;  // mode == Synth
  double epsilon = 1.0;   // mode == Synth
  double delta = 1e-8;
  double d_multiplier = 1.0;
};

// Matched graph family: SBM graphs with a target benign-benign edge forced
// present (positive trials) or absent (negative trials).
struct AttackTrial {
  bool ground_truth = false;
  double released_value = 0.0;
};

std::vector<AttackTrial> run_attack_trials(const AttackServer& server,
                                           const SbmParams& family,
                                           int n_positive, int n_negative,
                                           std::uint64_t seed);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;  // half-credit tie convention
};

RocCurve roc_curve(const std::vector<AttackTrial>& trials);

}  // namespace fraudbench

#endif
