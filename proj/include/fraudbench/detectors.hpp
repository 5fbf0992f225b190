#ifndef FRAUDBENCH_DETECTORS_HPP
#define FRAUDBENCH_DETECTORS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fraudbench/graph.hpp"

namespace fraudbench {

// Per-vertex fraud scores aligned with a graph's vertex order; higher means
// more fraud-suspect.
using ScoreVector = std::vector<double>;

struct DetectorSpec {
  enum class Kind {
    NegDegree,
    NegClustering,
    SvdErrorSum,
    SvdErrorMax,
    CommunitySize,
    AggregateAverage,
    AggregateMax,
    Random,
    MetadataLinear,
  };

  std::string name;
  Kind kind = Kind::NegDegree;
  int rank = 0;                          // svd kinds
  std::uint64_t seed = 0;                // random kind
  std::vector<double> weights;           // aggregate-average / metadata weights
  std::vector<DetectorSpec> children;    // aggregate kinds
};

ScoreVector score(const DetectorSpec& spec, const LabeledGraph& graph);

// The 10-detector suite used by the harness defaults.
std::vector<DetectorSpec> builtin_suite();

// Lookup by name within builtin_suite(); throws on unknown name.
DetectorSpec builtin_detector(const std::string& name);

// A detector closed over its spec; used where detectors must be composed
// (attack construction) or passed across module boundaries.
using CompiledDetector = std::function<ScoreVector(const LabeledGraph&)>;

inline CompiledDetector compile(DetectorSpec spec) {
  return [spec = std::move(spec)](const LabeledGraph& g) { return score(spec, g); };
}

}  // namespace fraudbench

#endif
