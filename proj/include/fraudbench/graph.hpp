#ifndef FRAUDBENCH_GRAPH_HPP
#define FRAUDBENCH_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fraudbench {

struct SbmParams {
  std::int64_t n_fraud = 0;
  std::int64_t n_benign = 0;
  double p_fraud = 0.0;
  double p_benign = 0.0;
  double p_cross = 0.0;

  void validate() const;
};

struct GraphStats {
  std::int64_t edge_count_bb = 0;
  std::int64_t edge_count_bf = 0;
  std::int64_t edge_count_ff = 0;
  std::vector<std::int64_t> degree_sequence_benign;  // aligned with benign_vertices()
  std::int64_t triangle_count = 0;
  std::int64_t max_degree = 0;

  std::int64_t edge_count_total() const {
    return edge_count_bb + edge_count_bf + edge_count_ff;
  }
};

// Undirected simple graph with a fraud/benign label per vertex and optional
// per-vertex metadata. Immutable after construction; transformations return
// new graphs.
class LabeledGraph {
 public:
  using Edge = std::pair<int, int>;  // stored with first < second
  using Metadata = std::vector<std::vector<double>>;

  // Validates invariants: no self-loops, endpoints declared, fixed metadata
  // dimension. Duplicate edges are collapsed.
  static LabeledGraph create(std::vector<std::string> ids,
                             std::vector<char> fraud,
                             std::vector<Edge> edges,
                             std::optional<Metadata> metadata = std::nullopt);

  int n() const { return static_cast<int>(ids_.size()); }
  int n_fraud() const { return n_fraud_; }
  int n_benign() const { return n() - n_fraud_; }

  const std::string& id(int v) const { return ids_[v]; }
  bool is_fraud(int v) const { return fraud_[v] != 0; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  bool has_edge(int u, int v) const;

  const std::vector<Edge>& edges() const { return edges_; }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }

  std::vector<int> fraud_vertices() const;
  std::vector<int> benign_vertices() const;

  bool has_metadata() const { return metadata_.has_value(); }
  const std::vector<double>& metadata(int v) const { return (*metadata_)[v]; }
  int metadata_dim() const;

  // Induced subgraph on the given vertices (indices into this graph),
  // preserving ids, labels and metadata.
  LabeledGraph induced_subgraph(const std::vector<int>& vertices) const;

 private:
  LabeledGraph() = default;

  std::vector<std::string> ids_;
  std::vector<char> fraud_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;  // sorted
  std::optional<Metadata> metadata_;
  int n_fraud_ = 0;
};

// File ingestion per the documented formats: whitespace-separated edge list
// ('#' comments), label CSV `vertex,label`, metadata CSV `vertex,f1,...,fd`.
LabeledGraph load_graph(const std::string& edge_path, const std::string& label_path,
                        const std::string& metadata_path = std::string());

void save_graph(const LabeledGraph& g, const std::string& edge_path,
                const std::string& label_path);

LabeledGraph sample_sbm(const SbmParams& params, std::uint64_t seed);

LabeledGraph inject_fraud_clique(const LabeledGraph& g, int size, double density,
                                 std::uint64_t seed);

// Removes benign vertices whose degree in the input graph exceeds d.
// Single pass: removal decisions use input-graph degrees only.
LabeledGraph truncate_by_degree(const LabeledGraph& g, std::int64_t d);

GraphStats compute_stats(const LabeledGraph& g);

}  // namespace fraudbench

#endif
