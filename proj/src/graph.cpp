#include "fraudbench/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "fraudbench/rng.hpp"

namespace fraudbench {

void SbmParams::validate() const {
  if (n_fraud < 0 || n_benign < 0)
    throw std::invalid_argument("SbmParams: counts must be nonnegative");
  for (double p : {p_fraud, p_benign, p_cross})
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("SbmParams: probabilities must be in [0,1]");
}

LabeledGraph LabeledGraph::create(std::vector<std::string> ids, std::vector<char> fraud,
                                  std::vector<Edge> edges,
                                  std::optional<Metadata> metadata) {
  const int n = static_cast<int>(ids.size());
  if (fraud.size() != ids.size())
    throw std::invalid_argument("graph: label count does not match vertex count");
  for (auto& e : edges) {
    if (e.first == e.second) throw std::invalid_argument("graph: self-loop");
    if (e.first < 0 || e.second < 0 || e.first >= n || e.second >= n)
      throw std::invalid_argument("graph: edge endpoint not a declared vertex");
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  if (metadata) {
    if (metadata->size() != ids.size())
      throw std::invalid_argument("graph: metadata row count does not match vertices");
    for (const auto& row : *metadata)
      if (row.size() != metadata->front().size())
        throw std::invalid_argument("graph: inconsistent metadata dimension");
  }

  LabeledGraph g;
  g.ids_ = std::move(ids);
  g.fraud_ = std::move(fraud);
  g.edges_ = std::move(edges);
  g.metadata_ = std::move(metadata);
  g.adj_.assign(n, {});
  for (const auto& [u, v] : g.edges_) {
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());
  g.n_fraud_ = static_cast<int>(std::count(g.fraud_.begin(), g.fraud_.end(), 1));
  return g;
}

bool LabeledGraph::has_edge(int u, int v) const {
  const auto& nb = adj_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<int> LabeledGraph::fraud_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < n(); ++v)
    if (is_fraud(v)) out.push_back(v);
  return out;
}

std::vector<int> LabeledGraph::benign_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < n(); ++v)
    if (!is_fraud(v)) out.push_back(v);
  return out;
}

int LabeledGraph::metadata_dim() const {
  if (!metadata_) throw std::runtime_error("graph: no metadata");
  return metadata_->empty() ? 0 : static_cast<int>(metadata_->front().size());
}

LabeledGraph LabeledGraph::induced_subgraph(const std::vector<int>& vertices) const {
  std::vector<int> remap(n(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) remap[vertices[i]] = static_cast<int>(i);

  std::vector<std::string> ids;
  std::vector<char> fraud;
  ids.reserve(vertices.size());
  for (int v : vertices) {
    ids.push_back(ids_[v]);
    fraud.push_back(fraud_[v]);
  }
  std::vector<Edge> edges;
  for (const auto& [u, v] : edges_) {
    if (remap[u] >= 0 && remap[v] >= 0) edges.emplace_back(remap[u], remap[v]);
  }
  std::optional<Metadata> meta;
  if (metadata_) {
    Metadata m;
    m.reserve(vertices.size());
    for (int v : vertices) m.push_back((*metadata_)[v]);
    meta = std::move(m);
  }
  return create(std::move(ids), std::move(fraud), std::move(edges), std::move(meta));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

LabeledGraph load_graph(const std::string& edge_path, const std::string& label_path,
                        const std::string& metadata_path) {
  std::ifstream lf(label_path);
  if (!lf) throw std::runtime_error("cannot open label file: " + label_path);

  std::unordered_map<std::string, int> index;
  std::vector<std::string> ids;
  std::vector<char> fraud;
  std::string line;
  int lineno = 0;
  std::getline(lf, line);  // header
  while (std::getline(lf, line)) {
    ++lineno;
    line = strip(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 2)
      throw std::runtime_error(label_path + ":" + std::to_string(lineno + 1) +
                               ": expected `vertex,label`");
    std::string id = strip(fields[0]);
    std::string lab = strip(fields[1]);
    if (lab != "0" && lab != "1")
      throw std::runtime_error(label_path + ":" + std::to_string(lineno + 1) +
                               ": label must be 0 or 1");
    if (index.count(id))
      throw std::runtime_error(label_path + ":" + std::to_string(lineno + 1) +
                               ": duplicate vertex " + id);
    index[id] = static_cast<int>(ids.size());
    ids.push_back(id);
    fraud.push_back(lab == "1" ? 1 : 0);
  }

  std::ifstream ef(edge_path);
  if (!ef) throw std::runtime_error("cannot open edge file: " + edge_path);
  std::vector<LabeledGraph::Edge> edges;
  lineno = 0;
  while (std::getline(ef, line)) {
    ++lineno;
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra))
      throw std::runtime_error(edge_path + ":" + std::to_string(lineno) +
                               ": expected two vertex ids");
    if (a == b)
      throw std::runtime_error(edge_path + ":" + std::to_string(lineno) + ": self-loop");
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end())
      throw std::runtime_error(edge_path + ":" + std::to_string(lineno) +
                               ": vertex with missing label: " + a);
    if (ib == index.end())
      throw std::runtime_error(edge_path + ":" + std::to_string(lineno) +
                               ": vertex with missing label: " + b);
    edges.emplace_back(ia->second, ib->second);
  }

  std::optional<LabeledGraph::Metadata> meta;
  if (!metadata_path.empty()) {
    std::ifstream mf(metadata_path);
    if (!mf) throw std::runtime_error("cannot open metadata file: " + metadata_path);
    LabeledGraph::Metadata rows(ids.size());
    std::vector<char> seen(ids.size(), 0);
    std::getline(mf, line);  // header
    lineno = 1;
    while (std::getline(mf, line)) {
      ++lineno;
      line = strip(line);
      if (line.empty()) continue;
      auto fields = split_csv_line(line);
      if (fields.size() < 2)
        throw std::runtime_error(metadata_path + ":" + std::to_string(lineno) +
                                 ": expected `vertex,f1,...`");
      auto it = index.find(strip(fields[0]));
      if (it == index.end())
        throw std::runtime_error(metadata_path + ":" + std::to_string(lineno) +
                                 ": unknown vertex " + fields[0]);
      std::vector<double> row;
      for (std::size_t i = 1; i < fields.size(); ++i) row.push_back(std::stod(fields[i]));
      rows[it->second] = std::move(row);
      seen[it->second] = 1;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i])
        throw std::runtime_error(metadata_path + ": missing metadata for vertex " + ids[i]);
    meta = std::move(rows);
  }

  return LabeledGraph::create(std::move(ids), std::move(fraud), std::move(edges),
                              std::move(meta));
}

void save_graph(const LabeledGraph& g, const std::string& edge_path,
                const std::string& label_path) {
  std::ofstream ef(edge_path);
  if (!ef) throw std::runtime_error("cannot open for write: " + edge_path);
  for (const auto& [u, v] : g.edges()) ef << g.id(u) << ' ' << g.id(v) << '\n';
  std::ofstream lf(label_path);
  if (!lf) throw std::runtime_error("cannot open for write: " + label_path);
  lf << "vertex,label\n";
  for (int v = 0; v < g.n(); ++v) lf << g.id(v) << ',' << (g.is_fraud(v) ? 1 : 0) << '\n';
}

namespace {

// Samples each pair in [0, n_pairs) independently with probability p via
// geometric skipping; appends the selected pair indices.
void sample_block(std::int64_t n_pairs, double p, Rng& rng,
                  const std::function<void(std::int64_t)>& emit) {
  if (p <= 0.0 || n_pairs <= 0) return;
  if (p >= 1.0) {
    for (std::int64_t i = 0; i < n_pairs; ++i) emit(i);
    return;
  }
  const double log1mp = std::log1p(-p);
  std::int64_t i = -1;
  while (true) {
    double u = rng.uniform();
    // skip ~ Geometric(p)
    double s = std::floor(std::log1p(-u) / log1mp);
    if (s > static_cast<double>(n_pairs)) break;
    i += 1 + static_cast<std::int64_t>(s);
    if (i >= n_pairs) break;
    emit(i);
  }
}

// Maps a linear index over unordered pairs of [0,n) back to (i,j), i<j.
std::pair<int, int> unrank_pair(std::int64_t idx, std::int64_t n) {
  // row i holds (n-1-i) pairs
  std::int64_t i = 0;
  std::int64_t row = n - 1;
  while (idx >= row) {
    idx -= row;
    --row;
    ++i;
  }
  return {static_cast<int>(i), static_cast<int>(i + 1 + idx)};
}

}  // namespace

LabeledGraph sample_sbm(const SbmParams& params, std::uint64_t seed) {
  params.validate();
  const std::int64_t nb = params.n_benign;
  const std::int64_t nf = params.n_fraud;
  std::vector<std::string> ids;
  std::vector<char> fraud;
  ids.reserve(nb + nf);
  for (std::int64_t i = 0; i < nb; ++i) {
    ids.push_back("b" + std::to_string(i));
    fraud.push_back(0);
  }
  for (std::int64_t i = 0; i < nf; ++i) {
    ids.push_back("f" + std::to_string(i));
    fraud.push_back(1);
  }

  Rng rng(seed);
  std::vector<LabeledGraph::Edge> edges;
  sample_block(nb * (nb - 1) / 2, params.p_benign, rng, [&](std::int64_t idx) {
    auto [i, j] = unrank_pair(idx, nb);
    edges.emplace_back(i, j);
  });
  sample_block(nf * (nf - 1) / 2, params.p_fraud, rng, [&](std::int64_t idx) {
    auto [i, j] = unrank_pair(idx, nf);
    edges.emplace_back(static_cast<int>(nb) + i, static_cast<int>(nb) + j);
  });
  sample_block(nb * nf, params.p_cross, rng, [&](std::int64_t idx) {
    int b = static_cast<int>(idx / nf);
    int f = static_cast<int>(idx % nf);
    edges.emplace_back(b, static_cast<int>(nb) + f);
  });
  return LabeledGraph::create(std::move(ids), std::move(fraud), std::move(edges));
}

LabeledGraph inject_fraud_clique(const LabeledGraph& g, int size, double density,
                                 std::uint64_t seed) {
  if (size < 0) throw std::invalid_argument("inject_fraud_clique: negative size");
  if (!(density >= 0.0 && density <= 1.0))
    throw std::invalid_argument("inject_fraud_clique: density must be in [0,1]");
  auto benign = g.benign_vertices();
  if (size > static_cast<int>(benign.size()))
    throw std::invalid_argument("inject_fraud_clique: size exceeds benign count");

  Rng rng(seed);
  // partial Fisher-Yates: first `size` entries are a uniform subset
  for (int i = 0; i < size; ++i) {
    auto j = i + static_cast<int>(rng.uniform_index(benign.size() - i));
    std::swap(benign[i], benign[j]);
  }
  std::vector<int> chosen(benign.begin(), benign.begin() + size);
  std::sort(chosen.begin(), chosen.end());

  std::vector<std::string> ids;
  std::vector<char> fraud;
  for (int v = 0; v < g.n(); ++v) {
    ids.push_back(g.id(v));
    fraud.push_back(g.is_fraud(v) ? 1 : 0);
  }
  for (int v : chosen) fraud[v] = 1;

  std::vector<LabeledGraph::Edge> edges = g.edges();
  for (std::size_t a = 0; a < chosen.size(); ++a)
    for (std::size_t b = a + 1; b < chosen.size(); ++b)
      if (rng.bernoulli(density)) edges.emplace_back(chosen[a], chosen[b]);

  std::optional<LabeledGraph::Metadata> meta;
  if (g.has_metadata()) {
    LabeledGraph::Metadata m;
    for (int v = 0; v < g.n(); ++v) m.push_back(g.metadata(v));
    meta = std::move(m);
  }
  return LabeledGraph::create(std::move(ids), std::move(fraud), std::move(edges),
                              std::move(meta));
}

LabeledGraph truncate_by_degree(const LabeledGraph& g, std::int64_t d) {
  if (d < 0) throw std::invalid_argument("truncate_by_degree: D must be >= 0");
  std::vector<int> keep;
  for (int v = 0; v < g.n(); ++v)
    if (g.is_fraud(v) || g.degree(v) <= d) keep.push_back(v);
  return g.induced_subgraph(keep);
}

GraphStats compute_stats(const LabeledGraph& g) {
  GraphStats s;
  for (const auto& [u, v] : g.edges()) {
    int f = (g.is_fraud(u) ? 1 : 0) + (g.is_fraud(v) ? 1 : 0);
    if (f == 0)
      ++s.edge_count_bb;
    else if (f == 1)
      ++s.edge_count_bf;
    else
      ++s.edge_count_ff;
  }
  for (int v = 0; v < g.n(); ++v) {
    s.max_degree = std::max<std::int64_t>(s.max_degree, g.degree(v));
    if (!g.is_fraud(v)) s.degree_sequence_benign.push_back(g.degree(v));
  }
  // one triangle per edge (u,v) and common neighbor w > v keeps triples unique
  std::int64_t tri = 0;
  for (const auto& [u, v] : g.edges()) {
    const auto& nu = g.neighbors(u);
    const auto& nv = g.neighbors(v);
    auto iu = std::upper_bound(nu.begin(), nu.end(), v);
    auto iv = std::upper_bound(nv.begin(), nv.end(), v);
    while (iu != nu.end() && iv != nv.end()) {
      if (*iu < *iv)
        ++iu;
      else if (*iv < *iu)
        ++iv;
      else {
        ++tri;
        ++iu;
        ++iv;
      }
    }
  }
  s.triangle_count = tri;
  return s;
}

}  // namespace fraudbench
