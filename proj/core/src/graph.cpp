#include "tagtrace/graph.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "tagtrace/error.hpp"

namespace tagtrace {

InterestGraph::InterestGraph(std::size_t node_count, std::vector<Edge> edges, double threshold,
                             SimilarityMode mode)
    : edges_(std::move(edges)), offset_(node_count + 1, 0), threshold_(threshold), mode_(mode) {
  for (auto& e : edges_) {
    if (e.a == e.b) throw ConfigError("interest graph cannot contain self-loops");
    if (e.b < e.a) std::swap(e.a, e.b);
    if (e.b.index() >= node_count) throw ConfigError("edge endpoint outside the node set");
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].a == edges_[i - 1].a && edges_[i].b == edges_[i - 1].b) {
      throw ConfigError("interest graph cannot contain repeated edges");
    }
  }
  for (const auto& e : edges_) {
    ++offset_[e.a.index() + 1];
    ++offset_[e.b.index() + 1];
  }
  std::partial_sum(offset_.begin(), offset_.end(), offset_.begin());
  adjacency_.resize(offset_.back());
  std::vector<std::size_t> cursor(offset_.begin(), offset_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[cursor[e.a.index()]++] = e.b.value;
    adjacency_[cursor[e.b.index()]++] = e.a.value;
  }
  for (std::size_t v = 0; v < node_count; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offset_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offset_[v + 1]));
  }
}

InterestGraph build_graph(const SparseSimilarity& sim, std::size_t node_count, double threshold) {
  if (!(threshold > 0.0)) {
    throw ConfigError("graph threshold must be positive; a zero threshold admits every user pair");
  }
  std::vector<InterestGraph::Edge> edges;
  for (const auto& e : sim.entries) {
    const double w = e.weight();
    if (w >= threshold) edges.push_back({e.a, e.b, w});
  }
  return InterestGraph(node_count, std::move(edges), threshold, sim.mode);
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t x, std::uint32_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (size_[x] < size_[y]) std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

std::vector<std::uint32_t> component_labels(const InterestGraph& graph) {
  const std::size_t n = graph.node_count();
  DisjointSets sets(n);
  for (const auto& e : graph.edges()) sets.unite(e.a.value, e.b.value);
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label_of_root(n, unset);
  std::vector<std::uint32_t> labels(n);
  std::uint32_t next = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto root = sets.find(v);
    if (label_of_root[root] == unset) label_of_root[root] = next++;
    labels[v] = label_of_root[root];
  }
  return labels;
}

std::vector<std::uint64_t> triangle_counts(const InterestGraph& graph) {
  // Orient each edge toward the endpoint of higher (degree, id) rank; every
  // triangle is then found exactly once from its lowest-ranked corner.
  const std::size_t n = graph.node_count();
  auto ranks_below = [&](std::uint32_t u, std::uint32_t v) {
    const auto du = graph.degree(u);
    const auto dv = graph.degree(v);
    return du != dv ? du < dv : u < v;
  };
  std::vector<std::vector<std::uint32_t>> forward(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (auto v : graph.neighbors(u)) {
      if (ranks_below(u, v)) forward[u].push_back(v);
    }
  }
  std::vector<std::uint64_t> triangles(n, 0);
  std::vector<char> mark(n, 0);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (auto v : forward[u]) mark[v] = 1;
    for (auto v : forward[u]) {
      for (auto w : forward[v]) {
        if (mark[w]) {
          ++triangles[u];
          ++triangles[v];
          ++triangles[w];
        }
      }
    }
    for (auto v : forward[u]) mark[v] = 0;
  }
  return triangles;
}

std::vector<NodeStats> node_stats(const InterestGraph& graph) {
  const auto labels = component_labels(graph);
  const auto triangles = triangle_counts(graph);
  std::vector<NodeStats> out(graph.node_count());
  for (std::uint32_t v = 0; v < out.size(); ++v) {
    auto& s = out[v];
    s.degree = graph.degree(v);
    s.component = labels[v];
    s.triangles = triangles[v];
    if (s.degree >= 2) {
      const double wedges = static_cast<double>(s.degree) * static_cast<double>(s.degree - 1) / 2.0;
      s.clustering = static_cast<double>(s.triangles) / wedges;
    }
  }
  return out;
}

TopologyReport topology(const InterestGraph& graph) {
  TopologyReport r;
  r.nodes = graph.node_count();
  r.edges = graph.edge_count();
  if (r.nodes == 0) return r;

  const auto stats = node_stats(graph);
  std::vector<std::size_t> component_size;
  for (const auto& s : stats) {
    if (s.component >= component_size.size()) component_size.resize(s.component + 1, 0);
    ++component_size[s.component];
  }
  r.components = component_size.size();

  // The giant is the largest component with an edge; ties go to the lower label.
  std::optional<std::uint32_t> giant;
  for (std::uint32_t c = 0; c < component_size.size(); ++c) {
    if (component_size[c] < 2) continue;
    if (!giant || component_size[c] > component_size[*giant]) giant = c;
  }
  r.giant_size = giant ? component_size[*giant] : 0;

  std::vector<std::size_t> sizes = component_size;
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  for (std::size_t size : sizes) {
    if (r.component_histogram.empty() || r.component_histogram.back().size != size) {
      r.component_histogram.push_back({size, 0});
    }
    ++r.component_histogram.back().count;
  }

  double sum_all = 0.0;
  double sum_core = 0.0;
  std::uint64_t triangle_incidences = 0;
  for (const auto& s : stats) {
    triangle_incidences += s.triangles;
    if (s.degree == 0) ++r.isolated;
    const bool in_giant = giant && s.component == *giant;
    if (!in_giant && s.degree > 0) ++r.small_component_nodes;
    if (s.clustering) {
      sum_all += *s.clustering;
      ++r.clustering_defined_all;
      if (in_giant) {
        sum_core += *s.clustering;
        ++r.clustering_defined_core;
      }
    }
  }
  r.triangles = triangle_incidences / 3;
  const auto n = static_cast<double>(r.nodes);
  r.isolated_fraction = static_cast<double>(r.isolated) / n;
  r.small_component_fraction = static_cast<double>(r.small_component_nodes) / n;
  if (r.clustering_defined_all > 0) {
    r.avg_clustering_all = sum_all / static_cast<double>(r.clustering_defined_all);
  }
  if (r.clustering_defined_core > 0) {
    r.avg_clustering_core = sum_core / static_cast<double>(r.clustering_defined_core);
  }
  r.avg_clustering_all_zero_filled = sum_all / n;
  if (r.giant_size > 0) {
    r.avg_clustering_core_zero_filled = sum_core / static_cast<double>(r.giant_size);
  }
  return r;
}

double rand_index(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  if (a.size() != b.size()) throw ConfigError("rand index needs labelings of equal length");
  const std::size_t n = a.size();
  if (n < 2) return 1.0;
  // Pair-counting via the contingency table: agreements = C(n,2) - (pairs
  // together in exactly one labeling).
  auto choose2 = [](std::uint64_t k) { return k * (k - 1) / 2; };
  std::unordered_map<std::uint64_t, std::uint64_t> joint;
  std::unordered_map<std::uint32_t, std::uint64_t> rows;
  std::unordered_map<std::uint32_t, std::uint64_t> cols;
  for (std::size_t i = 0; i < n; ++i) {
    ++joint[(static_cast<std::uint64_t>(a[i]) << 32) | b[i]];
    ++rows[a[i]];
    ++cols[b[i]];
  }
  std::uint64_t both = 0;
  std::uint64_t same_a = 0;
  std::uint64_t same_b = 0;
  for (const auto& [k, c] : joint) both += choose2(c);
  for (const auto& [k, c] : rows) same_a += choose2(c);
  for (const auto& [k, c] : cols) same_b += choose2(c);
  const std::uint64_t total = choose2(n);
  const std::uint64_t agree = total - (same_a - both) - (same_b - both);
  return static_cast<double>(agree) / static_cast<double>(total);
}

}  // namespace tagtrace
