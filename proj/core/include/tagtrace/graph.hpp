#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tagtrace/similarity.hpp"

namespace tagtrace {

/// Thresholded interest-sharing graph. Nodes are the user ids [0, node_count),
/// so users left without an edge are still counted.
class InterestGraph {
 public:
  struct Edge {
    UserId a;  // a < b
    UserId b;
    double weight = 0.0;
  };

  /// Simple undirected graph over `node_count` nodes. Self-loops and repeated
  /// edges are rejected with ConfigError.
  InterestGraph(std::size_t node_count, std::vector<Edge> edges, double threshold = 0.0,
                SimilarityMode mode = SimilarityMode::user_item);

  std::size_t node_count() const noexcept { return offset_.size() - 1; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  double threshold() const noexcept { return threshold_; }
  SimilarityMode mode() const noexcept { return mode_; }

  /// Ascending neighbor ids.
  std::span<const std::uint32_t> neighbors(std::uint32_t node) const noexcept {
    return {adjacency_.data() + offset_[node], offset_[node + 1] - offset_[node]};
  }
  std::size_t degree(std::uint32_t node) const noexcept {
    return offset_[node + 1] - offset_[node];
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::size_t> offset_;
  std::vector<std::uint32_t> adjacency_;
  double threshold_;
  SimilarityMode mode_;
};

/// Keeps the pairs with weight >= threshold. Throws ConfigError when
/// threshold <= 0 or a pair references a user id >= node_count.
InterestGraph build_graph(const SparseSimilarity& sim, std::size_t node_count, double threshold);

struct NodeStats {
  std::size_t degree = 0;
  std::uint32_t component = 0;  // index into the components ordered by first node
  std::uint64_t triangles = 0;
  /// triangles / C(degree, 2); unset for degree < 2.
  std::optional<double> clustering;
};

std::vector<NodeStats> node_stats(const InterestGraph& graph);

/// Component label per node; labels are dense and ordered by each component's
/// smallest node.
std::vector<std::uint32_t> component_labels(const InterestGraph& graph);

/// Triangles incident to each node.
std::vector<std::uint64_t> triangle_counts(const InterestGraph& graph);

struct ComponentBucket {
  std::size_t size = 0;
  std::size_t count = 0;
};

struct TopologyReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t isolated = 0;
  double isolated_fraction = 0.0;
  std::size_t components = 0;
  /// Descending by component size.
  std::vector<ComponentBucket> component_histogram;
  /// Largest component size, or 0 when no component has an edge.
  std::size_t giant_size = 0;
  /// Nodes outside singletons and the giant component.
  std::size_t small_component_nodes = 0;
  double small_component_fraction = 0.0;
  std::uint64_t triangles = 0;

  /// Mean local clustering over nodes with degree >= 2 (unset if none).
  std::optional<double> avg_clustering_all;
  std::optional<double> avg_clustering_core;
  /// Same averages with degree < 2 nodes counted as 0.
  double avg_clustering_all_zero_filled = 0.0;
  double avg_clustering_core_zero_filled = 0.0;
  std::size_t clustering_defined_all = 0;
  std::size_t clustering_defined_core = 0;
};

TopologyReport topology(const InterestGraph& graph);

/// Fraction of node pairs on which two labelings agree (same/same or
/// different/different). Throws ConfigError on a length mismatch.
double rand_index(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

}  // namespace tagtrace
