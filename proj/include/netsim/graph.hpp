#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace netsim {

struct HalfEdge {
  std::uint32_t to;
  std::uint32_t edge;  // index into edges(), canonical (sorted) order
};

// Immutable undirected simple graph. Node ids are dense 0..n-1; edge ids
// are indices into the sorted (u<v, lexicographic) edge list, so they are
// stable across runs for a given edge set.
class Graph {
 public:
  static Graph from_edges(std::uint32_t n,
                          std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

  std::uint32_t node_count() const noexcept { return n_; }
  std::uint32_t edge_count() const noexcept {
    return static_cast<std::uint32_t>(edges_.size());
  }
  std::uint32_t max_degree() const noexcept { return max_degree_; }

  std::uint32_t degree(std::uint32_t v) const {
    return offsets_[v + 1] - offsets_[v];
  }
  std::span<const HalfEdge> neighbors(std::uint32_t v) const {
    return {half_edges_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const noexcept {
    return edges_;
  }

  // Recomputes every structural invariant from scratch; throws on breakage.
  void validate() const;

  // Edge-list text format: "n <count>" then one "u v" line per edge,
  // u < v, sorted. Byte-exact by construction.
  std::string to_edge_list() const;

 private:
  Graph() = default;

  std::uint32_t n_ = 0;
  std::uint32_t max_degree_ = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<HalfEdge> half_edges_;
};

// Toroidal width x height lattice, row-major node ids, degree 4 everywhere.
// Dimensions below 3 would wrap into parallel edges and are rejected.
Graph make_torus(std::uint32_t width, std::uint32_t height);

// Torus plus n*(target_degree-4)/2 extra edges placed uniformly at random
// among pairs that are not yet adjacent and still below target_degree.
// Restarts from the bare torus (fresh substream) if the greedy placement
// stalls; gives up after 100 attempts.
Graph make_small_world(std::uint32_t width, std::uint32_t height,
                       std::uint32_t target_degree, std::uint64_t seed);

// Depth-truncated tree: root (node 0) has m children, every other internal
// node has k-1 children, leaves sit at the given depth.
Graph make_tree(std::uint32_t m, std::uint32_t k, std::uint32_t depth);

struct GraphSpec {
  enum class Kind { torus, small_world, tree };
  Kind kind = Kind::torus;
  std::uint32_t width = 30;
  std::uint32_t height = 30;
  std::uint32_t target_degree = 5;  // small-world only
  std::uint32_t tree_m = 2;
  std::uint32_t tree_k = 4;
  std::uint32_t tree_depth = 6;
  std::uint64_t seed = 0;
};

Graph build_graph(const GraphSpec& spec);

}  // namespace netsim
