#include "netsim/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "netsim/rng.hpp"

namespace netsim {

namespace {

constexpr std::uint64_t kTreeNodeCap = 10'000'000;

std::uint64_t pack_edge(std::uint32_t u, std::uint32_t v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

Graph Graph::from_edges(std::uint32_t n,
                        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
  for (auto& [u, v] : edges) {
    if (u == v) throw std::invalid_argument("graph: self-loop");
    if (u > v) std::swap(u, v);
    if (v >= n) throw std::invalid_argument("graph: node id out of range");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("graph: parallel edge");

  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);

  std::vector<std::uint32_t> deg(n, 0);
  for (const auto& [u, v] : g.edges_) {
    ++deg[u];
    ++deg[v];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::uint32_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.half_edges_.resize(g.offsets_[n]);
  std::vector<std::uint32_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::uint32_t e = 0; e < g.edges_.size(); ++e) {
    const auto [u, v] = g.edges_[e];
    g.half_edges_[cursor[u]++] = {v, e};
    g.half_edges_[cursor[v]++] = {u, e};
  }
  g.max_degree_ = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  return g;
}

void Graph::validate() const {
  std::uint64_t degree_sum = 0;
  std::uint32_t max_seen = 0;
  for (std::uint32_t v = 0; v < n_; ++v) {
    degree_sum += degree(v);
    max_seen = std::max(max_seen, degree(v));
    for (const HalfEdge& he : neighbors(v)) {
      if (he.to == v) throw std::logic_error("graph: self-loop in adjacency");
      if (he.to >= n_) throw std::logic_error("graph: neighbor out of range");
      const auto [a, b] = edges_[he.edge];
      if (!((a == v && b == he.to) || (a == he.to && b == v)))
        throw std::logic_error("graph: half-edge does not match edge list");
      // symmetry: the mirror half-edge must exist
      const auto mirror = neighbors(he.to);
      const bool found = std::any_of(mirror.begin(), mirror.end(), [&](const HalfEdge& m) {
        return m.to == v && m.edge == he.edge;
      });
      if (!found) throw std::logic_error("graph: asymmetric adjacency");
    }
  }
  if (degree_sum != 2ull * edges_.size())
    throw std::logic_error("graph: degree sum != 2|E|");
  if (max_seen != max_degree_) throw std::logic_error("graph: stale max degree");
  for (std::size_t e = 1; e < edges_.size(); ++e)
    if (edges_[e - 1] >= edges_[e]) throw std::logic_error("graph: edge list unsorted");
}

std::string Graph::to_edge_list() const {
  std::string out = "n " + std::to_string(n_) + "\n";
  for (const auto& [u, v] : edges_) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

Graph make_torus(std::uint32_t width, std::uint32_t height) {
  if (width < 3 || height < 3)
    throw std::invalid_argument(
        "torus: width and height must be >= 3 (smaller dimensions wrap into "
        "parallel edges)");
  const std::uint32_t n = width * height;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(2ull * n);
  auto id = [&](std::uint32_t r, std::uint32_t c) { return r * width + c; };
  for (std::uint32_t r = 0; r < height; ++r) {
    for (std::uint32_t c = 0; c < width; ++c) {
      edges.emplace_back(id(r, c), id(r, (c + 1) % width));
      edges.emplace_back(id(r, c), id((r + 1) % height, c));
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph make_small_world(std::uint32_t width, std::uint32_t height,
                       std::uint32_t target_degree, std::uint64_t seed) {
  if (target_degree < 4)
    throw std::invalid_argument("small-world: target degree must be >= 4");
  const std::uint64_t n = static_cast<std::uint64_t>(width) * height;
  if ((n * (target_degree - 4)) % 2 != 0)
    throw std::invalid_argument("small-world: n*(target_degree-4) must be even");
  const std::uint64_t extra = n * (target_degree - 4) / 2;

  Graph torus = make_torus(width, height);
  if (extra == 0) return torus;

  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    rng::Stream stream(rng::derive_key(seed, rng::tag::graph,
                                       static_cast<std::uint64_t>(attempt)));
    std::vector<std::uint32_t> deg(n, 4);
    std::unordered_set<std::uint64_t> present;
    present.reserve(torus.edge_count() + extra);
    auto edges = torus.edges();
    for (const auto& [u, v] : edges) present.insert(pack_edge(u, v));

    std::vector<std::uint32_t> open(n);
    for (std::uint32_t v = 0; v < n; ++v) open[v] = v;
    auto compact = [&] {
      std::erase_if(open, [&](std::uint32_t v) { return deg[v] >= target_degree; });
    };

    bool stalled = false;
    std::uint64_t added = 0;
    while (added < extra) {
      compact();
      if (open.size() < 2) {
        stalled = true;
        break;
      }
      bool placed = false;
      const std::uint64_t budget = 50 + 20 * open.size();
      for (std::uint64_t tries = 0; tries < budget; ++tries) {
        std::uint32_t a = open[stream.next_below(open.size())];
        std::uint32_t b = open[stream.next_below(open.size())];
        if (a == b || deg[a] >= target_degree || deg[b] >= target_degree) continue;
        if (a > b) std::swap(a, b);
        if (present.contains(pack_edge(a, b))) continue;
        present.insert(pack_edge(a, b));
        ++deg[a];
        ++deg[b];
        edges.emplace_back(a, b);
        ++added;
        placed = true;
        break;
      }
      if (placed) continue;
      // Rejection kept missing: enumerate the remaining addable pairs exactly.
      std::vector<std::pair<std::uint32_t, std::uint32_t>> candidates;
      for (std::size_t i = 0; i < open.size(); ++i) {
        for (std::size_t j = i + 1; j < open.size(); ++j) {
          std::uint32_t a = std::min(open[i], open[j]);
          std::uint32_t b = std::max(open[i], open[j]);
          if (!present.contains(pack_edge(a, b))) candidates.emplace_back(a, b);
        }
      }
      if (candidates.empty()) {
        stalled = true;
        break;
      }
      const auto [a, b] = candidates[stream.next_below(candidates.size())];
      present.insert(pack_edge(a, b));
      ++deg[a];
      ++deg[b];
      edges.emplace_back(a, b);
      ++added;
    }
    if (!stalled)
      return Graph::from_edges(static_cast<std::uint32_t>(n), std::move(edges));
  }
  throw std::runtime_error(
      "small-world: edge placement stalled in every restart attempt");
}

Graph make_tree(std::uint32_t m, std::uint32_t k, std::uint32_t depth) {
  if (m < 1) throw std::invalid_argument("tree: m must be >= 1");
  if (k < 3) throw std::invalid_argument("tree: k must be >= 3");
  if (depth < 1) throw std::invalid_argument("tree: depth must be >= 1");

  const std::uint32_t children_inner = k - 1;
  std::uint64_t total = 1;
  std::uint64_t level = m;
  for (std::uint32_t d = 1; d <= depth; ++d) {
    total += level;
    if (total > kTreeNodeCap)
      throw std::invalid_argument("tree: node count exceeds cap of 10^7");
    level *= children_inner;
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(total - 1);
  std::uint32_t next_id = 1;
  // (node, depth) pairs in BFS order; ids are assigned level by level.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> frontier{{0, 0}};
  std::vector<std::pair<std::uint32_t, std::uint32_t>> next_frontier;
  while (!frontier.empty()) {
    next_frontier.clear();
    for (const auto& [node, d] : frontier) {
      if (d == depth) continue;
      const std::uint32_t fanout = (node == 0) ? m : children_inner;
      for (std::uint32_t c = 0; c < fanout; ++c) {
        const std::uint32_t child = next_id++;
        edges.emplace_back(node, child);
        next_frontier.emplace_back(child, d + 1);
      }
    }
    frontier.swap(next_frontier);
  }
  return Graph::from_edges(static_cast<std::uint32_t>(total), std::move(edges));
}

Graph build_graph(const GraphSpec& spec) {
  switch (spec.kind) {
    case GraphSpec::Kind::torus:
      return make_torus(spec.width, spec.height);
    case GraphSpec::Kind::small_world:
      return make_small_world(spec.width, spec.height, spec.target_degree, spec.seed);
    case GraphSpec::Kind::tree:
      return make_tree(spec.tree_m, spec.tree_k, spec.tree_depth);
  }
  throw std::invalid_argument("graph: unknown kind");
}

}  // namespace netsim
