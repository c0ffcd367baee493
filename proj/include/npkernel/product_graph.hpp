#pragma once

// Direct product graph of two WL-colored graphs, the neighborhood preserving
// edges it induces, duplicate-free convolution pairs, and level-to-level
// pruning.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include <fmt/format.h>

#include "npkernel/error.hpp"
#include "npkernel/graph.hpp"
#include "npkernel/wl.hpp"

namespace npkernel {

struct ProductNode {
  NodeId u = 0;        // node of the left graph
  NodeId u_prime = 0;  // node of the right graph
  Color color = 0;     // shared color at the product graph's level

  friend auto operator<=>(const ProductNode&, const ProductNode&) = default;
};

// Unordered product edge between nodes[a] and nodes[b], a < b. `edge` and
// `edge_prime` index the constituent edges of the left and right graph.
struct ProductEdge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t edge = 0;
  std::uint32_t edge_prime = 0;
  Symbol label = 0;

  friend auto operator<=>(const ProductEdge&, const ProductEdge&) = default;
};

// Nodes sorted by (u, u'); edges sorted by (a, b).
struct ProductGraph {
  std::vector<ProductNode> nodes;
  std::vector<ProductEdge> edges;
  std::size_t level = 0;
  std::size_t left_id = 0;
  std::size_t right_id = 0;

  std::optional<std::uint32_t> find_node(NodeId u, NodeId u_prime) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), std::pair{u, u_prime},
                               [](const ProductNode& n, const std::pair<NodeId, NodeId>& key) {
                                 return std::pair{n.u, n.u_prime} < key;
                               });
    if (it == nodes.end() || it->u != u || it->u_prime != u_prime) return std::nullopt;
    return static_cast<std::uint32_t>(it - nodes.begin());
  }

  friend bool operator==(const ProductGraph&, const ProductGraph&) = default;
};

inline constexpr std::size_t kUnlimitedEdges = std::numeric_limits<std::size_t>::max();

// V_P = {(u,u') : color(u) = color(u')}; E_P joins (u,u') and (v,v') when
// (u,v) in E, (u',v') in E' and both edges carry the same label. Nodes are
// only materialized for colors present in both graphs.
inline ProductGraph build_product(const Graph& g, const Graph& g_prime, const ColorAssignment& a,
                                  const ColorAssignment& a_prime, std::size_t level,
                                  std::size_t edge_budget = kUnlimitedEdges) {
  const auto colors = a.at(level);
  const auto colors_prime = a_prime.at(level);
  ProductGraph pg;
  pg.level = level;
  pg.left_id = g.graph_id();
  pg.right_id = g_prime.graph_id();

  std::vector<NodeId> by_color(g_prime.node_count());
  std::iota(by_color.begin(), by_color.end(), NodeId{0});
  std::sort(by_color.begin(), by_color.end(), [&](NodeId x, NodeId y) {
    return colors_prime[x] != colors_prime[y] ? colors_prime[x] < colors_prime[y] : x < y;
  });
  auto color_range = [&](Color c) {
    auto lo = std::lower_bound(by_color.begin(), by_color.end(), c, [&](NodeId x, Color k) { return colors_prime[x] < k; });
    auto hi = std::upper_bound(lo, by_color.end(), c, [&](Color k, NodeId x) { return k < colors_prime[x]; });
    return std::pair{lo, hi};
  };

  // first_node[u]: index of the first product node whose left constituent is u.
  std::vector<std::uint32_t> first_node(g.node_count() + 1, 0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    first_node[u] = static_cast<std::uint32_t>(pg.nodes.size());
    auto [lo, hi] = color_range(colors[u]);
    for (auto it = lo; it != hi; ++it) pg.nodes.push_back({u, *it, colors[u]});
  }
  first_node[g.node_count()] = static_cast<std::uint32_t>(pg.nodes.size());

  auto index_of = [&](NodeId v, NodeId v_prime) -> std::uint32_t {
    auto begin = pg.nodes.begin() + first_node[v];
    auto end = pg.nodes.begin() + first_node[v + 1];
    auto it = std::lower_bound(begin, end, v_prime, [](const ProductNode& n, NodeId x) { return n.u_prime < x; });
    return static_cast<std::uint32_t>(it - pg.nodes.begin());
  };

  for (std::uint32_t ai = 0; ai < pg.nodes.size(); ++ai) {
    const auto [u, u_prime, color] = pg.nodes[ai];
    for (const auto& nb : g.neighbors(u)) {
      if (nb.node < u) continue;  // each unordered product edge is found from its smaller left endpoint
      for (const auto& nb_prime : g_prime.neighbors(u_prime)) {
        if (colors[nb.node] != colors_prime[nb_prime.node]) continue;
        if (g.edge_label(nb.edge) != g_prime.edge_label(nb_prime.edge)) continue;
        const auto bi = index_of(nb.node, nb_prime.node);
        pg.edges.push_back({ai, bi, nb.edge, nb_prime.edge, g.edge_label(nb.edge)});
        if (pg.edges.size() > edge_budget) {
          throw ComputeError(fmt::format(
              "product graph of graphs {} and {} exceeds the edge budget of {} edges; "
              "use the global scheme or raise the budget",
              pg.left_id, pg.right_id, edge_budget));
        }
      }
    }
  }
  std::sort(pg.edges.begin(), pg.edges.end());
  return pg;
}

enum class Side { left, right };

// Edge indices of the chosen graph that project from at least one product edge.
inline std::vector<std::uint32_t> np_edges(const ProductGraph& pg, Side side) {
  std::vector<std::uint32_t> out;
  out.reserve(pg.edges.size());
  for (const auto& e : pg.edges) out.push_back(side == Side::left ? e.edge : e.edge_prime);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct ConvolutionPair {
  EdgeAddress address;
  std::uint32_t edge = 0;        // left graph edge index
  std::uint32_t edge_prime = 0;  // right graph edge index

  friend auto operator<=>(const ConvolutionPair&, const ConvolutionPair&) = default;
};

// One pair per unordered (e, e') combination with matching address, sorted by
// (address, e, e'). When all four endpoint colors agree the two product edges
// ((u,u'),(v,v')) and ((u,v'),(v,u')) collapse into one pair.
inline std::vector<ConvolutionPair> convolution_pairs(const ProductGraph& pg) {
  std::vector<ConvolutionPair> out;
  out.reserve(pg.edges.size());
  for (const auto& e : pg.edges) {
    const auto [lo, hi] = std::minmax(pg.nodes[e.a].color, pg.nodes[e.b].color);
    out.push_back({{static_cast<std::uint32_t>(pg.level), lo, e.label, hi}, e.edge, e.edge_prime});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Moves a product graph one level up: drops every node whose constituents
// disagree at level+1 together with its incident edges.
inline ProductGraph prune_product(const ProductGraph& pg, const ColorAssignment& a, const ColorAssignment& a_prime) {
  const auto next = pg.level + 1;
  const auto colors = a.at(next);
  const auto colors_prime = a_prime.at(next);
  ProductGraph out;
  out.level = next;
  out.left_id = pg.left_id;
  out.right_id = pg.right_id;
  constexpr auto kDropped = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(pg.nodes.size(), kDropped);
  for (std::uint32_t i = 0; i < pg.nodes.size(); ++i) {
    const auto& n = pg.nodes[i];
    if (colors[n.u] != colors_prime[n.u_prime]) continue;
    remap[i] = static_cast<std::uint32_t>(out.nodes.size());
    out.nodes.push_back({n.u, n.u_prime, colors[n.u]});
  }
  for (const auto& e : pg.edges) {
    if (remap[e.a] == kDropped || remap[e.b] == kDropped) continue;
    out.edges.push_back({remap[e.a], remap[e.b], e.edge, e.edge_prime, e.label});
  }
  return out;
}

}  // namespace npkernel
