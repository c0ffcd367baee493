#pragma once

// Graphviz DOT renderings of WL colorings, product graphs and the
// neighborhood preserving / non-preserving edge partition.

#include <algorithm>
#include <span>
#include <string>

#include <fmt/format.h>

#include "npkernel/graph.hpp"
#include "npkernel/product_graph.hpp"
#include "npkernel/wl.hpp"

namespace npkernel {

inline std::string coloring_dot(const Graph& g, const ColorAssignment& a, std::size_t level, const std::string& name) {
  std::string out = fmt::format("graph {} {{\n  node [shape=circle];\n", name);
  const auto colors = a.at(level);
  for (NodeId v = 0; v < g.node_count(); ++v) out += fmt::format("  {} [label=\"{}:c{}\"];\n", v, v, colors[v]);
  for (const auto& e : g.edges()) out += fmt::format("  {} -- {};\n", e.u, e.v);
  return out + "}\n";
}

inline std::string product_dot(const ProductGraph& pg, const std::string& name) {
  std::string out = fmt::format("graph {} {{\n  node [shape=ellipse];\n", name);
  for (std::size_t i = 0; i < pg.nodes.size(); ++i) {
    const auto& n = pg.nodes[i];
    out += fmt::format("  p{} [label=\"({},{}):c{}\"];\n", i, n.u, n.u_prime, n.color);
  }
  for (const auto& e : pg.edges) out += fmt::format("  p{} -- p{};\n", e.a, e.b);
  return out + "}\n";
}

// Neighborhood preserving edges bold, all other edges dashed.
inline std::string np_partition_dot(const Graph& g, std::span<const std::uint32_t> np_edge_indices, const std::string& name) {
  std::string out = fmt::format("graph {} {{\n  node [shape=circle];\n", name);
  for (NodeId v = 0; v < g.node_count(); ++v) out += fmt::format("  {};\n", v);
  for (std::uint32_t i = 0; i < g.edge_count(); ++i) {
    const bool np = std::binary_search(np_edge_indices.begin(), np_edge_indices.end(), i);
    out += fmt::format("  {} -- {} [style={}];\n", g.edge(i).u, g.edge(i).v, np ? "bold" : "dashed");
  }
  return out + "}\n";
}

}  // namespace npkernel
