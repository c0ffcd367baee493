#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "npkernel/error.hpp"

namespace npkernel {

using Symbol = std::uint32_t;
using NodeId = std::uint32_t;

// Every edge of a graph without edge labels carries this symbol.
inline constexpr Symbol kDefaultEdgeLabel = 0;
inline constexpr std::string_view kDefaultEdgeLabelText = "<none>";

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Insertion-ordered bijection between raw label text and compact symbols.
// The integer order of symbols is the total order used on the label alphabet.
class SymbolTable {
public:
  Symbol intern(std::string_view text) {
    auto it = index_.find(std::string(text));
    if (it != index_.end()) return it->second;
    const auto sym = static_cast<Symbol>(texts_.size());
    texts_.emplace_back(text);
    index_.emplace(texts_.back(), sym);
    return sym;
  }

  std::optional<Symbol> find(std::string_view text) const {
    auto it = index_.find(std::string(text));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& text(Symbol s) const { return texts_.at(s); }
  std::size_t size() const noexcept { return texts_.size(); }
  const std::vector<std::string>& texts() const noexcept { return texts_; }

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) { return a.texts_ == b.texts_; }

  // Interns `texts` in numeric order when every entry is an integer, lexicographic order otherwise.
  void intern_sorted(std::vector<std::string> texts) {
    std::sort(texts.begin(), texts.end());
    texts.erase(std::unique(texts.begin(), texts.end()), texts.end());
    const bool numeric = std::all_of(texts.begin(), texts.end(), [](const std::string& t) {
      long long value = 0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
      return ec == std::errc{} && ptr == t.data() + t.size();
    });
    if (numeric) {
      std::sort(texts.begin(), texts.end(), [](const std::string& a, const std::string& b) {
        return std::stoll(a) < std::stoll(b);
      });
    }
    for (const auto& t : texts) intern(t);
  }

private:
  std::vector<std::string> texts_;
  std::unordered_map<std::string, Symbol> index_;
};

inline SymbolTable make_edge_symbol_table() {
  SymbolTable table;
  table.intern(kDefaultEdgeLabelText);
  return table;
}

struct Neighbor {
  NodeId node = 0;
  std::uint32_t edge = 0;  // index into Graph::edges()
};

// Raw constituents of a Graph. No invariant is enforced here; see validate_graph.
struct GraphParts {
  std::size_t node_count = 0;
  std::vector<Edge> edges;
  std::vector<Symbol> node_labels;
  std::vector<Symbol> edge_labels;                   // empty: every edge carries kDefaultEdgeLabel
  std::vector<std::vector<double>> node_attributes;  // empty: no node attributes
  std::vector<std::vector<double>> edge_attributes;  // empty: no edge attributes
  std::size_t graph_id = 0;

  friend bool operator==(const GraphParts&, const GraphParts&) = default;
};

// Undirected labeled graph with optional node/edge attributes. Immutable after
// construction; neighbor lists are sorted by neighbor index.
class Graph {
public:
  Graph() = default;

  explicit Graph(GraphParts parts) : parts_(std::move(parts)) {
    offsets_.assign(parts_.node_count + 1, 0);
    const auto n = parts_.node_count;
    for (const auto& e : parts_.edges) {
      if (e.u >= n || e.v >= n) continue;
      ++offsets_[e.u + 1];
      if (e.u != e.v) ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::uint32_t i = 0; i < parts_.edges.size(); ++i) {
      const auto& e = parts_.edges[i];
      if (e.u >= n || e.v >= n) continue;
      adjacency_[fill[e.u]++] = {e.v, i};
      if (e.u != e.v) adjacency_[fill[e.v]++] = {e.u, i};
    }
    for (std::size_t v = 0; v < n; ++v) {
      std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
                [](const Neighbor& a, const Neighbor& b) {
                  return a.node != b.node ? a.node < b.node : a.edge < b.edge;
                });
    }
  }

  std::size_t node_count() const noexcept { return parts_.node_count; }
  std::size_t edge_count() const noexcept { return parts_.edges.size(); }
  std::size_t graph_id() const noexcept { return parts_.graph_id; }

  std::span<const Edge> edges() const noexcept { return parts_.edges; }
  const Edge& edge(std::size_t i) const { return parts_.edges[i]; }

  Symbol node_label(NodeId v) const { return parts_.node_labels[v]; }
  std::span<const Symbol> node_labels() const noexcept { return parts_.node_labels; }

  bool has_edge_labels() const noexcept { return !parts_.edge_labels.empty(); }
  Symbol edge_label(std::size_t i) const {
    return parts_.edge_labels.empty() ? kDefaultEdgeLabel : parts_.edge_labels[i];
  }

  bool has_node_attributes() const noexcept { return !parts_.node_attributes.empty(); }
  std::span<const double> node_attributes(NodeId v) const {
    if (parts_.node_attributes.empty()) return {};
    return parts_.node_attributes[v];
  }
  std::size_t node_attribute_dim() const noexcept {
    return parts_.node_attributes.empty() ? 0 : parts_.node_attributes.front().size();
  }

  bool has_edge_attributes() const noexcept { return !parts_.edge_attributes.empty(); }
  std::span<const double> edge_attributes(std::size_t i) const {
    if (parts_.edge_attributes.empty()) return {};
    return parts_.edge_attributes[i];
  }
  std::size_t edge_attribute_dim() const noexcept {
    return parts_.edge_attributes.empty() ? 0 : parts_.edge_attributes.front().size();
  }

  std::span<const Neighbor> neighbors(NodeId v) const {
    return std::span<const Neighbor>(adjacency_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  // Index of the edge joining u and v, if any.
  std::optional<std::uint32_t> find_edge(NodeId u, NodeId v) const {
    if (u >= node_count() || v >= node_count()) return std::nullopt;
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v,
                               [](const Neighbor& n, NodeId x) { return n.node < x; });
    if (it == nb.end() || it->node != v) return std::nullopt;
    return it->edge;
  }

  const GraphParts& parts() const noexcept { return parts_; }

  friend bool operator==(const Graph& a, const Graph& b) { return a.parts_ == b.parts_; }

private:
  GraphParts parts_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
};

struct Dataset {
  std::string name;
  std::vector<Graph> graphs;
  std::optional<std::vector<int>> class_labels;
  std::optional<std::size_t> attribute_dim;
  SymbolTable node_symbols;
  SymbolTable edge_symbols = make_edge_symbol_table();

  std::size_t size() const noexcept { return graphs.size(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Returns one diagnostic per violated invariant; empty when the graph is valid.
inline std::vector<std::string> graph_diagnostics(const Graph& g) {
  std::vector<std::string> out;
  const auto& p = g.parts();
  const auto n = p.node_count;
  if (p.node_labels.size() != n) {
    out.push_back(fmt::format("graph {}: {} node labels for {} nodes", p.graph_id, p.node_labels.size(), n));
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const auto& e = p.edges[i];
    if (e.u >= n || e.v >= n) {
      out.push_back(fmt::format("graph {}: edge {} ({}, {}) has an endpoint out of range", p.graph_id, i, e.u, e.v));
      continue;
    }
    if (e.u == e.v) {
      out.push_back(fmt::format("graph {}: edge {} is a self-loop on node {}", p.graph_id, i, e.u));
      continue;
    }
    if (!seen.insert(std::minmax(e.u, e.v)).second) {
      out.push_back(fmt::format("graph {}: edge {} duplicates {{{}, {}}}", p.graph_id, i, e.u, e.v));
    }
  }
  if (!p.edge_labels.empty() && p.edge_labels.size() != p.edges.size()) {
    out.push_back(fmt::format("graph {}: {} edge labels for {} edges", p.graph_id, p.edge_labels.size(), p.edges.size()));
  }
  auto check_rows = [&](const std::vector<std::vector<double>>& rows, std::size_t expected, const char* what) {
    if (rows.empty()) return;
    if (rows.size() != expected) {
      out.push_back(fmt::format("graph {}: {} {} attribute rows for {} items", p.graph_id, rows.size(), what, expected));
    }
    const auto dim = rows.front().size();
    if (dim == 0) out.push_back(fmt::format("graph {}: {} attributes have dimension 0", p.graph_id, what));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != dim) {
        out.push_back(fmt::format("graph {}: {} attribute row {} has dimension {}, expected {}", p.graph_id, what, i,
                                  rows[i].size(), dim));
      }
      for (double x : rows[i]) {
        if (!std::isfinite(x)) {
          out.push_back(fmt::format("graph {}: {} attribute row {} has a non-finite entry", p.graph_id, what, i));
          break;
        }
      }
    }
  };
  check_rows(p.node_attributes, n, "node");
  check_rows(p.edge_attributes, p.edges.size(), "edge");
  return out;
}

// Throws ValidationError listing every violated Graph invariant.
inline void validate_graph(const Graph& g) {
  auto diags = graph_diagnostics(g);
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

inline void validate_dataset(const Dataset& ds) {
  std::vector<std::string> diags;
  for (const auto& g : ds.graphs) {
    auto d = graph_diagnostics(g);
    diags.insert(diags.end(), d.begin(), d.end());
    const auto dim = g.has_node_attributes() ? std::optional<std::size_t>(g.node_attribute_dim()) : std::nullopt;
    if (g.node_count() > 0 && dim != ds.attribute_dim) {
      diags.push_back(fmt::format("graph {}: node attribute dimension differs from the dataset's", g.graph_id()));
    }
  }
  if (ds.class_labels && ds.class_labels->size() != ds.graphs.size()) {
    diags.push_back(fmt::format("{} class labels for {} graphs", ds.class_labels->size(), ds.graphs.size()));
  }
  if (!diags.empty()) throw ValidationError(std::move(diags));
}

// Relabels nodes: node v of `g` becomes node perm[v]. Edges keep their order.
inline Graph permute_graph(const Graph& g, std::span<const NodeId> perm) {
  GraphParts p = g.parts();
  std::vector<Symbol> labels(p.node_count);
  std::vector<std::vector<double>> attrs(p.node_attributes.empty() ? 0 : p.node_count);
  for (std::size_t v = 0; v < p.node_count; ++v) {
    labels[perm[v]] = p.node_labels[v];
    if (!attrs.empty()) attrs[perm[v]] = p.node_attributes[v];
  }
  for (auto& e : p.edges) {
    e = {perm[e.u], perm[e.v]};
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  p.node_labels = std::move(labels);
  p.node_attributes = std::move(attrs);
  return Graph(std::move(p));
}

}  // namespace npkernel
