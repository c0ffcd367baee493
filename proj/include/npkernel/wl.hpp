#pragma once

// One-dimensional Weisfeiler-Lehman color refinement over a whole dataset with
// an injective shared dictionary, plus WL refined edge addresses and the
// per-graph feature index that buckets edges by address.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

#include "npkernel/graph.hpp"
#include "npkernel/parallel.hpp"

namespace npkernel {

using Color = std::uint32_t;

// Injective map from color signatures to compact color ids, shared by all
// graphs of a dataset. Signatures carry their level, so colors of different
// levels never coincide.
class ColorDictionary {
public:
  Color color_of(const std::vector<std::uint32_t>& signature) {
    auto [it, inserted] = map_.try_emplace(signature, static_cast<Color>(map_.size()));
    return it->second;
  }

  std::size_t size() const noexcept { return map_.size(); }

private:
  struct SignatureHash {
    std::size_t operator()(const std::vector<std::uint32_t>& s) const noexcept {
      std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ s.size();
      for (auto x : s) {
        h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_map<std::vector<std::uint32_t>, Color, SignatureHash> map_;
};

// levels[l][v]: color of node v after l refinement rounds (level 0 = original labels).
struct ColorAssignment {
  std::vector<std::vector<Color>> levels;

  std::span<const Color> at(std::size_t level) const { return levels.at(level); }
  std::size_t depth() const noexcept { return levels.empty() ? 0 : levels.size() - 1; }
};

namespace wl_detail {

// Registers the distinct signatures of one level in ascending order, so color
// ids follow signature order and do not depend on node or graph numbering.
inline void assign_sorted(std::vector<std::vector<std::vector<std::uint32_t>>>& signatures, ColorDictionary& dict,
                          std::vector<ColorAssignment>& out) {
  std::vector<const std::vector<std::uint32_t>*> distinct;
  for (const auto& per_graph : signatures) {
    for (const auto& s : per_graph) distinct.push_back(&s);
  }
  std::sort(distinct.begin(), distinct.end(), [](auto* x, auto* y) { return *x < *y; });
  distinct.erase(std::unique(distinct.begin(), distinct.end(), [](auto* x, auto* y) { return *x == *y; }),
                 distinct.end());
  for (const auto* s : distinct) dict.color_of(*s);
  for (std::size_t gi = 0; gi < signatures.size(); ++gi) {
    auto& colors = out[gi].levels.emplace_back(signatures[gi].size());
    for (std::size_t v = 0; v < colors.size(); ++v) colors[v] = dict.color_of(signatures[gi][v]);
  }
}

}  // namespace wl_detail

// Refines every graph through `h` rounds. The dictionary is shared across all
// graphs so identical neighborhoods in different graphs receive identical colors.
// Within a level, colors are ordered by signature: level 0 by label, level l by
// (own color, sorted neighbor colors) at level l-1.
inline std::vector<ColorAssignment> refine(std::span<const Graph> graphs, std::size_t h, ColorDictionary& dict,
                                           std::size_t workers = 1) {
  std::vector<ColorAssignment> out(graphs.size());
  std::vector<std::vector<std::vector<std::uint32_t>>> signatures(graphs.size());
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const auto& g = graphs[gi];
    signatures[gi].resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) signatures[gi][v] = {0u, g.node_label(v)};
  }
  wl_detail::assign_sorted(signatures, dict, out);
  for (std::size_t level = 1; level <= h; ++level) {
    parallel_for(graphs.size(), workers, [&](std::size_t gi) {
      const auto& g = graphs[gi];
      const auto& prev = out[gi].levels[level - 1];
      auto& sigs = signatures[gi];
      for (NodeId v = 0; v < g.node_count(); ++v) {
        auto& s = sigs[v];
        s.clear();
        s.reserve(g.degree(v) + 2);
        s.push_back(static_cast<std::uint32_t>(level));
        s.push_back(prev[v]);
        for (const auto& nb : g.neighbors(v)) s.push_back(prev[nb.node]);
        std::sort(s.begin() + 2, s.end());
      }
    });
    wl_detail::assign_sorted(signatures, dict, out);
  }
  return out;
}

inline std::vector<ColorAssignment> refine(const Dataset& ds, std::size_t h, ColorDictionary& dict,
                                           std::size_t workers = 1) {
  return refine(std::span<const Graph>(ds.graphs), h, dict, workers);
}

// WL refined edge address: endpoint colors in ascending order around the edge label.
struct EdgeAddress {
  std::uint32_t level = 0;
  Color c_min = 0;
  Symbol label = 0;
  Color c_max = 0;

  bool palindromic() const noexcept { return c_min == c_max; }
  friend auto operator<=>(const EdgeAddress&, const EdgeAddress&) = default;
};

inline EdgeAddress edge_address(const ColorAssignment& assignment, std::size_t level, Edge edge, Symbol label) {
  const auto& colors = assignment.levels.at(level);
  const auto [lo, hi] = std::minmax(colors[edge.u], colors[edge.v]);
  return {static_cast<std::uint32_t>(level), lo, label, hi};
}

struct OrientedEdge {
  NodeId first = 0;   // endpoint carrying the address's c_min
  NodeId second = 0;
  std::uint32_t edge = 0;

  friend bool operator==(const OrientedEdge&, const OrientedEdge&) = default;
};

// Orients an edge so its first endpoint carries the smaller color; on equal
// colors the smaller node index comes first.
inline OrientedEdge orient_edge(std::span<const Color> colors, Edge e, std::uint32_t index) {
  const bool swap = colors[e.v] < colors[e.u] || (colors[e.v] == colors[e.u] && e.v < e.u);
  return swap ? OrientedEdge{e.v, e.u, index} : OrientedEdge{e.u, e.v, index};
}

// Edges of one graph at one level, bucketed by address in ascending address order.
class FeatureIndex {
public:
  struct Bucket {
    EdgeAddress address;
    std::uint32_t offset = 0;
    std::uint32_t size = 0;
  };
  struct Slot {
    std::uint32_t bucket = 0;
    std::uint32_t position = 0;
  };

  FeatureIndex() = default;

  FeatureIndex(const Graph& g, const ColorAssignment& assignment, std::size_t level) : level_(level) {
    const auto colors = assignment.at(level);
    std::vector<std::pair<EdgeAddress, std::uint32_t>> keyed;
    keyed.reserve(g.edge_count());
    for (std::uint32_t i = 0; i < g.edge_count(); ++i) {
      keyed.emplace_back(edge_address(assignment, level, g.edge(i), g.edge_label(i)), i);
    }
    std::sort(keyed.begin(), keyed.end());
    edges_.reserve(keyed.size());
    slots_.resize(keyed.size());
    for (std::size_t k = 0; k < keyed.size(); ++k) {
      const auto& [address, index] = keyed[k];
      if (buckets_.empty() || buckets_.back().address != address) {
        buckets_.push_back({address, static_cast<std::uint32_t>(k), 0});
      }
      auto& b = buckets_.back();
      slots_[index] = {static_cast<std::uint32_t>(buckets_.size() - 1), b.size};
      ++b.size;
      edges_.push_back(orient_edge(colors, g.edge(index), index));
    }
  }

  std::size_t level() const noexcept { return level_; }
  std::span<const Bucket> buckets() const noexcept { return buckets_; }
  std::span<const OrientedEdge> edges(const Bucket& b) const {
    return std::span<const OrientedEdge>(edges_).subspan(b.offset, b.size);
  }
  // Bucket and position of edge `index` of the source graph.
  Slot slot(std::uint32_t index) const { return slots_[index]; }

  const Bucket* find(const EdgeAddress& address) const {
    auto it = std::lower_bound(buckets_.begin(), buckets_.end(), address,
                               [](const Bucket& b, const EdgeAddress& a) { return b.address < a; });
    return it != buckets_.end() && it->address == address ? &*it : nullptr;
  }

  std::size_t edge_count() const noexcept { return edges_.size(); }

private:
  std::size_t level_ = 0;
  std::vector<Bucket> buckets_;
  std::vector<OrientedEdge> edges_;
  std::vector<Slot> slots_;
};

inline std::vector<FeatureIndex> build_feature_index(std::span<const Graph> graphs,
                                                     std::span<const ColorAssignment> assignments, std::size_t level) {
  std::vector<FeatureIndex> out;
  out.reserve(graphs.size());
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) out.emplace_back(graphs[gi], assignments[gi], level);
  return out;
}

inline std::vector<FeatureIndex> build_feature_index(const Dataset& ds, std::span<const ColorAssignment> assignments,
                                                     std::size_t level) {
  return build_feature_index(std::span<const Graph>(ds.graphs), assignments, level);
}

// `graph_id level node color` rows.
inline std::string format_colorings(const Dataset& ds, std::span<const ColorAssignment> assignments) {
  std::string out;
  for (std::size_t gi = 0; gi < assignments.size(); ++gi) {
    const auto& a = assignments[gi];
    for (std::size_t level = 0; level < a.levels.size(); ++level) {
      for (std::size_t v = 0; v < a.levels[level].size(); ++v) {
        out += fmt::format("{} {} {} {}\n", ds.graphs[gi].graph_id(), level, v, a.levels[level][v]);
      }
    }
  }
  return out;
}

}  // namespace npkernel
