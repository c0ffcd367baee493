#pragma once

// Hierarchy over WL refined edge addresses that induces the NPO base kernel,
// and the histogram-intersection evaluation of the resulting optimal
// assignment kernel.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "npkernel/error.hpp"
#include "npkernel/graph.hpp"
#include "npkernel/wl.hpp"

namespace npkernel {

using HistogramVector = std::vector<std::uint64_t>;

// Rooted forest: level-1 addresses are roots, each level-(i+1) address hangs
// below the level-i address of the same edge. Node ids (locations) follow
// ascending address order, hence all level-i nodes precede level-(i+1) nodes.
class Hierarchy {
public:
  struct Node {
    EdgeAddress address;
    std::optional<std::uint32_t> parent;
  };

  Hierarchy(std::span<const Graph> graphs, std::span<const ColorAssignment> assignments, std::size_t h) : depth_(h) {
    if (h < 1) throw ComputeError("hierarchy needs h >= 1");
    std::map<EdgeAddress, std::optional<EdgeAddress>> parent_of;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      const auto& g = graphs[gi];
      if (assignments[gi].depth() < h) throw ComputeError("colorings do not reach the hierarchy depth");
      for (std::uint32_t i = 0; i < g.edge_count(); ++i) {
        std::optional<EdgeAddress> parent;
        for (std::size_t level = 1; level <= h; ++level) {
          const auto address = edge_address(assignments[gi], level, g.edge(i), g.edge_label(i));
          auto [it, inserted] = parent_of.try_emplace(address, parent);
          if (!inserted && it->second != parent) {
            throw ComputeError(fmt::format("address at level {} has two distinct parents", level));
          }
          parent = address;
        }
      }
    }
    nodes_.reserve(parent_of.size());
    for (const auto& [address, parent] : parent_of) {
      index_.emplace(address, static_cast<std::uint32_t>(nodes_.size()));
      nodes_.push_back({address, std::nullopt});
    }
    for (auto& n : nodes_) {
      const auto& p = parent_of.at(n.address);
      if (p) n.parent = index_.at(*p);
    }
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t depth() const noexcept { return depth_; }
  const Node& node(std::uint32_t location) const { return nodes_.at(location); }
  std::span<const Node> nodes() const noexcept { return nodes_; }

  std::optional<std::uint32_t> find(const EdgeAddress& address) const {
    auto it = index_.find(address);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t nodes_at_level(std::size_t level) const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                  [&](const Node& n) { return n.address.level == level; }));
  }

  std::vector<std::uint32_t> children(std::uint32_t location) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].parent == location) out.push_back(i);
    }
    return out;
  }

private:
  std::size_t depth_ = 0;
  std::vector<Node> nodes_;
  std::map<EdgeAddress, std::uint32_t> index_;
};

inline Hierarchy build_hierarchy(const Dataset& ds, std::span<const ColorAssignment> assignments, std::size_t h) {
  return Hierarchy(std::span<const Graph>(ds.graphs), assignments, h);
}

// For every edge, start at its level-h address and walk to the root,
// incrementing every visited location.
inline HistogramVector histogram_vector(const Graph& g, const Hierarchy& hierarchy, const ColorAssignment& assignment,
                                        std::size_t h) {
  if (h < 1 || h > hierarchy.depth()) throw ComputeError(fmt::format("h={} outside hierarchy depth {}", h, hierarchy.depth()));
  HistogramVector out(hierarchy.size(), 0);
  for (std::uint32_t i = 0; i < g.edge_count(); ++i) {
    const auto leaf = hierarchy.find(edge_address(assignment, h, g.edge(i), g.edge_label(i)));
    if (!leaf) throw ComputeError(fmt::format("edge {} of graph {} has no node in the hierarchy", i, g.graph_id()));
    std::optional<std::uint32_t> n = leaf;
    for (std::size_t level = h; level >= 1; --level) {
      ++out[*n];
      n = hierarchy.node(*n).parent;
    }
  }
  return out;
}

inline std::uint64_t histogram_intersection(std::span<const std::uint64_t> v, std::span<const std::uint64_t> w) {
  if (v.size() != w.size()) throw ComputeError(fmt::format("histogram lengths differ: {} vs {}", v.size(), w.size()));
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += std::min(v[i], w[i]);
  return sum;
}

}  // namespace npkernel
