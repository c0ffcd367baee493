#pragma once

// Neighborhood preserving shortest path kernel: shortest-path extraction,
// path addresses, and the pair kernel over shared path addresses.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "npkernel/base_kernel.hpp"
#include "npkernel/config.hpp"
#include "npkernel/graph.hpp"
#include "npkernel/wl.hpp"

namespace npkernel {

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// Node sequence u_1..u_n of a shortest path, n >= 2.
struct CanonicalPath {
  std::vector<NodeId> nodes;

  std::size_t length() const noexcept { return nodes.size() - 1; }
  friend bool operator==(const CanonicalPath&, const CanonicalPath&) = default;
};

// Breadth-first distances from `source`.
inline std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source) {
  std::vector<std::uint32_t> dist(g.node_count(), kUnreachable);
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (const auto& nb : g.neighbors(x)) {
      if (dist[nb.node] == kUnreachable) {
        dist[nb.node] = dist[x] + 1;
        queue.push_back(nb.node);
      }
    }
  }
  return dist;
}

// Row-major n x n hop distances.
inline std::vector<std::uint32_t> all_pairs_distances(const Graph& g) {
  const auto n = g.node_count();
  std::vector<std::uint32_t> out(n * n);
  for (NodeId s = 0; s < n; ++s) {
    const auto d = bfs_distances(g, s);
    std::copy(d.begin(), d.end(), out.begin() + static_cast<std::ptrdiff_t>(s * n));
  }
  return out;
}

// One shortest path per unordered connected pair {s, t}, s < t, with length in
// [1, max_len] (max_len = 0: unlimited). Paths run from s to t; each node's
// predecessor is its smallest-index neighbor one hop closer to s.
inline std::vector<CanonicalPath> extract_paths(const Graph& g, std::size_t max_len = 0) {
  std::vector<CanonicalPath> out;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    const auto dist = bfs_distances(g, s);
    for (NodeId t = s + 1; t < g.node_count(); ++t) {
      if (dist[t] == kUnreachable || (max_len != 0 && dist[t] > max_len)) continue;
      CanonicalPath p;
      p.nodes.resize(dist[t] + 1);
      NodeId x = t;
      for (auto k = dist[t]; k > 0; --k) {
        p.nodes[k] = x;
        for (const auto& nb : g.neighbors(x)) {  // neighbors are sorted by index
          if (dist[nb.node] == k - 1) {
            x = nb.node;
            break;
          }
        }
      }
      p.nodes[0] = s;
      out.push_back(std::move(p));
    }
  }
  return out;
}

// Node colors interleaved with edge labels along the path, at one level.
struct PathAddress {
  std::uint32_t level = 0;
  std::vector<std::uint32_t> sequence;

  friend auto operator<=>(const PathAddress&, const PathAddress&) = default;
};

struct AddressedPath {
  PathAddress address;
  bool reversed = false;     // address reads the path from its last node
  bool palindromic = false;  // both directions give the same string
};

inline std::vector<std::uint32_t> path_string(const Graph& g, std::span<const Color> colors,
                                              std::span<const NodeId> nodes) {
  std::vector<std::uint32_t> s;
  s.reserve(2 * nodes.size() - 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) s.push_back(g.edge_label(*g.find_edge(nodes[i - 1], nodes[i])));
    s.push_back(colors[nodes[i]]);
  }
  return s;
}

// Address of the lexicographically smaller of the forward and reversed strings.
inline AddressedPath path_address(const Graph& g, const CanonicalPath& p, const ColorAssignment& assignment,
                                  std::size_t level) {
  const auto colors = assignment.at(level);
  auto forward = path_string(g, colors, p.nodes);
  std::vector<NodeId> rev(p.nodes.rbegin(), p.nodes.rend());
  auto backward = path_string(g, colors, rev);
  AddressedPath out;
  out.address.level = static_cast<std::uint32_t>(level);
  out.palindromic = forward == backward;
  out.reversed = backward < forward;
  out.address.sequence = out.reversed ? std::move(backward) : std::move(forward);
  return out;
}

// A shortest-path feature of one graph: the pair's address and its endpoints,
// `source` being the node the address is read from.
struct PathFeature {
  PathAddress address;
  NodeId source = 0;
  NodeId sink = 0;
  bool ambiguous = false;  // address is readable from either endpoint

  friend auto operator<=>(const PathFeature&, const PathFeature&) = default;
};

// Per-graph, per-level index of path features sorted by address.
//
// For every connected pair {s, t} the address is the lexicographically
// smallest string over all shortest s-t paths read in either direction, so the
// choice depends only on colors and labels, never on node numbering.
class PathIndex {
public:
  struct Bucket {
    std::size_t offset = 0;
    std::size_t size = 0;
  };

  PathIndex() = default;

  PathIndex(const Graph& g, const ColorAssignment& assignment, std::size_t level, std::size_t max_len,
            std::span<const std::uint32_t> distances)
      : level_(level) {
    const auto n = g.node_count();
    const auto colors = assignment.at(level);
    for (NodeId s = 0; s < n; ++s) {
      for (NodeId t = s + 1; t < n; ++t) {
        const auto d = distances[s * n + t];
        if (d == kUnreachable || (max_len != 0 && d > max_len)) continue;
        auto forward = min_string(g, colors, distances, s, t, d);
        auto backward = min_string(g, colors, distances, t, s, d);
        PathFeature f;
        f.address.level = static_cast<std::uint32_t>(level);
        if (backward < forward) {
          f.source = t;
          f.sink = s;
          f.address.sequence = std::move(backward);
        } else {
          f.source = s;
          f.sink = t;
          f.ambiguous = forward == backward;
          f.address.sequence = std::move(forward);
        }
        features_.push_back(std::move(f));
      }
    }
    std::sort(features_.begin(), features_.end());
    for (std::size_t i = 0; i < features_.size(); ++i) {
      if (i == 0 || features_[i].address != features_[i - 1].address) buckets_.push_back({i, 0});
      ++buckets_.back().size;
    }
  }

  std::size_t level() const noexcept { return level_; }
  std::span<const Bucket> buckets() const noexcept { return buckets_; }
  const PathAddress& address(const Bucket& b) const { return features_[b.offset].address; }
  std::span<const PathFeature> features(const Bucket& b) const {
    return std::span<const PathFeature>(features_).subspan(b.offset, b.size);
  }
  std::span<const PathFeature> features() const noexcept { return features_; }

private:
  // Greedy layer-by-layer minimum over the shortest-path DAG from s to t.
  static std::vector<std::uint32_t> min_string(const Graph& g, std::span<const Color> colors,
                                               std::span<const std::uint32_t> dist, NodeId s, NodeId t,
                                               std::uint32_t length) {
    const auto n = g.node_count();
    std::vector<std::uint32_t> out{colors[s]};
    std::vector<NodeId> frontier{s}, next;
    for (std::uint32_t k = 1; k <= length; ++k) {
      std::pair<Symbol, Color> best{std::numeric_limits<Symbol>::max(), std::numeric_limits<Color>::max()};
      next.clear();
      for (auto x : frontier) {
        for (const auto& nb : g.neighbors(x)) {
          const auto y = nb.node;
          if (dist[s * n + y] != k || dist[y * n + t] != length - k) continue;
          const std::pair<Symbol, Color> key{g.edge_label(nb.edge), colors[y]};
          if (key < best) {
            best = key;
            next.assign(1, y);
          } else if (key == best) {
            next.push_back(y);
          }
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      frontier.swap(next);
      out.push_back(best.first);
      out.push_back(best.second);
    }
    return out;
  }

  std::size_t level_ = 0;
  std::vector<PathFeature> features_;
  std::vector<Bucket> buckets_;
};

// Sum over shared addresses of kV(source, source') * kV(sink, sink'); the two
// endpoint pairings are averaged when either feature is ambiguous.
inline double nps_level(const Graph& g, const Graph& g_prime, const PathIndex& left, const PathIndex& right,
                        const AttributeKernel& node_kernel, bool normalize) {
  double total = 0.0;
  auto a = left.buckets();
  auto b = right.buckets();
  std::size_t i = 0, j = 0;
  auto kv = [&](NodeId x, NodeId y) { return node_kernel(g.node_attributes(x), g_prime.node_attributes(y)); };
  while (i < a.size() && j < b.size()) {
    const auto& addr_a = left.address(a[i]);
    const auto& addr_b = right.address(b[j]);
    if (addr_a < addr_b) {
      ++i;
    } else if (addr_b < addr_a) {
      ++j;
    } else {
      double sum = 0.0;
      for (const auto& p : left.features(a[i])) {
        for (const auto& q : right.features(b[j])) {
          if (node_kernel.is_unit()) {
            sum += 1.0;
          } else if (p.ambiguous || q.ambiguous) {
            sum += 0.5 * (kv(p.source, q.source) * kv(p.sink, q.sink) + kv(p.source, q.sink) * kv(p.sink, q.source));
          } else {
            sum += kv(p.source, q.source) * kv(p.sink, q.sink);
          }
        }
      }
      if (normalize) sum /= static_cast<double>(a[i].size) * static_cast<double>(b[j].size);
      total += sum;
      ++i;
      ++j;
    }
  }
  return total;
}

inline AttributeKernel node_attribute_kernel(const Graph& g, const Graph& g_prime, const BaseKernelSpec& base) {
  const bool attrs = g.has_node_attributes() && g_prime.has_node_attributes();
  if (attrs && g.node_attribute_dim() != g_prime.node_attribute_dim()) {
    throw ComputeError("node attribute dimensions differ between graphs");
  }
  return AttributeKernel(base, attrs ? g.node_attribute_dim() : 0);
}

inline double nps_pair(const Graph& g, const Graph& g_prime, const ColorAssignment& a, const ColorAssignment& a_prime,
                       const KernelConfig& config) {
  if (a.depth() < config.h || a_prime.depth() < config.h) throw ComputeError("colorings do not reach the requested level");
  const auto kernel = node_attribute_kernel(g, g_prime, config.base);
  const auto dist = all_pairs_distances(g);
  const auto dist_prime = all_pairs_distances(g_prime);
  double total = 0.0;
  for (std::size_t level = config.first_level(); level <= config.h; ++level) {
    total += nps_level(g, g_prime, PathIndex(g, a, level, config.max_path_len, dist),
                       PathIndex(g_prime, a_prime, level, config.max_path_len, dist_prime), kernel,
                       config.nps_normalize);
  }
  return total;
}

}  // namespace npkernel
