#pragma once

// Neighborhood preserving edge (NPE), optimal edge assignment (NPO) and their
// alpha-weighted combination (NP), evaluated from per-level feature indexes.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "npkernel/base_kernel.hpp"
#include "npkernel/config.hpp"
#include "npkernel/graph.hpp"
#include "npkernel/wl.hpp"

namespace npkernel {

// k_edge(e, e') = kV(u, u') * k(e, e') * kV(v, v') for a pair of graphs, with
// both edges oriented c_min-endpoint first. For palindromic addresses both
// endpoint pairings are admissible and their mean is used.
class EdgeKernel {
public:
  EdgeKernel(const Graph& left, const Graph& right, const BaseKernelSpec& spec)
      : left_(&left),
        right_(&right),
        node_(spec, left.has_node_attributes() && right.has_node_attributes() ? left.node_attribute_dim() : 0),
        edge_(spec, left.has_edge_attributes() && right.has_edge_attributes() ? left.edge_attribute_dim() : 0) {
    if (!node_.is_unit() && left.node_attribute_dim() != right.node_attribute_dim()) {
      throw ComputeError("node attribute dimensions differ between graphs");
    }
    if (!edge_.is_unit() && left.edge_attribute_dim() != right.edge_attribute_dim()) {
      throw ComputeError("edge attribute dimensions differ between graphs");
    }
  }

  bool is_unit() const noexcept { return node_.is_unit() && edge_.is_unit(); }

  double node(NodeId u, NodeId u_prime) const {
    return node_(left_->node_attributes(u), right_->node_attributes(u_prime));
  }

  double operator()(const OrientedEdge& e, const OrientedEdge& e_prime, bool palindromic) const {
    if (is_unit()) return 1.0;
    const double k = edge_(left_->edge_attributes(e.edge), right_->edge_attributes(e_prime.edge));
    if (!palindromic) return node(e.first, e_prime.first) * k * node(e.second, e_prime.second);
    const double straight = node(e.first, e_prime.first) * node(e.second, e_prime.second);
    const double crossed = node(e.first, e_prime.second) * node(e.second, e_prime.first);
    return 0.5 * (straight + crossed) * k;
  }

private:
  const Graph* left_;
  const Graph* right_;
  AttributeKernel node_;
  AttributeKernel edge_;
};

// Per-level contributions of one graph pair.
struct LevelTerms {
  double npe = 0.0;
  std::uint64_t npo = 0;
  std::size_t shared = 0;  // |Lambda|: addresses present in both graphs
};

// Iterates shared addresses in ascending order. Within an address, pairs are
// visited in bucket order of both sides, so every computation route that
// enumerates the same pairs in the same order produces identical sums.
inline LevelTerms level_terms(const FeatureIndex& left, const FeatureIndex& right, const EdgeKernel& kernel,
                              bool with_npe = true) {
  LevelTerms t;
  auto a = left.buckets();
  auto b = right.buckets();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].address < b[j].address) {
      ++i;
    } else if (b[j].address < a[i].address) {
      ++j;
    } else {
      ++t.shared;
      t.npo += std::min(a[i].size, b[j].size);
      if (with_npe) {
        const bool pal = a[i].address.palindromic();
        double kv = 0.0;
        for (const auto& e : left.edges(a[i])) {
          for (const auto& ep : right.edges(b[j])) kv += kernel(e, ep, pal);
        }
        t.npe += kv / (static_cast<double>(a[i].size) * static_cast<double>(b[j].size));
      }
      ++i;
      ++j;
    }
  }
  return t;
}

// Sum of the kernel over levels [first_level, h] from precomputed indexes;
// indexes[level] must be valid for every level in that range.
struct PairTotals {
  double npe = 0.0;
  std::uint64_t npo = 0;
};

inline double combine(const KernelConfig& config, const PairTotals& t) {
  switch (config.kernel) {
    case KernelType::npe: return t.npe;
    case KernelType::npo: return static_cast<double>(t.npo);
    case KernelType::np: return config.alpha * t.npe + (1.0 - config.alpha) * static_cast<double>(t.npo);
    case KernelType::nps: break;
  }
  throw ComputeError("combine() does not handle NPS");
}

namespace np_detail {

inline PairTotals totals(const Graph& g, const Graph& g_prime, const ColorAssignment& a, const ColorAssignment& a_prime,
                         std::size_t first_level, std::size_t h, const BaseKernelSpec& base, bool with_npe) {
  if (a.depth() < h || a_prime.depth() < h) throw ComputeError("colorings do not reach the requested level");
  EdgeKernel kernel(g, g_prime, base);
  PairTotals out;
  for (std::size_t level = first_level; level <= h; ++level) {
    const auto t = level_terms(FeatureIndex(g, a, level), FeatureIndex(g_prime, a_prime, level), kernel, with_npe);
    out.npe += t.npe;
    out.npo += t.npo;
  }
  return out;
}

}  // namespace np_detail

inline double npe_pair(const Graph& g, const Graph& g_prime, const ColorAssignment& a, const ColorAssignment& a_prime,
                       const KernelConfig& config) {
  return np_detail::totals(g, g_prime, a, a_prime, config.first_level(), config.h, config.base, true).npe;
}

inline std::uint64_t npo_pair(const Graph& g, const Graph& g_prime, const ColorAssignment& a,
                              const ColorAssignment& a_prime, std::size_t h, std::size_t first_level = 1) {
  return np_detail::totals(g, g_prime, a, a_prime, first_level, h, BaseKernelSpec{BaseKernelKind::unit, {}}, false).npo;
}

inline double np_pair(const Graph& g, const Graph& g_prime, const ColorAssignment& a, const ColorAssignment& a_prime,
                      const KernelConfig& config) {
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) throw ComputeError("alpha must lie in [0, 1]");
  const auto t = np_detail::totals(g, g_prime, a, a_prime, config.first_level(), config.h, config.base, true);
  return config.alpha * t.npe + (1.0 - config.alpha) * static_cast<double>(t.npo);
}

}  // namespace npkernel
