#pragma once

// Brute-force reference implementations of the NPE, NPO and NPS kernels.
// Nothing here touches the production refinement, feature index or product
// graph code: colors are full uncompressed signature strings and every delta
// of the kernel definitions is evaluated explicitly over E x E' (or P x P').

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "npkernel/base_kernel.hpp"
#include "npkernel/error.hpp"
#include "npkernel/graph.hpp"

namespace npkernel::oracle {

// colors[level][node], full signature strings.
using StringColoring = std::vector<std::vector<std::string>>;

inline StringColoring naive_refine(const Graph& g, std::size_t h) {
  StringColoring out(h + 1, std::vector<std::string>(g.node_count()));
  for (NodeId v = 0; v < g.node_count(); ++v) out[0][v] = "L" + std::to_string(g.node_label(v));
  for (std::size_t level = 1; level <= h; ++level) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
      std::vector<std::string> nbrs;
      for (const auto& e : g.edges()) {
        if (e.u == v) nbrs.push_back(out[level - 1][e.v]);
        if (e.v == v) nbrs.push_back(out[level - 1][e.u]);
      }
      std::sort(nbrs.begin(), nbrs.end());
      std::string s = out[level - 1][v] + "(";
      for (std::size_t i = 0; i < nbrs.size(); ++i) s += (i ? "," : "") + nbrs[i];
      out[level][v] = s + ")";
    }
  }
  return out;
}

// Color ranks per graph, level and node under the ordering rule of the
// production refiner: level 0 ranks labels, level l ranks the tuple
// (own rank, sorted neighbor ranks) of level l-1, all graphs pooled.
inline std::vector<std::vector<std::vector<std::uint32_t>>> signature_ranks(const std::vector<const Graph*>& graphs,
                                                                            std::size_t h) {
  std::vector<std::vector<std::vector<std::uint32_t>>> out(graphs.size(), std::vector<std::vector<std::uint32_t>>(h + 1));
  for (std::size_t level = 0; level <= h; ++level) {
    std::vector<std::vector<std::vector<std::uint32_t>>> keys(graphs.size());
    std::set<std::vector<std::uint32_t>> distinct;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      const auto& g = *graphs[gi];
      for (NodeId v = 0; v < g.node_count(); ++v) {
        std::vector<std::uint32_t> key;
        if (level == 0) {
          key.push_back(g.node_label(v));
        } else {
          const auto& prev = out[gi][level - 1];
          std::vector<std::uint32_t> nbrs;
          for (const auto& e : g.edges()) {
            if (e.u == v) nbrs.push_back(prev[e.v]);
            if (e.v == v) nbrs.push_back(prev[e.u]);
          }
          std::sort(nbrs.begin(), nbrs.end());
          key.push_back(prev[v]);
          key.insert(key.end(), nbrs.begin(), nbrs.end());
        }
        distinct.insert(key);
        keys[gi].push_back(std::move(key));
      }
    }
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      for (const auto& key : keys[gi]) {
        out[gi][level].push_back(static_cast<std::uint32_t>(std::distance(distinct.begin(), distinct.find(key))));
      }
    }
  }
  return out;
}

inline double base_value(const BaseKernelSpec& spec, const std::vector<double>& x, const std::vector<double>& y) {
  if (spec.kind == BaseKernelKind::unit || x.empty() || y.empty()) return 1.0;
  if (spec.kind == BaseKernelKind::linear) {
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
    return dot;
  }
  const double beta = spec.beta.value_or(1.0 / static_cast<double>(x.size()));
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sq += (x[i] - y[i]) * (x[i] - y[i]);
  return std::exp(-beta * sq);
}

inline std::vector<double> node_attrs(const Graph& g, NodeId v) {
  auto s = g.node_attributes(v);
  return {s.begin(), s.end()};
}

inline std::vector<double> edge_attrs(const Graph& g, std::size_t i) {
  auto s = g.edge_attributes(i);
  return {s.begin(), s.end()};
}

inline constexpr std::size_t kMaxEdges = 200;
inline constexpr std::size_t kMaxPathNodes = 12;

// Sum over levels of sum_{e in E, e' in E'} of the explicit delta product
// times the endpoint kernels, each term weighted by 1/(|E_eps| |E'_eps|) with
// both counts recomputed by scanning the edge lists.
inline double brute_npe(const Graph& g, const Graph& gp, std::size_t h, const BaseKernelSpec& base,
                        std::size_t first_level = 1) {
  if (g.edge_count() > kMaxEdges || gp.edge_count() > kMaxEdges) throw ComputeError("oracle size guard exceeded");
  const auto cg = naive_refine(g, h);
  const auto cp = naive_refine(gp, h);
  auto kv = [&](NodeId x, NodeId y) { return base_value(base, node_attrs(g, x), node_attrs(gp, y)); };
  double total = 0.0;
  for (std::size_t level = first_level; level <= h; ++level) {
    const auto& c = cg[level];
    const auto& cq = cp[level];
    // Same address: equal edge label and equal endpoint colors in one of the two pairings.
    auto same_address = [](const std::string& a1, Symbol l1, const std::string& b1, const std::string& a2, Symbol l2,
                           const std::string& b2) {
      return l1 == l2 && ((a1 == a2 && b1 == b2) || (a1 == b2 && b1 == a2));
    };
    double level_sum = 0.0;
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      const auto [u, v] = g.edge(i);
      const auto lab = g.edge_label(i);
      std::size_t count = 0;
      for (std::size_t k = 0; k < g.edge_count(); ++k) {
        if (same_address(c[u], lab, c[v], c[g.edge(k).u], g.edge_label(k), c[g.edge(k).v])) ++count;
      }
      for (std::size_t j = 0; j < gp.edge_count(); ++j) {
        const auto [up, vp] = gp.edge(j);
        if (g.edge_label(i) != gp.edge_label(j)) continue;
        const bool straight = c[u] == cq[up] && c[v] == cq[vp];
        const bool crossed = c[u] == cq[vp] && c[v] == cq[up];
        if (!straight && !crossed) continue;
        std::size_t count_prime = 0;
        for (std::size_t k = 0; k < gp.edge_count(); ++k) {
          if (same_address(cq[up], gp.edge_label(j), cq[vp], cq[gp.edge(k).u], gp.edge_label(k), cq[gp.edge(k).v])) {
            ++count_prime;
          }
        }
        const double k_e = base_value(base, edge_attrs(g, i), edge_attrs(gp, j));
        double nodes = 0.0;
        if (straight && crossed) {
          nodes = 0.5 * (kv(u, up) * kv(v, vp) + kv(u, vp) * kv(v, up));
        } else if (straight) {
          nodes = kv(u, up) * kv(v, vp);
        } else {
          nodes = kv(u, vp) * kv(v, up);
        }
        level_sum += nodes * k_e / (static_cast<double>(count) * static_cast<double>(count_prime));
      }
    }
    total += level_sum;
  }
  return total;
}

// Sum over levels of sum over shared addresses of min(count, count').
inline std::uint64_t brute_npo(const Graph& g, const Graph& gp, std::size_t h, std::size_t first_level = 1) {
  if (g.edge_count() > kMaxEdges || gp.edge_count() > kMaxEdges) throw ComputeError("oracle size guard exceeded");
  const auto cg = naive_refine(g, h);
  const auto cp = naive_refine(gp, h);
  using Key = std::tuple<std::string, Symbol, std::string>;
  auto counts = [](const Graph& x, const std::vector<std::string>& c) {
    std::map<Key, std::uint64_t> out;
    for (std::size_t i = 0; i < x.edge_count(); ++i) {
      auto a = c[x.edge(i).u], b = c[x.edge(i).v];
      if (b < a) std::swap(a, b);
      ++out[{a, x.edge_label(i), b}];
    }
    return out;
  };
  std::uint64_t total = 0;
  for (std::size_t level = first_level; level <= h; ++level) {
    const auto left = counts(g, cg[level]);
    const auto right = counts(gp, cp[level]);
    for (const auto& [key, n] : left) {
      auto it = right.find(key);
      if (it != right.end()) total += std::min(n, it->second);
    }
  }
  return total;
}

struct OraclePath {
  std::vector<std::uint32_t> address;  // colors interleaved with edge labels
  NodeId source = 0;
  NodeId sink = 0;
  bool ambiguous = false;
};

// For each connected pair {s, t}: enumerates every shortest path explicitly
// and keeps the smallest string over all paths and both reading directions.
// `ranks` maps nodes to color ranks at the level of interest.
inline std::vector<OraclePath> canonical_paths(const Graph& g, const std::vector<std::uint32_t>& ranks,
                                               std::size_t max_len) {
  const auto n = g.node_count();
  constexpr std::uint32_t inf = std::numeric_limits<std::uint32_t>::max() / 2;
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, inf));
  std::vector<std::vector<int>> label(n, std::vector<int>(n, -1));
  for (NodeId v = 0; v < n; ++v) d[v][v] = 0;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const auto [u, v] = g.edge(i);
    d[u][v] = d[v][u] = 1;
    label[u][v] = label[v][u] = static_cast<int>(g.edge_label(i));
  }
  for (NodeId k = 0; k < n; ++k) {
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  std::vector<OraclePath> out;
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId t = s + 1; t < n; ++t) {
      if (d[s][t] >= inf || (max_len != 0 && d[s][t] > max_len)) continue;
      std::vector<std::vector<NodeId>> paths;
      std::vector<NodeId> current{s};
      std::function<void()> walk = [&] {
        const auto x = current.back();
        if (x == t) {
          paths.push_back(current);
          return;
        }
        for (NodeId y = 0; y < n; ++y) {
          if (label[x][y] >= 0 && d[s][y] == current.size() && d[y][t] + current.size() == d[s][t]) {
            current.push_back(y);
            walk();
            current.pop_back();
          }
        }
      };
      walk();
      std::vector<std::uint32_t> best_from_s, best_from_t;
      for (const auto& p : paths) {
        for (int dir = 0; dir < 2; ++dir) {
          std::vector<NodeId> seq = p;
          if (dir == 1) std::reverse(seq.begin(), seq.end());
          std::vector<std::uint32_t> str;
          for (std::size_t i = 0; i < seq.size(); ++i) {
            if (i) str.push_back(static_cast<std::uint32_t>(label[seq[i - 1]][seq[i]]));
            str.push_back(ranks[seq[i]]);
          }
          auto& best = dir == 0 ? best_from_s : best_from_t;
          if (best.empty() || str < best) best = str;
        }
      }
      OraclePath op;
      if (best_from_t < best_from_s) {
        op = {best_from_t, t, s, false};
      } else {
        op = {best_from_s, s, t, best_from_s == best_from_t};
      }
      out.push_back(std::move(op));
    }
  }
  return out;
}

// Sum over levels and all pairs (p, p') of canonical shortest paths passing
// the explicit k_delta checks (equal length, equal colors, equal edge labels)
// of kV(source, source') * kV(sink, sink'). Color order is that of a dataset
// holding exactly these two graphs.
inline double brute_nps(const Graph& g, const Graph& gp, std::size_t h, const BaseKernelSpec& base,
                        std::size_t first_level = 1, bool normalize = false, std::size_t max_len = 0) {
  if (g.node_count() > kMaxPathNodes || gp.node_count() > kMaxPathNodes) throw ComputeError("oracle size guard exceeded");
  const auto ranks = signature_ranks({&g, &gp}, h);
  auto kv = [&](NodeId x, NodeId y) { return base_value(base, node_attrs(g, x), node_attrs(gp, y)); };
  double total = 0.0;
  for (std::size_t level = first_level; level <= h; ++level) {
    const auto paths = canonical_paths(g, ranks[0][level], max_len);
    const auto paths_prime = canonical_paths(gp, ranks[1][level], max_len);
    auto k_delta = [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
      if (a.size() != b.size()) return false;  // path length
      for (std::size_t i = 0; i < a.size(); i += 2) {
        if (a[i] != b[i]) return false;  // node colors
      }
      for (std::size_t i = 1; i < a.size(); i += 2) {
        if (a[i] != b[i]) return false;  // edge labels
      }
      return true;
    };
    for (const auto& p : paths) {
      for (const auto& q : paths_prime) {
        if (!k_delta(p.address, q.address)) continue;
        double term = 0.0;
        if (p.ambiguous || q.ambiguous) {
          term = 0.5 * (kv(p.source, q.source) * kv(p.sink, q.sink) + kv(p.source, q.sink) * kv(p.sink, q.source));
        } else {
          term = kv(p.source, q.source) * kv(p.sink, q.sink);
        }
        if (normalize) {
          const auto count = std::count_if(paths.begin(), paths.end(), [&](const OraclePath& x) { return k_delta(x.address, p.address); });
          const auto count_prime = std::count_if(paths_prime.begin(), paths_prime.end(), [&](const OraclePath& x) { return k_delta(x.address, q.address); });
          term /= static_cast<double>(count) * static_cast<double>(count_prime);
        }
        total += term;
      }
    }
  }
  return total;
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

struct OracleRow {
  std::string kernel;
  std::size_t pair = 0;
  double reference = 0.0;
  double production = 0.0;
  double rel_error = 0.0;
};

struct OracleReport {
  std::vector<OracleRow> rows;

  void add(std::string kernel, std::size_t pair, double reference, double production) {
    rows.push_back({std::move(kernel), pair, reference, production, relative_error(reference, production)});
  }

  double max_error(std::string_view kernel) const {
    double m = 0.0;
    for (const auto& r : rows) {
      if (r.kernel == kernel) m = std::max(m, r.rel_error);
    }
    return m;
  }

  std::string table() const {
    std::string out = fmt::format("{:<6} {:>5} {:>24} {:>24} {:>12}\n", "kernel", "pair", "reference", "production", "rel_error");
    for (const auto& r : rows) {
      out += fmt::format("{:<6} {:>5} {:>24.17g} {:>24.17g} {:>12.3e}\n", r.kernel, r.pair, r.reference, r.production, r.rel_error);
    }
    return out;
  }
};

}  // namespace npkernel::oracle
