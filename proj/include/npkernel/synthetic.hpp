#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "npkernel/error.hpp"
#include "npkernel/graph.hpp"

namespace npkernel {

struct SyntheticParams {
  std::size_t n_graphs = 1;
  std::size_t n_nodes = 2;
  double density = 1.0;               // fraction of the C(n,2) possible edges, in (0, 1]
  std::size_t label_alphabet_size = 1;
  std::size_t attribute_dim = 0;      // 0: no node attributes
  std::uint64_t seed = 0;
  // Planted classes: graph i belongs to class i % n_classes and its attributes
  // are shifted by class * class_shift in every coordinate.
  std::size_t n_classes = 1;
  double class_shift = 0.0;
};

inline std::size_t synthetic_edge_count(std::size_t n_nodes, double density) {
  const double pairs = static_cast<double>(n_nodes) * static_cast<double>(n_nodes - (n_nodes > 0)) / 2.0;
  return static_cast<std::size_t>(std::llround(density * pairs));
}

// Erdos-Renyi style dataset with exactly round(density * C(n,2)) edges per graph,
// i.i.d. uniform node labels and i.i.d. uniform [0,1]^d attributes.
inline Dataset generate_synthetic(const SyntheticParams& params) {
  if (params.label_alphabet_size < 1) throw Error("label_alphabet_size must be at least 1");
  if (!(params.density > 0.0 && params.density <= 1.0)) throw Error("density must lie in (0, 1]");
  if (params.n_classes < 1) throw Error("n_classes must be at least 1");
  const std::size_t max_pairs = params.n_nodes * (params.n_nodes > 0 ? params.n_nodes - 1 : 0) / 2;
  const std::size_t m = synthetic_edge_count(params.n_nodes, params.density);
  if (m < 1 || m > max_pairs) {
    throw Error(fmt::format("density {} on {} nodes yields {} edges; need at least 1", params.density,
                            params.n_nodes, m));
  }

  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<std::size_t> label_dist(0, params.label_alphabet_size - 1);
  std::uniform_real_distribution<double> attr_dist(0.0, 1.0);

  struct Draft {
    std::vector<Edge> edges;
    std::vector<std::size_t> labels;
    std::vector<std::vector<double>> attrs;
  };
  std::vector<Draft> drafts(params.n_graphs);
  std::vector<std::size_t> pair_ids(max_pairs);
  std::vector<bool> used_label(params.label_alphabet_size, false);
  std::vector<std::size_t> row_start(params.n_nodes > 0 ? params.n_nodes - 1 : 0);
  for (std::size_t u = 0; u < row_start.size(); ++u) row_start[u] = u * (params.n_nodes - 1) - u * (u - (u > 0)) / 2;

  for (std::size_t gi = 0; gi < params.n_graphs; ++gi) {
    auto& d = drafts[gi];
    // Partial Fisher-Yates over the pair index space.
    std::iota(pair_ids.begin(), pair_ids.end(), std::size_t{0});
    for (std::size_t k = 0; k < m; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, max_pairs - 1);
      std::swap(pair_ids[k], pair_ids[pick(rng)]);
    }
    d.edges.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      // Decode pair index into (u, v), u < v, row-major over the upper triangle.
      const std::size_t idx = pair_ids[k];
      const auto u = static_cast<std::size_t>(std::upper_bound(row_start.begin(), row_start.end(), idx) -
                                              row_start.begin()) - 1;
      const auto v = u + 1 + (idx - row_start[u]);
      d.edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    }
    std::sort(d.edges.begin(), d.edges.end());

    d.labels.resize(params.n_nodes);
    for (auto& l : d.labels) {
      l = label_dist(rng);
      used_label[l] = true;
    }
    if (params.attribute_dim > 0) {
      const double shift = static_cast<double>(gi % params.n_classes) * params.class_shift;
      d.attrs.assign(params.n_nodes, std::vector<double>(params.attribute_dim));
      for (auto& row : d.attrs) {
        for (auto& x : row) x = attr_dist(rng) + shift;
      }
    }
  }

  Dataset ds;
  ds.name = fmt::format("synthetic_n{}_v{}_d{}_l{}_s{}", params.n_graphs, params.n_nodes, params.density,
                        params.label_alphabet_size, params.seed);
  std::vector<std::string> texts;
  for (std::size_t l = 0; l < used_label.size(); ++l) {
    if (used_label[l]) texts.push_back(std::to_string(l));
  }
  ds.node_symbols.intern_sorted(texts);
  if (params.attribute_dim > 0) ds.attribute_dim = params.attribute_dim;
  if (params.n_classes > 1) {
    std::vector<int> classes(params.n_graphs);
    for (std::size_t gi = 0; gi < params.n_graphs; ++gi) classes[gi] = static_cast<int>(gi % params.n_classes);
    ds.class_labels = std::move(classes);
  }
  for (std::size_t gi = 0; gi < params.n_graphs; ++gi) {
    auto& d = drafts[gi];
    GraphParts p;
    p.node_count = params.n_nodes;
    p.edges = std::move(d.edges);
    p.graph_id = gi;
    p.node_labels.reserve(params.n_nodes);
    for (auto l : d.labels) p.node_labels.push_back(*ds.node_symbols.find(std::to_string(l)));
    p.node_attributes = std::move(d.attrs);
    ds.graphs.emplace_back(std::move(p));
  }
  return ds;
}

}  // namespace npkernel
