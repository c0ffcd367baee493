#pragma once

// Dataset-scale Gram matrices under the global (feature index) and pairwise
// (product graph) schemes, plus PSD checking, normalization and a k-NN
// evaluator for smoke tests.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "npkernel/config.hpp"
#include "npkernel/error.hpp"
#include "npkernel/graph.hpp"
#include "npkernel/np_kernels.hpp"
#include "npkernel/nps_kernel.hpp"
#include "npkernel/parallel.hpp"
#include "npkernel/product_graph.hpp"
#include "npkernel/wl.hpp"

namespace npkernel {

struct GramMatrix {
  std::size_t n = 0;
  std::vector<double> values;  // row-major n x n
  std::vector<std::size_t> graph_ids;
  KernelConfig config;
  std::map<std::string, double> timing;  // seconds per phase

  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
};

struct EngineOptions {
  std::size_t workers = 1;
  std::size_t product_edge_budget = 50'000'000;  // pairwise scheme only
};

// Levels actually summed by `config`.
inline std::vector<std::size_t> kernel_levels(const KernelConfig& config) {
  std::vector<std::size_t> out;
  for (auto l = config.first_level(); l <= config.h; ++l) out.push_back(l);
  return out;
}

// Per-level terms of one pair computed from its product graph: convolution
// pairs supply the shared addresses and the (e, e') combinations; bucket sizes
// and edge orientations come from the memoized per-graph feature indexes.
inline LevelTerms product_level_terms(const ProductGraph& pg, const FeatureIndex& left, const FeatureIndex& right,
                                      const EdgeKernel& kernel, bool with_npe = true) {
  LevelTerms t;
  const auto pairs = convolution_pairs(pg);
  std::size_t i = 0;
  while (i < pairs.size()) {
    const auto& address = pairs[i].address;
    std::size_t end = i;
    while (end < pairs.size() && pairs[end].address == address) ++end;
    const auto& bucket = left.buckets()[left.slot(pairs[i].edge).bucket];
    const auto& bucket_prime = right.buckets()[right.slot(pairs[i].edge_prime).bucket];
    ++t.shared;
    t.npo += std::min(bucket.size, bucket_prime.size);
    if (with_npe) {
      const auto edges = left.edges(bucket);
      const auto edges_prime = right.edges(bucket_prime);
      const bool pal = address.palindromic();
      double kv = 0.0;
      for (std::size_t k = i; k < end; ++k) {
        kv += kernel(edges[left.slot(pairs[k].edge).position], edges_prime[right.slot(pairs[k].edge_prime).position], pal);
      }
      t.npe += kv / (static_cast<double>(bucket.size) * static_cast<double>(bucket_prime.size));
    }
    i = end;
  }
  return t;
}

namespace gram_detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

inline std::vector<std::pair<std::size_t, std::size_t>> upper_triangle(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> work;
  work.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) work.emplace_back(i, j);
  }
  return work;
}

}  // namespace gram_detail

// K'(i,j) = K(i,j) / sqrt(K(i,i) K(j,j)); the diagonal becomes exactly 1.
inline GramMatrix normalize_gram(const GramMatrix& gm) {
  GramMatrix out = gm;
  for (std::size_t i = 0; i < gm.n; ++i) {
    if (!(gm(i, i) > 0.0)) throw ComputeError(fmt::format("cannot normalize: diagonal entry {} is {}", i, gm(i, i)));
  }
  for (std::size_t i = 0; i < gm.n; ++i) {
    for (std::size_t j = 0; j < gm.n; ++j) {
      out.at(i, j) = i == j ? 1.0 : gm(i, j) / std::sqrt(gm(i, i) * gm(j, j));
    }
  }
  out.config.normalize_gram = true;
  return out;
}

// Kernel matrix of the whole dataset. Every cell depends only on its two
// graphs and the shared color dictionary, so results do not depend on the
// number of workers.
inline GramMatrix gram(const Dataset& ds, const KernelConfig& config, const EngineOptions& options = {}) {
  using namespace gram_detail;
  validate_config(config);
  const auto total_start = Clock::now();
  const auto n = ds.graphs.size();
  GramMatrix gm;
  gm.n = n;
  gm.values.assign(n * n, 0.0);
  gm.config = config;
  for (const auto& g : ds.graphs) gm.graph_ids.push_back(g.graph_id());

  auto start = Clock::now();
  ColorDictionary dict;
  const auto assignments = refine(ds, config.h, dict, options.workers);
  gm.timing["refine"] = seconds_since(start);

  const auto levels = kernel_levels(config);
  const auto work = upper_triangle(n);
  const bool with_npe = config.kernel != KernelType::npo;

  if (config.kernel == KernelType::nps) {
    // Paths have no product-graph formulation; always use the path index.
    gm.config.scheme = Scheme::global;
    start = Clock::now();
    std::vector<std::vector<PathIndex>> index(n);
    parallel_for(n, options.workers, [&](std::size_t gi) {
      const auto dist = all_pairs_distances(ds.graphs[gi]);
      for (auto level : levels) index[gi].emplace_back(ds.graphs[gi], assignments[gi], level, config.max_path_len, dist);
    });
    gm.timing["index"] = seconds_since(start);
    start = Clock::now();
    parallel_for(work.size(), options.workers, [&](std::size_t w) {
      const auto [i, j] = work[w];
      const auto kernel = node_attribute_kernel(ds.graphs[i], ds.graphs[j], config.base);
      double value = 0.0;
      for (std::size_t l = 0; l < levels.size(); ++l) {
        value += nps_level(ds.graphs[i], ds.graphs[j], index[i][l], index[j][l], kernel, config.nps_normalize);
      }
      gm.at(i, j) = value;
    });
    gm.timing["fill"] = seconds_since(start);
  } else {
    start = Clock::now();
    // index[gi][l]: feature index of graph gi at levels[l]
    std::vector<std::vector<FeatureIndex>> index(n);
    parallel_for(n, options.workers, [&](std::size_t gi) {
      for (auto level : levels) index[gi].emplace_back(ds.graphs[gi], assignments[gi], level);
    });
    gm.timing["index"] = seconds_since(start);

    start = Clock::now();
    parallel_for(work.size(), options.workers, [&](std::size_t w) {
      const auto [i, j] = work[w];
      const auto& g = ds.graphs[i];
      const auto& g_prime = ds.graphs[j];
      const EdgeKernel kernel(g, g_prime, config.base);
      PairTotals totals;
      if (config.scheme == Scheme::global) {
        for (std::size_t l = 0; l < levels.size(); ++l) {
          const auto t = level_terms(index[i][l], index[j][l], kernel, with_npe);
          totals.npe += t.npe;
          totals.npo += t.npo;
        }
      } else {
        auto pg = build_product(g, g_prime, assignments[i], assignments[j], levels.front(), options.product_edge_budget);
        for (std::size_t l = 0; l < levels.size(); ++l) {
          if (l > 0) pg = prune_product(pg, assignments[i], assignments[j]);
          const auto t = product_level_terms(pg, index[i][l], index[j][l], kernel, with_npe);
          totals.npe += t.npe;
          totals.npo += t.npo;
        }
      }
      gm.at(i, j) = combine(config, totals);
    });
    gm.timing["fill"] = seconds_since(start);
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) gm.at(j, i) = gm.at(i, j);
  }
  for (double v : gm.values) {
    if (!std::isfinite(v)) throw ComputeError("Gram matrix contains a non-finite entry");
  }
  if (config.normalize_gram) {
    start = Clock::now();
    auto timing = gm.timing;
    gm = normalize_gram(gm);
    gm.timing = timing;
    gm.timing["normalize"] = seconds_since(start);
  }
  gm.timing["total"] = seconds_since(total_start);
  return gm;
}

struct PsdReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool passed = false;  // lambda_min >= -tol * max(lambda_max, 0)
};

inline void require_symmetric(const GramMatrix& gm) {
  for (std::size_t i = 0; i < gm.n; ++i) {
    for (std::size_t j = i + 1; j < gm.n; ++j) {
      const double a = gm(i, j), b = gm(j, i);
      if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
        throw ComputeError(fmt::format("matrix is not symmetric at ({}, {}): {} vs {}", i, j, a, b));
      }
    }
  }
}

inline PsdReport check_psd(const GramMatrix& gm, double tol, std::size_t max_n = 4096) {
  if (gm.n > max_n) throw ComputeError(fmt::format("{} x {} exceeds the dense eigensolve cap of {}", gm.n, gm.n, max_n));
  require_symmetric(gm);
  PsdReport report;
  if (gm.n == 0) {
    report.passed = true;
    return report;
  }
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      gm.values.data(), static_cast<Eigen::Index>(gm.n), static_cast<Eigen::Index>(gm.n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ComputeError("eigensolver did not converge");
  report.lambda_min = solver.eigenvalues().minCoeff();
  report.lambda_max = solver.eigenvalues().maxCoeff();
  report.passed = report.lambda_min >= -tol * std::max(report.lambda_max, 0.0);
  return report;
}

// Stratified k-fold cross-validated k-NN accuracy under the kernel-induced
// distance d^2(i,j) = K(i,i) + K(j,j) - 2 K(i,j). Ties in the vote go to the
// class of the nearest tied neighbor.
inline double knn_eval(const GramMatrix& gm, std::span<const int> labels, std::size_t k, std::size_t folds,
                       std::uint64_t seed) {
  if (labels.size() != gm.n) throw ComputeError(fmt::format("{} labels for {} graphs", labels.size(), gm.n));
  if (folds < 2 || gm.n < folds) throw ComputeError(fmt::format("need at least {} graphs for {} folds", folds, folds));
  if (k < 1) throw ComputeError("k must be at least 1");

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold_of(gm.n);
  std::size_t cursor = 0;
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (auto i : members) fold_of[i] = cursor++ % folds;
  }

  std::size_t correct = 0;
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t i = 0; i < gm.n; ++i) {
    dist.clear();
    for (std::size_t j = 0; j < gm.n; ++j) {
      if (fold_of[j] == fold_of[i]) continue;
      dist.emplace_back(gm(i, i) + gm(j, j) - 2.0 * gm(i, j), j);
    }
    const auto kk = std::min(k, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());
    std::map<int, std::pair<std::size_t, std::size_t>> votes;  // label -> (count, rank of nearest member)
    for (std::size_t r = 0; r < kk; ++r) {
      auto [it, inserted] = votes.try_emplace(labels[dist[r].second], 0, r);
      ++it->second.first;
    }
    const auto best = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
      return a.second.first != b.second.first ? a.second.first < b.second.first : a.second.second > b.second.second;
    });
    if (best->first == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gm.n);
}

}  // namespace npkernel
