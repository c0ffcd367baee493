#include <gtest/gtest.h>

#include "npkernel/oracle.hpp"
#include "test_support.hpp"

using namespace npkernel;
using npkernel::testing::dataset_of;
using npkernel::testing::make_graph;
using npkernel::testing::random_graph;

namespace {

KernelConfig config_of(KernelType kind, std::size_t h = 2) {
  KernelConfig c;
  c.kernel = kind;
  c.h = h;
  return c;
}

Dataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t attr_dim = 2) {
  std::mt19937_64 rng(seed);
  npkernel::testing::RandomGraphSpec spec;
  spec.max_nodes = 12;
  spec.edge_labels = 2;
  spec.node_attr_dim = attr_dim;
  std::vector<Graph> graphs;
  for (std::size_t i = 0; i < n; ++i) graphs.push_back(random_graph(rng, spec, i));
  auto ds = dataset_of(std::move(graphs));
  if (attr_dim) ds.attribute_dim = attr_dim;
  return ds;
}

GramMatrix matrix(std::size_t n, std::vector<double> values) {
  GramMatrix gm;
  gm.n = n;
  gm.values = std::move(values);
  return gm;
}

}  // namespace

TEST(Gram, SingleGraphSelfKernel) {
  const auto ds = dataset_of({make_graph(4, {{0, 1}, {1, 2}, {2, 3}}, {0, 1, 0, 1})});
  for (std::size_t h = 1; h <= 3; ++h) {
    const auto gm = gram(ds, config_of(KernelType::npo, h));
    ASSERT_EQ(gm.n, 1u);
    EXPECT_EQ(gm(0, 0), 3.0 * h);
  }
}

TEST(Gram, SchemesAgree) {
  const auto ds = random_dataset(71, 10);
  for (auto kind : {KernelType::npe, KernelType::npo, KernelType::np}) {
    for (bool level0 : {false, true}) {
      auto c = config_of(kind, 3);
      c.include_level0 = level0;
      const auto global = gram(ds, c);
      c.scheme = Scheme::pairwise;
      const auto pairwise = gram(ds, c);
      for (std::size_t i = 0; i < global.values.size(); ++i) {
        if (kind == KernelType::npo) {
          EXPECT_EQ(global.values[i], pairwise.values[i]);
        } else {
          EXPECT_LE(oracle::relative_error(global.values[i], pairwise.values[i]), 1e-9);
        }
      }
    }
  }
}

TEST(Gram, EntriesMatchPairKernels) {
  const auto ds = random_dataset(72, 6);
  const auto c = config_of(KernelType::np, 2);
  const auto gm = gram(ds, c);
  ColorDictionary dict;
  const auto a = refine(ds, 2, dict);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.size(); ++j) {
      EXPECT_LE(oracle::relative_error(gm(i, j), np_pair(ds.graphs[i], ds.graphs[j], a[i], a[j], c)), 1e-12);
    }
  }
  auto s = c;
  s.kernel = KernelType::nps;
  const auto nps = gram(ds, s);
  EXPECT_LE(oracle::relative_error(nps(1, 4), nps_pair(ds.graphs[1], ds.graphs[4], a[1], a[4], s)), 1e-12);
}

TEST(Gram, WorkerCountDoesNotChangeValues) {
  const auto ds = random_dataset(73, 12);
  for (auto scheme : {Scheme::global, Scheme::pairwise}) {
    auto c = config_of(KernelType::np);
    c.scheme = scheme;
    EXPECT_EQ(gram(ds, c, {1}).values, gram(ds, c, {4}).values);
  }
}

TEST(Gram, NpsIgnoresPairwiseScheme) {
  const auto ds = random_dataset(74, 4);
  auto c = config_of(KernelType::nps);
  c.scheme = Scheme::pairwise;
  const auto gm = gram(ds, c);
  EXPECT_EQ(gm.config.scheme, Scheme::global);
  c.scheme = Scheme::global;
  EXPECT_EQ(gram(ds, c).values, gm.values);
}

TEST(Gram, SymmetricFiniteAndTimed) {
  const auto gm = gram(random_dataset(75, 8), config_of(KernelType::np));
  for (std::size_t i = 0; i < gm.n; ++i) {
    EXPECT_GE(gm(i, i), 0.0);
    for (std::size_t j = 0; j < gm.n; ++j) EXPECT_EQ(gm(i, j), gm(j, i));
  }
  for (const char* phase : {"refine", "index", "fill", "total"}) EXPECT_TRUE(gm.timing.count(phase)) << phase;
  EXPECT_EQ(gm.graph_ids.size(), 8u);
}

TEST(Gram, EdgeBudgetGuidance) {
  const auto ds = random_dataset(76, 3);
  auto c = config_of(KernelType::np);
  c.scheme = Scheme::pairwise;
  EXPECT_THROW(gram(ds, c, {1, 1}), ComputeError);
}

TEST(Gram, InvalidConfigIsRejected) {
  auto c = config_of(KernelType::np);
  c.alpha = 2.0;
  EXPECT_THROW(gram(random_dataset(77, 2), c), ComputeError);
}

TEST(Gram, NormalizeFlagGivesUnitDiagonal) {
  auto c = config_of(KernelType::np);
  c.normalize_gram = true;
  const auto gm = gram(random_dataset(78, 5), c);
  for (std::size_t i = 0; i < gm.n; ++i) EXPECT_EQ(gm(i, i), 1.0);
  EXPECT_TRUE(gm.timing.count("normalize"));
}

TEST(Gram, KernelLevels) {
  auto c = config_of(KernelType::np, 3);
  EXPECT_EQ(kernel_levels(c), (std::vector<std::size_t>{1, 2, 3}));
  c.include_level0 = true;
  EXPECT_EQ(kernel_levels(c), (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Psd, DisjointAlphabetsGiveDiagonalMatrix) {
  const auto ds = dataset_of({make_graph(3, {{0, 1}, {1, 2}}, {0, 0, 0}), make_graph(2, {{0, 1}}, {1, 1}),
                              make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {2, 2, 2, 2})});
  const auto gm = gram(ds, config_of(KernelType::npo, 1));
  EXPECT_EQ(gm(0, 1), 0.0);
  EXPECT_EQ(gm(1, 2), 0.0);
  const auto report = check_psd(gm, 1e-8);
  EXPECT_TRUE(report.passed);
  EXPECT_NEAR(report.lambda_min, 1.0, 1e-12);
  EXPECT_NEAR(report.lambda_max, 4.0, 1e-12);
}

TEST(Psd, NpGramOnRandomGraphs) {
  const auto ds = random_dataset(79, 30);
  for (double alpha : {0.0, 0.5, 1.0}) {
    auto c = config_of(KernelType::np);
    c.alpha = alpha;
    EXPECT_TRUE(check_psd(gram(ds, c), 1e-8).passed) << alpha;
  }
}

TEST(Psd, AsymmetricInputIsRejected) {
  EXPECT_THROW(check_psd(matrix(2, {1.0, 0.5, -0.5, 1.0}), 1e-8), ComputeError);
}

TEST(Psd, IndefiniteMatrixFails) {
  const auto r = check_psd(matrix(2, {1.0, 2.0, 2.0, 1.0}), 1e-8);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.lambda_min, -1.0, 1e-12);
}

TEST(Psd, SizeCap) { EXPECT_THROW(check_psd(matrix(3, std::vector<double>(9, 1.0)), 1e-8, 2), ComputeError); }

TEST(Normalize, HandExample) {
  const auto out = normalize_gram(matrix(2, {4.0, 3.0, 3.0, 9.0}));
  EXPECT_EQ(out(0, 1), 0.5);
  EXPECT_EQ(out(1, 0), 0.5);
  EXPECT_EQ(out(0, 0), 1.0);
  EXPECT_EQ(out(1, 1), 1.0);
}

TEST(Normalize, AlreadyNormalizedIsUnchanged) {
  const auto in = matrix(3, {1.0, 0.2, -0.3, 0.2, 1.0, 0.7, -0.3, 0.7, 1.0});
  const auto out = normalize_gram(in);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(out.values[i], in.values[i], 1e-15);
}

TEST(Normalize, ZeroDiagonalIsRejected) {
  EXPECT_THROW(normalize_gram(matrix(2, {0.0, 0.0, 0.0, 1.0})), ComputeError);
}

TEST(Normalize, PreservesPsd) {
  std::mt19937_64 rng(80);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 8, d = 5;
    std::vector<double> x(n * d);
    for (auto& v : x) v = nd(rng);
    std::vector<double> k(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < d; ++r) k[i * n + j] += x[i * d + r] * x[j * d + r];
      }
    }
    const auto in = matrix(n, k);
    EXPECT_TRUE(check_psd(in, 1e-10).passed);
    EXPECT_TRUE(check_psd(normalize_gram(in), 1e-10).passed);
  }
}

TEST(Knn, IdenticalGraphsPerClass) {
  std::vector<Graph> graphs;
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) {
    graphs.push_back(i % 2 ? make_graph(3, {{0, 1}, {1, 2}}, {0, 1, 0}) : make_graph(3, {{0, 1}, {1, 2}, {0, 2}}, {1, 1, 1}));
    labels.push_back(i % 2);
  }
  const auto gm = gram(dataset_of(graphs), config_of(KernelType::np));
  EXPECT_EQ(knn_eval(gm, labels, 3, 5, 1), 1.0);
}

TEST(Knn, ShuffledLabelsAreNearChance) {
  const auto gm = gram(random_dataset(81, 40, 0), config_of(KernelType::npo));
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::vector<int> labels(40);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 2);
    std::mt19937_64 rng(1000 + seed);
    std::shuffle(labels.begin(), labels.end(), rng);
    total += knn_eval(gm, labels, 3, 5, seed);
  }
  EXPECT_NEAR(total / 30.0, 0.5, 0.15);
}

TEST(Knn, Errors) {
  const auto gm = gram(random_dataset(82, 3), config_of(KernelType::npo));
  const std::vector<int> labels{0, 1, 0};
  EXPECT_THROW(knn_eval(gm, labels, 1, 5, 0), ComputeError);
  const std::vector<int> short_labels{0, 1};
  EXPECT_THROW(knn_eval(gm, short_labels, 1, 2, 0), ComputeError);
  EXPECT_THROW(knn_eval(gm, labels, 0, 2, 0), ComputeError);
}

TEST(Knn, DeterministicUnderSeed) {
  const auto ds = random_dataset(83, 20);
  const auto gm = gram(ds, config_of(KernelType::np));
  std::vector<int> labels(20);
  for (std::size_t i = 0; i < 20; ++i) labels[i] = static_cast<int>(i % 3);
  EXPECT_EQ(knn_eval(gm, labels, 3, 4, 9), knn_eval(gm, labels, 3, 4, 9));
}
