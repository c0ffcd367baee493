#include <gtest/gtest.h>

#include <set>

#include "npkernel/oracle.hpp"
#include "test_support.hpp"

using namespace npkernel;
using npkernel::testing::make_graph;
using npkernel::testing::random_graph;
using npkernel::testing::refine_all;

namespace {

KernelConfig config_of(KernelType kind, std::size_t h, BaseKernelKind base = BaseKernelKind::gaussian) {
  KernelConfig c;
  c.kernel = kind;
  c.h = h;
  c.base.kind = base;
  return c;
}

std::set<EdgeAddress> addresses(const Graph& g, const ColorAssignment& a, std::size_t level) {
  std::set<EdgeAddress> s;
  for (std::uint32_t i = 0; i < g.edge_count(); ++i) s.insert(edge_address(a, level, g.edge(i), g.edge_label(i)));
  return s;
}

std::size_t shared_addresses(const Graph& g, const Graph& gp, const std::vector<ColorAssignment>& a, std::size_t level) {
  const auto x = addresses(g, a[0], level);
  const auto y = addresses(gp, a[1], level);
  std::size_t n = 0;
  for (const auto& e : x) n += y.count(e);
  return n;
}

npkernel::testing::RandomGraphSpec attributed_spec() {
  npkernel::testing::RandomGraphSpec spec;
  spec.max_nodes = 10;
  spec.node_labels = 2;
  spec.edge_labels = 2;
  spec.node_attr_dim = 3;
  spec.edge_attr_dim = 2;
  spec.density = 0.4;
  return spec;
}

}  // namespace

TEST(Npe, IdenticalSingleEdgeGraphsUnitKernel) {
  const auto g = make_graph(2, {{0, 1}}, {0, 1});
  const auto a = refine_all({g, g}, 1);
  EXPECT_EQ(npe_pair(g, g, a[0], a[1], config_of(KernelType::npe, 1, BaseKernelKind::unit)), 1.0);
  EXPECT_EQ(oracle::brute_npe(g, g, 1, {BaseKernelKind::unit, {}}), 1.0);
  const auto b = refine_all({g, g}, 3);
  EXPECT_EQ(npe_pair(g, g, b[0], b[1], config_of(KernelType::npe, 3, BaseKernelKind::unit)), 3.0);
}

TEST(Npe, UnitKernelCountsSharedAddressesPerLevel) {
  std::mt19937_64 rng(31);
  npkernel::testing::RandomGraphSpec spec;
  spec.edge_labels = 2;
  for (int t = 0; t < 30; ++t) {
    const auto g = random_graph(rng, spec);
    const auto gp = random_graph(rng, spec);
    const auto a = refine_all({g, gp}, 3);
    for (std::size_t level = 1; level <= 3; ++level) {
      KernelConfig c = config_of(KernelType::npe, level, BaseKernelKind::unit);
      const double upto = npe_pair(g, gp, a[0], a[1], c);
      c.h = level - 1;
      const double before = level == 1 ? 0.0 : npe_pair(g, gp, a[0], a[1], c);
      EXPECT_EQ(upto - before, static_cast<double>(shared_addresses(g, gp, a, level)));
    }
  }
}

TEST(Npe, MatchesBruteForceOnAttributedPairs) {
  std::mt19937_64 rng(32);
  const auto spec = attributed_spec();
  for (int t = 0; t < 20; ++t) {
    const auto g = random_graph(rng, spec);
    const auto gp = random_graph(rng, spec);
    const auto a = refine_all({g, gp}, 2);
    for (bool level0 : {false, true}) {
      auto c = config_of(KernelType::npe, 2);
      c.include_level0 = level0;
      const double prod = npe_pair(g, gp, a[0], a[1], c);
      const double ref = oracle::brute_npe(g, gp, 2, c.base, c.first_level());
      EXPECT_LE(oracle::relative_error(prod, ref), 1e-12) << prod << " vs " << ref;
    }
  }
}

TEST(Npe, LinearBaseMatchesBruteForce) {
  std::mt19937_64 rng(33);
  const auto spec = attributed_spec();
  for (int t = 0; t < 10; ++t) {
    const auto g = random_graph(rng, spec);
    const auto gp = random_graph(rng, spec);
    const auto a = refine_all({g, gp}, 2);
    const auto c = config_of(KernelType::npe, 2, BaseKernelKind::linear);
    EXPECT_LE(oracle::relative_error(npe_pair(g, gp, a[0], a[1], c), oracle::brute_npe(g, gp, 2, c.base)), 1e-12);
  }
}

TEST(Npe, DisjointAlphabetsGiveZero) {
  const auto g = make_graph(3, {{0, 1}, {1, 2}}, {0, 0, 0});
  const auto gp = make_graph(3, {{0, 1}, {1, 2}}, {1, 1, 1});
  const auto a = refine_all({g, gp}, 2);
  EXPECT_EQ(npe_pair(g, gp, a[0], a[1], config_of(KernelType::npe, 2)), 0.0);
  EXPECT_EQ(npo_pair(g, gp, a[0], a[1], 2), 0u);
  EXPECT_EQ(oracle::brute_npe(g, gp, 2, {}), 0.0);
  EXPECT_EQ(oracle::brute_npo(g, gp, 2), 0u);
}

TEST(Npo, SelfKernelEqualsEdgeCountPerLevel) {
  for (const auto& ds : npkernel::testing::fixture_datasets()) {
    ColorDictionary dict;
    const auto a = refine(ds, 3, dict);
    for (std::size_t gi = 0; gi < ds.size(); ++gi) {
      const auto& g = ds.graphs[gi];
      EXPECT_EQ(npo_pair(g, g, a[gi], a[gi], 1), g.edge_count());
      EXPECT_EQ(npo_pair(g, g, a[gi], a[gi], 3), 3 * g.edge_count());
    }
  }
}

TEST(Npo, MatchesBruteForceRecount) {
  std::mt19937_64 rng(34);
  npkernel::testing::RandomGraphSpec spec;
  spec.edge_labels = 2;
  spec.max_nodes = 12;
  for (int t = 0; t < 30; ++t) {
    const auto g = random_graph(rng, spec);
    const auto gp = random_graph(rng, spec);
    const auto a = refine_all({g, gp}, 3);
    EXPECT_EQ(npo_pair(g, gp, a[0], a[1], 3), oracle::brute_npo(g, gp, 3));
    EXPECT_EQ(npo_pair(g, gp, a[0], a[1], 3, 0), oracle::brute_npo(g, gp, 3, 0));
  }
}

TEST(Npo, UnitNpeLowerBound) {
  std::mt19937_64 rng(35);
  for (int t = 0; t < 30; ++t) {
    const auto g = random_graph(rng, {});
    const auto gp = random_graph(rng, {});
    const auto a = refine_all({g, gp}, 1);
    const FeatureIndex x(g, a[0], 1), y(gp, a[1], 1);
    const EdgeKernel k(g, gp, {BaseKernelKind::unit, {}});
    const auto terms = level_terms(x, y, k);
    EXPECT_EQ(terms.npe, static_cast<double>(terms.shared));
    EXPECT_GE(terms.npo, terms.shared);
    bool all_one = true;
    for (const auto& b : x.buckets()) {
      if (const auto* o = y.find(b.address)) all_one = all_one && std::min(b.size, o->size) == 1;
    }
    EXPECT_EQ(terms.npo == terms.shared, all_one);
  }
}

TEST(Np, AlphaEndpointsAndMidpoint) {
  std::mt19937_64 rng(36);
  const auto spec = attributed_spec();
  for (int t = 0; t < 10; ++t) {
    const auto g = random_graph(rng, spec);
    const auto gp = random_graph(rng, spec);
    const auto a = refine_all({g, gp}, 2);
    auto c = config_of(KernelType::np, 2);
    const double npe = npe_pair(g, gp, a[0], a[1], c);
    const double npo = static_cast<double>(npo_pair(g, gp, a[0], a[1], 2));
    c.alpha = 1.0;
    EXPECT_EQ(np_pair(g, gp, a[0], a[1], c), npe);
    c.alpha = 0.0;
    EXPECT_EQ(np_pair(g, gp, a[0], a[1], c), npo);
    c.alpha = 0.5;
    EXPECT_NEAR(np_pair(g, gp, a[0], a[1], c), 0.5 * (npe + npo), 1e-12 * (npe + npo));
  }
}

TEST(Np, AlphaOutOfRange) {
  const auto g = make_graph(2, {{0, 1}}, {0, 1});
  const auto a = refine_all({g, g}, 1);
  auto c = config_of(KernelType::np, 1);
  c.alpha = -0.1;
  EXPECT_THROW(np_pair(g, g, a[0], a[1], c), ComputeError);
}

TEST(Np, ShallowColoringsAreRejected) {
  const auto g = make_graph(2, {{0, 1}}, {0, 1});
  const auto a = refine_all({g, g}, 1);
  EXPECT_THROW(npe_pair(g, g, a[0], a[1], config_of(KernelType::npe, 2)), ComputeError);
}

TEST(Np, KernelsAreSymmetric) {
  std::mt19937_64 rng(37);
  const auto spec = attributed_spec();
  for (int t = 0; t < 20; ++t) {
    const auto g = random_graph(rng, spec);
    const auto gp = random_graph(rng, spec);
    const auto a = refine_all({g, gp}, 2);
    const auto c = config_of(KernelType::np, 2);
    EXPECT_EQ(npo_pair(g, gp, a[0], a[1], 2), npo_pair(gp, g, a[1], a[0], 2));
    EXPECT_LE(oracle::relative_error(np_pair(g, gp, a[0], a[1], c), np_pair(gp, g, a[1], a[0], c)), 1e-12);
  }
}

TEST(Np, AttributeDimensionMismatch) {
  GraphParts p;
  p.node_count = 2;
  p.edges = {{0, 1}};
  p.node_labels = {0, 0};
  p.node_attributes = {{1.0}, {2.0}};
  GraphParts q = p;
  q.node_attributes = {{1.0, 0.0}, {2.0, 0.0}};
  const Graph g(p), gp(q);
  EXPECT_THROW(EdgeKernel(g, gp, {}), ComputeError);
}

TEST(Np, CombineRejectsNps) {
  KernelConfig c;
  c.kernel = KernelType::nps;
  EXPECT_THROW(combine(c, {}), ComputeError);
}
