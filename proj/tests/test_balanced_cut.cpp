#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pcs/balanced_cut.hpp"
#include "pcs/errors.hpp"
#include "pcs/generators.hpp"
#include "pcs/power_sparsifier.hpp"
#include "pcs/spectral.hpp"

using namespace pcs;

namespace {

std::vector<double> degrees_of(const Graph& g) { return {g.degrees().begin(), g.degrees().end()}; }

Graph complete(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

// A random cluster graph G{C} of a random graph G.
Graph random_cluster(oracle::Rng& rng, int max_size) {
  const int n = 2 + rng.below(max_size + 3);
  Graph g = oracle::random_connected_graph(rng, n, 0.2 + 0.5 * rng.unit());
  std::vector<VertexId> c;
  for (int v = 0; v < n; ++v) {
    if (static_cast<int>(c.size()) < max_size && rng.coin(0.8)) c.push_back(v);
  }
  if (c.size() < 2) c = {0, 1};
  return induce_with_loops(g, VertexSet(c)).graph;
}

}  // namespace

TEST(ExhaustiveCut, CycleReturnsAdjacentPair) {
  Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  auto deg = degrees_of(c4);
  BalancedCutOutcome out = exhaustive_balanced_cut(c4, deg, 0.6, 0.0);
  ASSERT_FALSE(out.expander);
  EXPECT_EQ(out.cut, VertexSet({0, 1}));
  EXPECT_DOUBLE_EQ(out.sparsity, 0.5);
  EXPECT_DOUBLE_EQ(out.balance, 0.5);
  EXPECT_EQ(out.evidence, CutEvidence::Enumeration);
}

TEST(ExhaustiveCut, CompleteGraphIsExpander) {
  Graph k4 = complete(4);
  auto deg = degrees_of(k4);
  EXPECT_TRUE(exhaustive_balanced_cut(k4, deg, 0.5, 0.0).expander);
  EXPECT_FALSE(exhaustive_balanced_cut(k4, deg, 2.0 / 3.0, 0.0).expander);
}

TEST(ExhaustiveCut, ZeroPhi) {
  Graph path(4, {{0, 1}, {1, 2}, {2, 3}});
  auto deg = degrees_of(path);
  EXPECT_TRUE(exhaustive_balanced_cut(path, deg, 0.0, 0.0).expander);
  Graph split(4, {{0, 1}, {2, 3}});
  BalancedCutOutcome out = exhaustive_balanced_cut(split, degrees_of(split), 0.0, 0.0);
  ASSERT_FALSE(out.expander);
  EXPECT_DOUBLE_EQ(out.sparsity, 0.0);
  EXPECT_EQ(out.cut, VertexSet({0, 1}));
}

TEST(ExhaustiveCut, Guards) {
  Graph k4 = complete(4);
  auto deg = degrees_of(k4);
  EXPECT_THROW(exhaustive_balanced_cut(k4, deg, 0.5, 0.1), std::invalid_argument);
  EXPECT_THROW(exhaustive_balanced_cut(k4, std::vector<double>{1, 2}, 0.5, 0.0), std::invalid_argument);
  Graph big = gen_regular(24, 4, 1);
  EXPECT_THROW(exhaustive_balanced_cut(big, degrees_of(big), 0.1, 0.0), SizeGuardError);
}

TEST(ExhaustiveCut, ZeroVolumeVerticesAreIgnored) {
  // Vertex 2 has no G-degree, so no cut gains anything by moving it.
  Graph h(3, {{0, 1}});
  std::vector<double> deg = {1, 1, 0};
  BalancedCutOutcome out = exhaustive_balanced_cut(h, deg, 1.0, 0.0);
  ASSERT_FALSE(out.expander);
  EXPECT_DOUBLE_EQ(out.sparsity, 1.0);
}

TEST(ExhaustiveCut, CertificateAndSearchAboveEnumerationLimit) {
  Graph k24 = complete(24);
  ExhaustiveOptions opt;
  opt.size_limit = 32;
  BalancedCutOutcome expander = exhaustive_balanced_cut(k24, degrees_of(k24), 0.3, 0.0, opt);
  EXPECT_TRUE(expander.expander);
  EXPECT_EQ(expander.evidence, CutEvidence::Certificate);

  Graph barbell = gen_barbell(2, 12, 1);
  BalancedCutOutcome cut = exhaustive_balanced_cut(barbell, degrees_of(barbell), 0.05, 0.0, opt);
  ASSERT_FALSE(cut.expander);
  EXPECT_EQ(cut.evidence, CutEvidence::BoundedSearch);
  EXPECT_EQ(cut.cut, VertexSet::range(12));
  EXPECT_DOUBLE_EQ(cut.sparsity, 1.0 / volume(barbell, VertexSet::range(12)));
}

TEST(CutScore, MatchesDefinition) {
  Graph h(3, {{0, 1, 2.0}, {1, 2}, {0, 0, 5.0}});
  std::vector<double> deg = {4, 3, 1};
  EXPECT_DOUBLE_EQ(cut_score(h, deg, {0}), 0.5);
  EXPECT_DOUBLE_EQ(cut_score(h, deg, {2}), 1.0);
}

TEST(SweepCut, DisconnectedReturnsLighterComponent) {
  Graph g(7, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {5, 6}, {3, 6}, {3, 5}});
  BalancedCutOutcome out = sweep_balanced_cut(g, degrees_of(g), 0.1, 0.0);
  ASSERT_FALSE(out.expander);
  EXPECT_EQ(out.cut, VertexSet({0, 1, 2}));
  EXPECT_DOUBLE_EQ(out.sparsity, 0.0);
  EXPECT_EQ(out.evidence, CutEvidence::Sweep);
}

TEST(SweepCut, BarbellSplitsAtBridge) {
  Graph g = gen_barbell(2, 8, 1);
  BalancedCutOutcome out = sweep_balanced_cut(g, degrees_of(g), 0.2, 0.0);
  ASSERT_FALSE(out.expander);
  const VertexSet left = VertexSet::range(8);
  const VertexSet right = VertexSet::range(16).minus(left);
  EXPECT_TRUE(out.cut == left || out.cut == right);
  EXPECT_DOUBLE_EQ(out.sparsity, 1.0 / volume(g, out.cut));
}

TEST(SweepCut, CompleteGraphIsExpander) {
  Graph k16 = complete(16);
  auto deg = degrees_of(k16);
  EXPECT_TRUE(sweep_balanced_cut(k16, deg, 0.3, 0.0).expander);
  EXPECT_TRUE(exhaustive_balanced_cut(k16, deg, 0.3, 0.0).expander);
}

TEST(Spectral, CertificateIsALowerBound) {
  oracle::Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    Graph h = random_cluster(rng, 10);
    auto deg = degrees_of(h);
    const double bound = cheeger_lower_bound(h, deg);
    EXPECT_LE(bound, oracle::min_conductance(h) * (1 + 1e-9) + 1e-12);
  }
}

TEST(Spectral, PowerIterationMatchesEigenvalue) {
  Graph g = gen_barbell(2, 6, 1);
  auto deg = degrees_of(g);
  EigenvectorEstimate est = second_eigenvector(g, deg, 100000, 1e-12, 3);
  EXPECT_NEAR(est.rayleigh / 2, cheeger_lower_bound(g, deg), 1e-6);
  EXPECT_THROW(second_eigenvector(g, deg, 1, 1e-15, 3), NumericFailure);
}

// Invariants.

TEST(BalancedCutProperties, ExhaustiveAgreesWithOracle) {
  oracle::Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    Graph h = random_cluster(rng, 10);
    auto deg = degrees_of(h);
    const double phi = 0.05 + 0.75 * rng.unit();
    BalancedCutOutcome out = exhaustive_balanced_cut(h, deg, phi, 0.0);
    oracle::CutAnswer want = oracle::best_balanced_cut(h, deg, phi);
    ASSERT_EQ(out.expander, want.expander) << "trial " << trial;
    EXPECT_EQ(out.expander, oracle::min_conductance(h) > phi * (1 + 1e-9));
    if (!want.expander) EXPECT_EQ(out.cut, VertexSet(want.cut)) << "trial " << trial;
  }
}

TEST(BalancedCutProperties, CertificatePathAgreesWithEnumeration) {
  oracle::Rng rng(43);
  ExhaustiveOptions small;
  small.enumeration_limit = 3;
  small.size_limit = 16;
  for (int trial = 0; trial < 200; ++trial) {
    Graph h = random_cluster(rng, 12);
    auto deg = degrees_of(h);
    const double phi = 0.05 + 0.75 * rng.unit();
    const double delta = rng.coin(0.5) ? 0.0 : 1.0 / 16;
    BalancedCutOutcome full = exhaustive_balanced_cut(h, deg, phi, delta);
    BalancedCutOutcome alt = exhaustive_balanced_cut(h, deg, phi, delta, small);
    ASSERT_EQ(full.expander, alt.expander) << "trial " << trial;
    if (!full.expander) {
      EXPECT_EQ(full.cut, alt.cut);
      EXPECT_DOUBLE_EQ(full.sparsity, alt.sparsity);
    }
  }
}

TEST(BalancedCutProperties, ExpanderVerdictOnSparsifierIsSound) {
  oracle::Rng rng(44);
  int verified = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Graph gc = random_cluster(rng, 9);
    auto deg = degrees_of(gc);
    const double phi = 0.1 + 0.5 * rng.unit();
    const double delta = 1.0 / 16;
    SparsifierParams p;
    p.delta = delta;
    p.epsilon = delta * phi;
    p.upsilon_scale = 0.05 + rng.unit();
    p.seed = rng.next();
    Graph h = sample(gc, p);
    if (!check_cut_sparsifier(gc, h, delta, delta * phi).ok) continue;
    ++verified;
    BalancedCutOutcome ex = exhaustive_balanced_cut(h, deg, phi, delta);
    if (ex.expander) {
      EXPECT_GE(oracle::min_conductance(gc), phi * (1 - 1e-9));
    } else {
      EXPECT_LE(conductance(gc, ex.cut), (1 + 5 * delta) * phi * (1 + 1e-9));
    }
    BalancedCutOutcome sw = sweep_balanced_cut(h, deg, phi, delta, {rng.next()});
    if (!sw.expander) EXPECT_LE(conductance(gc, sw.cut), (1 + 6 * delta) * phi * (1 + 1e-9));
  }
  EXPECT_GE(verified, 50);
}

TEST(BalancedCutProperties, ReturnedCutDominatesEverySparseCut) {
  oracle::Rng rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    Graph h = random_cluster(rng, 9);
    auto deg = degrees_of(h);
    const double phi = 0.1 + 0.6 * rng.unit();
    BalancedCutOutcome out = exhaustive_balanced_cut(h, deg, phi, 0.0);
    if (out.expander) continue;
    const double vol = volume(h, out.cut);
    const int n = h.num_vertices();
    oracle::Dense d(h);
    const double total = h.total_volume();
    for (std::uint32_t m = 1; m + 1 < (1u << n); ++m) {
      const double vm = oracle::mask_sum(deg, m);
      const double small = std::min(vm, total - vm);
      if (small <= 0 || d.cut(m) / small > phi) continue;
      EXPECT_LE(small, vol * (1 + 1e-12));
    }
  }
}
