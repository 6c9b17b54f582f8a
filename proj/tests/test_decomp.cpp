#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pcs/errors.hpp"
#include "pcs/expander_decomp.hpp"
#include "pcs/generators.hpp"

using namespace pcs;

namespace {

Graph complete(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

DecompParams make_params(DecompMode mode, std::uint64_t seed) {
  DecompParams p;
  p.epsilon = 0.3;
  p.k = 2;
  p.mode = mode;
  p.seed = seed;
  p.exact_size_limit = 32;
  return p;
}

// Checks every guarantee a finished run promises.
void expect_sound(const Graph& g, const DecompParams& p, const DecompResult& r) {
  const RunReport& rep = r.report;
  EXPECT_NO_THROW(validate_partition(g.num_vertices(), r.partition));
  EXPECT_TRUE(rep.violations.empty()) << rep.violations.front();
  EXPECT_TRUE(rep.verification.passes());
  EXPECT_LE(intercluster_volume(g, r.partition), p.epsilon * g.total_volume() * (1 + 1e-9));
  EXPECT_LE(rep.depth - 1, rep.depth_bound + 1e-9);
  EXPECT_LE(rep.outer_iterations, p.k + 1);
  const double phi = rep.schedule.phi.back();
  for (const VertexSet& c : r.partition) {
    if (c.size() < 2 || c.size() > 16) continue;
    Graph gc = induce_with_loops(g, c).graph;
    EXPECT_GE(oracle::min_conductance(gc), phi * (1 - 1e-9));
  }
}

}  // namespace

TEST(Schedule, PhiFormula) {
  DecompParams p;
  p.epsilon = 0.1;
  p.alpha = 2.0;
  p.volume_bound = 256.0;
  p.k = 3;
  Schedule s = schedule(p, 16, 200.0);
  ASSERT_EQ(s.phi.size(), 5u);
  EXPECT_DOUBLE_EQ(s.phi[0], 0.003125);
  for (std::size_t j = 1; j < s.phi.size(); ++j) {
    EXPECT_DOUBLE_EQ(s.phi[j], s.phi[j - 1] / 2.0);
    EXPECT_DOUBLE_EQ(s.psi[j], p.delta * s.phi[j]);
  }
  EXPECT_DOUBLE_EQ(s.T, std::ceil(std::cbrt(20.0)));
  EXPECT_DOUBLE_EQ(s.depth_bound, std::log2(200.0) / std::log2(1.0 / (1.0 - 0.1 / 4.0)));
}

TEST(Schedule, ClusterConstants) {
  DecompParams p;
  p.epsilon = 0.3;
  p.k = 1;
  Schedule s = schedule(p, 16, 100.0);
  ClusterSchedule one = cluster_schedule(p, s, 100.0);
  EXPECT_DOUBLE_EQ(one.tau, one.m[1]);
  EXPECT_DOUBLE_EQ(one.m[1], 30.0);
  EXPECT_DOUBLE_EQ(one.m[2], 1.0);
  EXPECT_EQ(one.inner_bound, 31);

  p.k = 3;
  ClusterSchedule three = cluster_schedule(p, schedule(p, 16, 100.0), 80.0);
  EXPECT_NEAR(three.tau, std::cbrt(24.0), 1e-12);
  EXPECT_NEAR(three.m[2], 24.0 / three.tau, 1e-12);
  EXPECT_NEAR(three.m[3], 24.0 / (three.tau * three.tau), 1e-12);
  EXPECT_DOUBLE_EQ(three.m[4], 1.0);
}

TEST(DecompParams, Validation) {
  DecompParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.resolved_alpha(), 1.0 + 5.0 / 16.0);
  EXPECT_DOUBLE_EQ(p.resolved_b(), 1.0);
  p.mode = DecompMode::Fast;
  EXPECT_DOUBLE_EQ(p.resolved_b(), 0.5);
  EXPECT_DOUBLE_EQ(p.resolved_volume_bound(10), 100.0);
  p.epsilon = 0.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.epsilon = 0.3;
  p.delta = 0.1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.delta = 1.0 / 16;
  p.k = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_THROW(parse_mode("slow"), std::invalid_argument);
  EXPECT_EQ(parse_source("stream"), SparsifierSource::Stream);
}

TEST(Decompose, CompleteGraphStaysWhole) {
  Graph g = complete(16);
  for (DecompMode mode : {DecompMode::Exact, DecompMode::Fast}) {
    DecompResult r = decompose(g, make_params(mode, 1));
    ASSERT_EQ(r.partition.size(), 1u);
    EXPECT_EQ(r.partition[0], VertexSet::range(16));
    EXPECT_EQ(r.report.depth, 1);
    expect_sound(g, make_params(mode, 1), r);
  }
}

TEST(Decompose, DisjointCliquesSplit) {
  Graph g = gen_barbell(2, 8, 0);
  for (DecompMode mode : {DecompMode::Exact, DecompMode::Fast}) {
    DecompResult r = decompose(g, make_params(mode, 2));
    EXPECT_EQ(normalized(r.partition), Partition({VertexSet::range(8), VertexSet::range(16).minus(VertexSet::range(8))}));
    expect_sound(g, make_params(mode, 2), r);
  }
}

TEST(Decompose, BarbellBothModes) {
  Graph g = gen_barbell(2, 8, 1);
  for (DecompMode mode : {DecompMode::Exact, DecompMode::Fast}) {
    DecompResult r = decompose(g, make_params(mode, 3));
    expect_sound(g, make_params(mode, 3), r);
  }
}

TEST(Decompose, EmptyGraphGivesSingletons) {
  DecompResult r = decompose(Graph(5), make_params(DecompMode::Exact, 4));
  EXPECT_EQ(r.partition.size(), 5u);
  EXPECT_DOUBLE_EQ(r.report.verification.intercluster_volume, 0.0);
  EXPECT_TRUE(r.report.verification.passes());
  EXPECT_EQ(decompose(Graph(0), make_params(DecompMode::Exact, 4)).partition.size(), 0u);
}

TEST(Decompose, PlantedClusters) {
  Graph g = gen_planted(4, 8, 0.9, 0.02, 5);
  for (DecompMode mode : {DecompMode::Exact, DecompMode::Fast}) {
    DecompResult r = decompose(g, make_params(mode, 5));
    expect_sound(g, make_params(mode, 5), r);
    EXPECT_TRUE(r.report.verification.exact);
  }
}

TEST(Decompose, UnbalancedCutEntersSecondPhase) {
  // A heavy K16 with a unit K8 hanging off one edge: the K8 side is sparse
  // but holds under eps b / 4 of the volume.
  Graph g(24);
  for (int u = 0; u < 16; ++u) {
    for (int v = u + 1; v < 16; ++v) g.add_edge(u, v, 4.0);
  }
  for (int u = 16; u < 24; ++u) {
    for (int v = u + 1; v < 24; ++v) g.add_edge(u, v);
  }
  g.add_edge(0, 16);
  for (DecompMode mode : {DecompMode::Exact, DecompMode::Fast}) {
    DecompParams p = make_params(mode, 9);
    p.epsilon = 0.45;
    p.volume_bound = g.total_volume();
    DecompResult r = decompose(g, p);
    expect_sound(g, p, r);
    EXPECT_GE(r.report.alg2_calls, 1);
    const ClusterSchedule whole = cluster_schedule(p, r.report.schedule, g.total_volume());
    for (int h : r.report.iterations) EXPECT_LE(h, whole.inner_bound);
  }
}

TEST(Decompose, CycleIsSound) {
  // Min conductance 0.1 sits above the first threshold, so one cluster is allowed.
  Graph g(20);
  for (int v = 0; v < 20; ++v) g.add_edge(v, (v + 1) % 20);
  DecompParams p = make_params(DecompMode::Exact, 6);
  p.volume_bound = 40.0;
  DecompResult r = decompose(g, p);
  expect_sound(g, p, r);
}

TEST(Decompose, StreamSourceWithChurn) {
  Graph g = gen_planted(2, 8, 0.8, 0.05, 7);
  DecompParams p = make_params(DecompMode::Exact, 7);
  p.source = SparsifierSource::Stream;
  EdgeStream s = gen_stream(g, 1.0, 7);
  DecompResult r = decompose(g, p, &s);
  expect_sound(g, p, r);
  EXPECT_GT(r.report.sketch_memory_bytes, 0u);
  EdgeStream wrong = gen_stream(Graph(3), 0.0, 1);
  EXPECT_THROW(decompose(g, p, &wrong), std::invalid_argument);
}

TEST(Decompose, SizeGuardInExactMode) {
  Graph g = gen_regular(40, 4, 8);
  DecompParams p = make_params(DecompMode::Exact, 8);
  EXPECT_THROW(decompose(g, p), SizeGuardError);
}

TEST(Decompose, Deterministic) {
  Graph g = gen_planted(3, 6, 0.8, 0.1, 9);
  for (DecompMode mode : {DecompMode::Exact, DecompMode::Fast}) {
    DecompResult a = decompose(g, make_params(mode, 9));
    DecompResult b = decompose(g, make_params(mode, 9));
    EXPECT_EQ(a.partition, b.partition);
    EXPECT_EQ(a.report.to_json(), b.report.to_json());
  }
}

TEST(SparsifierPool, ExhaustionIsReported) {
  Graph g = complete(6);
  DecompParams p = make_params(DecompMode::Exact, 1);
  Schedule s = schedule(p, 6, g.total_volume());
  SparsifierPool pool(g, p, s, nullptr);
  EXPECT_NO_THROW(pool.alg1(1));
  EXPECT_THROW(pool.alg1(s.alg1_slots + 1), PoolExhausted);
  EXPECT_THROW(pool.alg2(p.k + 2, 1), PoolExhausted);
  EXPECT_THROW(pool.alg2(1, s.alg2_slots + 1), PoolExhausted);
  EXPECT_EQ(&pool.alg1(1), &pool.alg1(1));
  EXPECT_EQ(pool.materialized(), 1u);
}

TEST(Verify, Examples) {
  Graph k16 = complete(16);
  VerificationReport whole = verify_decomposition(k16, {VertexSet::range(16)}, 0.1, 0.5);
  EXPECT_TRUE(whole.passes());
  ASSERT_TRUE(whole.clusters[0].min_conductance.has_value());
  EXPECT_NEAR(*whole.clusters[0].min_conductance, 64.0 / 120.0, 1e-12);

  Partition singletons;
  for (int v = 0; v < 16; ++v) singletons.push_back({v});
  VerificationReport split = verify_decomposition(k16, singletons, 0.9, 0.5);
  EXPECT_FALSE(split.volume_ok);
  EXPECT_TRUE(split.expansion_ok);
  EXPECT_THROW(verify_decomposition(k16, {VertexSet::range(15)}, 0.1, 0.5), NotAPartition);
}

TEST(Verify, DetectsNonExpanderCluster) {
  Graph g = gen_barbell(2, 6, 1);
  VerificationReport r = verify_decomposition(g, {VertexSet::range(12)}, 0.3, 0.1);
  EXPECT_TRUE(r.volume_ok);
  EXPECT_FALSE(r.expansion_ok);
}

TEST(Verify, SizeLimits) {
  Graph g = complete(26);
  EXPECT_THROW(verify_decomposition(g, {VertexSet::range(26)}, 0.1, 0.3), SizeGuardError);
  VerifyOptions opt;
  opt.size_limit = 32;
  VerificationReport cert = verify_decomposition(g, {VertexSet::range(26)}, 0.1, 0.3, opt);
  EXPECT_TRUE(cert.passes());
  EXPECT_TRUE(cert.exact);
  Graph big = gen_regular(40, 10, 3);
  VerifyOptions loose;
  loose.allow_heuristic = true;
  VerificationReport heuristic = verify_decomposition(big, {VertexSet::range(40)}, 0.1, 0.05, loose);
  EXPECT_FALSE(heuristic.exact);
}

// Invariants over random inputs.

TEST(DecompProperties, RandomGraphsBothModes) {
  oracle::Rng rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + rng.below(13);
    Graph g = rng.coin(0.5) ? oracle::random_graph(rng, n, 0.1 + 0.5 * rng.unit())
                            : oracle::random_connected_graph(rng, n, 0.15);
    for (DecompMode mode : {DecompMode::Exact, DecompMode::Fast}) {
      DecompParams p = make_params(mode, rng.next());
      p.epsilon = 0.05 + 0.4 * rng.unit();
      p.k = 1 + rng.below(3);
      DecompResult r = decompose(g, p);
      SCOPED_TRACE(testing::Message() << "trial " << trial << " mode " << to_string(mode));
      expect_sound(g, p, r);
      const auto& it = r.report.iterations;
      EXPECT_LE(static_cast<int>(it.size()), p.k + 1);
    }
  }
}

TEST(DecompProperties, LooseScheduleStillTerminates) {
  // A volume bound equal to Vol(G) gives the largest phi schedule.
  oracle::Rng rng(52);
  int with_singletons = 0;
  int second_phase_calls = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 6 + rng.below(11);
    Graph g = oracle::random_connected_graph(rng, n, 0.1);
    DecompParams p = make_params(DecompMode::Exact, rng.next());
    p.epsilon = 0.2 + 0.25 * rng.unit();
    p.volume_bound = std::max(2.0, g.total_volume());
    p.k = 1 + rng.below(3);
    DecompResult r = decompose(g, p);
    SCOPED_TRACE(testing::Message() << "trial " << trial);
    expect_sound(g, p, r);
    if (r.report.singleton_count > 0) ++with_singletons;
    second_phase_calls += r.report.alg2_calls;
    const ClusterSchedule whole = cluster_schedule(p, r.report.schedule, g.total_volume());
    for (int h : r.report.iterations) EXPECT_LE(h, whole.inner_bound);
  }
  RecordProperty("runs_with_singletons", with_singletons);
  RecordProperty("second_phase_calls", second_phase_calls);
}
