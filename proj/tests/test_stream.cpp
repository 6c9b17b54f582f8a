#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "pcs/generators.hpp"
#include "pcs/prf.hpp"
#include "pcs/stream_engine.hpp"

using namespace pcs;

namespace {

SparsifierParams reduced(std::uint64_t seed, double scale = 0.5) {
  SparsifierParams p;
  p.epsilon = 0.5;
  p.delta = 0.5;
  p.upsilon_scale = scale;  // ups = scale / (delta eps) = 4 scale
  p.seed = seed;
  return p;
}

StreamState run(const EdgeStream& s, const SparsifierParams& p) {
  StreamState state(s.n, p);
  state.process(s.updates);
  return state;
}

Graph oracle_sparsifier(const Graph& g, const SparsifierParams& p) {
  const std::uint64_t key = level_seed(p);
  return oracle::level_sparsifier(g, p.resolved_upsilon(g.num_vertices()), max_level(g.num_vertices()),
                                  [&](int u, int v) { return edge_level(key, u, v); })
      .canonical();
}

}  // namespace

TEST(EdgeLevel, SymmetricAndDeterministic) {
  for (VertexId u = 0; u < 40; ++u) {
    for (VertexId v = 0; v < 40; ++v) {
      if (u == v) continue;
      EXPECT_EQ(edge_level(17, u, v), edge_level(17, v, u));
      EXPECT_EQ(edge_level(17, u, v), edge_level(17, u, v));
    }
  }
}

TEST(EdgeLevel, GeometricTail) {
  const int samples = 1000000;
  std::vector<int> at_least(12, 0);
  for (int i = 0; i < samples; ++i) {
    int level = edge_level(12345, i / 1000, 1000 + i % 1000);
    for (int t = 0; t <= std::min(level, 11); ++t) ++at_least[t];
  }
  for (int t = 0; t <= 10; ++t) {
    const double q = std::ldexp(1.0, -t);
    const double sigma = std::sqrt(samples * q * (1 - q));
    EXPECT_NEAR(at_least[t], samples * q, 3 * sigma + 1e-9) << "level " << t;
  }
}

TEST(VertexLevel, Examples) {
  EXPECT_EQ(vertex_level(150, 100, 10), 0);
  EXPECT_EQ(vertex_level(800, 100, 10), 2);
  EXPECT_EQ(vertex_level(200, 100, 10), 0);
  EXPECT_EQ(vertex_level(1e9, 100, 3), 3);
  EXPECT_EQ(max_level(1), 0);
  EXPECT_EQ(max_level(2), 1);
  EXPECT_EQ(max_level(64), 6);
  EXPECT_EQ(max_level(65), 7);
}

TEST(StreamState, InsertDeleteRestoresState) {
  StreamState state(10, reduced(1));
  auto before = state.serialize();
  state.process({UpdateOp::Insert, 2, 7});
  EXPECT_NE(state.serialize(), before);
  state.process({UpdateOp::Delete, 2, 7});
  EXPECT_EQ(state.serialize(), before);
}

TEST(StreamState, StarDegree) {
  StreamState state(6, reduced(1));
  for (VertexId v = 1; v <= 5; ++v) state.process({UpdateOp::Insert, 0, v});
  EXPECT_EQ(state.degree(0), 5);
  EXPECT_EQ(state.degree(3), 1);
}

TEST(StreamState, RejectsLoopsAndBadIds) {
  StreamState state(4, reduced(1));
  EXPECT_THROW(state.process({UpdateOp::Insert, 2, 2}), std::invalid_argument);
  EXPECT_THROW(state.process({UpdateOp::Insert, 2, 4}), std::out_of_range);
}

TEST(StreamState, SpaceMatchesParameters) {
  for (int n : {2, 9, 64}) {
    StreamState state(n, reduced(3));
    EXPECT_EQ(state.bucket_count(), state.expected_bucket_count());
    EXPECT_EQ(state.sketch_sparsity(),
              std::min<std::uint64_t>(n, static_cast<std::uint64_t>(std::ceil(8 * state.upsilon()))));
  }
}

TEST(StreamState, LowDegreesRecoverTheGraphItself) {
  // Every degree is at most 2 ups, so all vertex levels are 0 and G' = G.
  oracle::Rng rng(21);
  Graph g = oracle::random_graph(rng, 12, 0.2);
  SparsifierParams p = reduced(4, 2.0);  // ups = 8
  ASSERT_LE(*std::max_element(g.degrees().begin(), g.degrees().end()), 2 * p.resolved_upsilon(12));
  StreamState state = run(gen_stream(g, 0.5, 9), p);
  auto h = state.recover_sparsifier();
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(*h, g.canonical());
  EXPECT_EQ(sample_offline(g, p), g.canonical());
}

TEST(SampleOffline, EmptyGraph) {
  EXPECT_EQ(sample_offline(Graph(5), reduced(1)), Graph(5));
  auto h = StreamState(5, reduced(1)).recover_sparsifier();
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(*h, Graph(5));
}

TEST(SampleOffline, MatchesDefinition) {
  oracle::Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    Graph g = oracle::random_graph(rng, 30, 0.3, 2);
    SparsifierParams p = reduced(rng.next(), 0.25);
    EXPECT_EQ(sample_offline(g, p), oracle_sparsifier(g, p));
  }
}

TEST(StreamIo, RoundTripAndErrors) {
  EdgeStream s{4, {{UpdateOp::Insert, 0, 1}, {UpdateOp::Insert, 2, 3}, {UpdateOp::Delete, 0, 1}}};
  std::stringstream buffer;
  write_stream(buffer, s);
  EdgeStream back = read_stream(buffer);
  EXPECT_EQ(back.n, 4);
  EXPECT_EQ(back.updates, s.updates);
  std::stringstream bad("4\n* 0 1\n");
  EXPECT_THROW(read_stream(bad), std::runtime_error);
  EXPECT_THROW(load_stream("/nonexistent/stream.txt"), std::runtime_error);
}

// Invariants.

TEST(StreamProperties, StateDependsOnlyOnNetEdges) {
  oracle::Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = oracle::random_graph(rng, 20, 0.3);
    SparsifierParams p = reduced(rng.next());
    auto plain = run(gen_stream(g, 0.0, rng.next()), p).serialize();
    auto churned = run(gen_stream(g, 1.5, rng.next()), p).serialize();
    EXPECT_EQ(plain, churned);
  }
}

TEST(StreamProperties, RecoveryMatchesOfflineSampling) {
  oracle::Rng rng(24);
  int fails = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = oracle::random_graph(rng, 64, 0.15);
    SparsifierParams p = reduced(rng.next());
    auto h = run(gen_stream(g, 0.5, rng.next()), p).recover_sparsifier();
    if (!h) {
      ++fails;
      continue;
    }
    Graph expected = sample_offline(g, p);
    EXPECT_EQ(*h, expected);
    EXPECT_EQ(*h, oracle_sparsifier(g, p));
  }
  EXPECT_LE(fails, 1);
}

TEST(StreamProperties, FailRateAtReducedOversampling) {
  oracle::Rng rng(25);
  const int runs = 1000;
  int fails = 0;
  for (int trial = 0; trial < runs; ++trial) {
    Graph g = oracle::random_graph(rng, 64, 0.15);
    SparsifierParams p = reduced(rng.next());
    if (!run(gen_stream(g, 0.0, rng.next()), p).recover_sparsifier()) ++fails;
  }
  RecordProperty("fail_rate", std::to_string(static_cast<double>(fails) / runs));
  EXPECT_LE(fails, runs / 100);
}
