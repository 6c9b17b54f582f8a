#pragma once

#include <cstdint>
#include <string>

#include "pcs/graph.hpp"
#include "pcs/stream_engine.hpp"

namespace pcs {

/// Random d-regular simple graph from the configuration model: stubs are
/// paired one at a time, pairs that would form a loop or a repeated edge are
/// redrawn, and the pairing restarts when it gets stuck. Needs n d even and d < n.
Graph gen_regular(int n, int d, std::uint64_t seed);

/// Erdos-Renyi G(n, p).
Graph gen_gnp(int n, double p, std::uint64_t seed);

/// `cliques` copies of K_size on consecutive ids plus `bridges` bridge edges.
/// Bridge t joins clique t mod (cliques - 1) to the next one, at vertex
/// offset (t / (cliques - 1)) mod size in both.
Graph gen_barbell(int cliques, int size, int bridges);

/// `clusters` blocks of `size` vertices; pairs inside a block are edges with
/// probability p_in, pairs across blocks with probability p_out.
Graph gen_planted(int clusters, int size, double p_in, double p_out, std::uint64_t seed);

struct GraphSpec {
  std::string model = "gnp";  // regular | gnp | barbell | planted
  int n = 16;
  int d = 4;
  double p = 0.5;
  int cliques = 2;
  int size = 8;
  int bridges = 1;
  double p_in = 0.9;
  double p_out = 0.02;
};

/// Dispatches on spec.model; barbell ignores the seed.
Graph generate(const GraphSpec& spec, std::uint64_t seed);

/**
   Shuffled update sequence whose net effect is exactly g (integral
   multiplicities, no loops), with round(churn |E|) insert-then-delete decoy
   pairs placed on non-edges of g. Each Delete follows its own Insert.
 */
EdgeStream gen_stream(const Graph& g, double churn, std::uint64_t seed);

}  // namespace pcs
