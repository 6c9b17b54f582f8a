#include "pcs/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pcs/prf.hpp"

namespace pcs {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

template <class T>
void shuffle(std::vector<T>& items, SplitMix& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.below(i)]);
  }
}

}  // namespace

Graph gen_regular(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 0) throw std::invalid_argument("regular graph needs n >= 1 and d >= 0");
  if (d >= n && d > 0) throw std::invalid_argument("regular graph needs d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0) throw std::invalid_argument("regular graph needs n d even");

  constexpr int kRestarts = 1000;
  constexpr int kRedraws = 200;
  SplitMix rng(derive_seed(seed, "regular"));
  for (int restart = 0; restart < kRestarts; ++restart) {
    std::vector<VertexId> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * d);
    for (VertexId v = 0; v < n; ++v) stubs.insert(stubs.end(), static_cast<std::size_t>(d), v);
    std::set<std::pair<VertexId, VertexId>> edges;
    bool stuck = false;
    while (!stubs.empty() && !stuck) {
      stuck = true;
      for (int attempt = 0; attempt < kRedraws; ++attempt) {
        std::size_t i = rng.below(stubs.size());
        std::size_t j = rng.below(stubs.size());
        VertexId u = stubs[i];
        VertexId v = stubs[j];
        if (i == j || u == v || edges.count({std::min(u, v), std::max(u, v)})) continue;
        edges.insert({std::min(u, v), std::max(u, v)});
        // Remove the higher index first so the lower one stays valid.
        for (std::size_t k : {std::max(i, j), std::min(i, j)}) {
          stubs[k] = stubs.back();
          stubs.pop_back();
        }
        stuck = false;
        break;
      }
    }
    if (stuck) continue;
    Graph g(n);
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
  }
  throw std::runtime_error("configuration model failed to produce a simple regular graph");
}

Graph gen_gnp(int n, double p, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("gnp needs n >= 0");
  check_probability(p, "p");
  const std::uint64_t key = derive_seed(seed, "gnp");
  Graph g(n);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (to_unit_interval(prf(key, pair_key(u, v))) < p) g.add_edge(u, v);
    }
  }
  return g;
}

Graph gen_barbell(int cliques, int size, int bridges) {
  if (cliques < 1 || size < 1 || bridges < 0) {
    throw std::invalid_argument("barbell needs cliques >= 1, size >= 1, bridges >= 0");
  }
  if (bridges > 0 && cliques < 2) throw std::invalid_argument("bridges need at least two cliques");
  if (bridges > (cliques - 1) * size) {
    throw std::invalid_argument("barbell bridges would repeat an edge");
  }
  Graph g(cliques * size);
  for (int c = 0; c < cliques; ++c) {
    for (int a = 0; a < size; ++a) {
      for (int b = a + 1; b < size; ++b) g.add_edge(c * size + a, c * size + b);
    }
  }
  for (int t = 0; t < bridges; ++t) {
    int from = t % (cliques - 1);
    int offset = (t / (cliques - 1)) % size;
    g.add_edge(from * size + offset, (from + 1) * size + offset);
  }
  return g;
}

Graph gen_planted(int clusters, int size, double p_in, double p_out, std::uint64_t seed) {
  if (clusters < 1 || size < 1) throw std::invalid_argument("planted needs clusters, size >= 1");
  check_probability(p_in, "p_in");
  check_probability(p_out, "p_out");
  const int n = clusters * size;
  const std::uint64_t key = derive_seed(seed, "planted");
  Graph g(n);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      double p = u / size == v / size ? p_in : p_out;
      if (to_unit_interval(prf(key, pair_key(u, v))) < p) g.add_edge(u, v);
    }
  }
  return g;
}

Graph generate(const GraphSpec& spec, std::uint64_t seed) {
  if (spec.model == "regular") return gen_regular(spec.n, spec.d, seed);
  if (spec.model == "gnp") return gen_gnp(spec.n, spec.p, seed);
  if (spec.model == "barbell") return gen_barbell(spec.cliques, spec.size, spec.bridges);
  if (spec.model == "planted") return gen_planted(spec.cliques, spec.size, spec.p_in, spec.p_out, seed);
  throw std::invalid_argument("unknown graph model '" + spec.model +
                              "' (expected regular|gnp|barbell|planted)");
}

EdgeStream gen_stream(const Graph& g, double churn, std::uint64_t seed) {
  if (!(churn >= 0.0) || !std::isfinite(churn)) throw std::invalid_argument("churn must be non-negative");
  const int n = g.num_vertices();
  Graph net = g.canonical();

  // Token i < real is an edge insertion; the rest come in decoy pairs.
  struct Token {
    VertexId u;
    VertexId v;
    long long decoy;  // -1 for a real edge
  };
  std::vector<Token> tokens;
  std::set<std::pair<VertexId, VertexId>> present;
  std::size_t edge_count = 0;
  for (const Edge& e : net.edges()) {
    if (e.is_loop()) throw std::invalid_argument("streams cannot carry self-loops");
    if (e.w != std::round(e.w)) throw std::invalid_argument("stream edges need integral multiplicities");
    present.insert({e.u, e.v});
    for (int c = 0; c < static_cast<int>(e.w); ++c) {
      tokens.push_back({e.u, e.v, -1});
      ++edge_count;
    }
  }

  SplitMix rng(derive_seed(seed, "stream"));
  const auto decoys = static_cast<long long>(std::llround(churn * static_cast<double>(edge_count)));
  if (decoys > 0) {
    std::vector<std::pair<VertexId, VertexId>> free_pairs;
    for (VertexId u = 0; u < n; ++u) {
      for (VertexId v = u + 1; v < n; ++v) {
        if (!present.count({u, v})) free_pairs.emplace_back(u, v);
      }
    }
    if (free_pairs.empty()) throw std::invalid_argument("no non-edges available for decoy updates");
    for (long long d = 0; d < decoys; ++d) {
      auto [u, v] = free_pairs[rng.below(free_pairs.size())];
      tokens.push_back({u, v, d});
      tokens.push_back({u, v, d});
    }
  }
  shuffle(tokens, rng);

  EdgeStream stream;
  stream.n = n;
  stream.updates.reserve(tokens.size());
  std::vector<char> opened(static_cast<std::size_t>(std::max<long long>(decoys, 0)), 0);
  for (const Token& t : tokens) {
    UpdateOp op = UpdateOp::Insert;
    if (t.decoy >= 0) {
      op = opened[t.decoy] ? UpdateOp::Delete : UpdateOp::Insert;
      opened[t.decoy] = 1;
    }
    stream.updates.push_back({op, t.u, t.v});
  }
  return stream;
}

}  // namespace pcs
