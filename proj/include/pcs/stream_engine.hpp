#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcs/graph.hpp"
#include "pcs/power_sparsifier.hpp"
#include "pcs/sparse_recovery.hpp"

namespace pcs {

enum class UpdateOp { Insert, Delete };

struct StreamUpdate {
  UpdateOp op = UpdateOp::Insert;
  VertexId u = 0;
  VertexId v = 0;

  friend bool operator==(const StreamUpdate&, const StreamUpdate&) = default;
};

struct EdgeStream {
  int n = 0;
  std::vector<StreamUpdate> updates;
};

// Stream text format: first line "n", then one update per line, "+ u v" or "- u v".
EdgeStream read_stream(std::istream& in);
void write_stream(std::ostream& out, const EdgeStream& stream);
EdgeStream load_stream(const std::string& path);
void save_stream(const std::string& path, const EdgeStream& stream);

/// Highest level index: ceil(log2 n), and 0 for n <= 1.
int max_level(int n);

/// Level of an unordered pair: the number of leading one bits of a keyed hash
/// of the pair, so Pr[level >= i] = 2^-i. Symmetric in (u, v).
int edge_level(std::uint64_t seed, VertexId u, VertexId v);

/// Level used to recover v's neighbourhood: the largest j in [0, max_level]
/// with 2^j * 2 ups <= deg, or 0 when deg < 2 ups.
int vertex_level(double deg, double ups, int top_level);

/**
   Memory of the one-pass streaming algorithm: an exact degree counter per
   vertex and, for every level i in [0, L] and vertex v, a sparse-recovery
   sketch of v's neighbourhood among edges of level >= i.

   Sketch sparsity is min(n, ceil(8 ups)) and failure probability n^-(C+3).
 */
class StreamState {
 public:
  StreamState(int n, const SparsifierParams& params);

  int num_vertices() const { return n_; }
  int top_level() const { return top_level_; }
  double upsilon() const { return upsilon_; }
  const SparsifierParams& params() const { return params_; }
  const SketchParams& sketch_params(int level, VertexId v) const;
  std::uint64_t sketch_sparsity() const { return sparsity_; }
  double sketch_failure_prob() const { return failure_prob_; }

  int level_of(VertexId u, VertexId v) const { return edge_level(level_seed_, u, v); }
  std::int64_t degree(VertexId v) const { return deg_.at(static_cast<std::size_t>(v)); }

  /// Throws std::invalid_argument on a self-loop and std::out_of_range on bad ids.
  void process(const StreamUpdate& update);
  void process(std::span<const StreamUpdate> updates);

  /// The weighted graph G' (canonical form), or std::nullopt when some
  /// vertex's sketch fails to recover.
  std::optional<Graph> recover_sparsifier() const;

  std::size_t bucket_count() const;
  /// n (L+1) 2k R: the bucket count implied by the parameters.
  std::size_t expected_bucket_count() const;
  std::size_t memory_bytes() const;
  std::vector<std::uint8_t> serialize() const;

 private:
  std::size_t slot(int level, VertexId v) const {
    return static_cast<std::size_t>(level) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(v);
  }

  int n_;
  SparsifierParams params_;
  double upsilon_;
  int top_level_;
  std::uint64_t sparsity_;
  double failure_prob_;
  std::uint64_t level_seed_;
  std::vector<std::int64_t> deg_;
  std::vector<SparseRecoverySketch> sketches_;
};

/// Seed of the edge-level hash used by states built from these parameters.
std::uint64_t level_seed(const SparsifierParams& params);

/// G' computed directly from the final graph with the same hash draws as a
/// StreamState built from `params`. g must be loop-free with integral weights
/// (edge multiplicities).
Graph sample_offline(const Graph& g, const SparsifierParams& params);

}  // namespace pcs
