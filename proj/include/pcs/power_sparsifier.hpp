#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "pcs/graph.hpp"

namespace pcs {

/// (6(C+2) / (delta eps)) * 2 log2(n) * ln(n). Requires n >= 2.
double upsilon(int n, double epsilon, double delta, double failure_exponent);
/// Calibration replacement scale / (delta eps).
double upsilon_override(double scale, double epsilon, double delta);

struct SparsifierParams {
  double delta = 0.5;
  double epsilon = 0.5;
  double failure_exponent = 1.0;  // C
  /// When set, the oversampling factor is upsilon_override(scale, eps, delta).
  std::optional<double> upsilon_scale;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on out-of-range delta, epsilon or C.
  void validate() const;
  /// Oversampling factor for a graph on n vertices (n < 2 is treated as 2).
  double resolved_upsilon(int n) const;
};

/// min(1, ups * (1/deg_u + 1/deg_v)). Throws std::invalid_argument on a
/// non-positive degree.
double edge_probability(double deg_u, double deg_v, double ups);

/// Keeps every edge independently with its edge_probability and reweights
/// kept edges by 1/p. Self-loops are sampled like any other edge. The coin of
/// edge i depends only on (seed, i).
Graph sample(const Graph& g, const SparsifierParams& params);

/// Average keep probability over the edges of g.
double mean_keep_probability(const Graph& g, double ups);

struct SparsifierCheck {
  bool ok = true;
  /// Largest amount by which w_H(S) left the allowed band, over Vol_G(V).
  /// Zero or negative when every cut is inside the band.
  double worst_violation = -std::numeric_limits<double>::infinity();
  VertexSet witness;
};

/**
   Checks, over every non-trivial cut S of G, that
     (1 - delta) w_G(S) - eps Vol_G(S) <= w_H(S) <= (1 + delta) w_G(S) + eps Vol_G(S)
   where Vol_G(S) is the smaller side measured in G. Self-loops never cross a
   cut. Throws SizeGuardError when n > limit and std::invalid_argument when the
   vertex counts differ.
 */
SparsifierCheck check_cut_sparsifier(const Graph& g, const Graph& h, double delta, double epsilon,
                                     int limit = kDefaultEnumerationLimit);

struct PartitionCheck {
  bool ok = true;
  double worst_violation = -std::numeric_limits<double>::infinity();
  /// Index of the cluster holding the worst violation; -1 if no cluster had a cut.
  int worst_cluster = -1;
};

/// check_cut_sparsifier applied to (G{C}, H{C}) for every cluster C.
PartitionCheck check_power_partition(const Graph& g, const Graph& h, const Partition& partition,
                                     double delta, double epsilon,
                                     int limit = kDefaultEnumerationLimit);

}  // namespace pcs
