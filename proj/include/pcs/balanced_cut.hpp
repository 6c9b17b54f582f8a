#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "pcs/cut_enumeration.hpp"
#include "pcs/graph.hpp"

namespace pcs {

/// How an outcome was reached.
enum class CutEvidence {
  Enumeration,    // all 2^n subsets scanned
  Certificate,    // spectral lower bound exceeded the threshold
  BoundedSearch,  // exact search over every cut light enough to qualify
  Sweep,          // eigenvector sweep (heuristic)
};

std::string_view to_string(CutEvidence evidence);

/**
   Result of a balanced sparse cut call on a cluster C: either an expander
   verdict or a cut S (local ids of the cluster graph) with Vol_G(S) at most
   half of Vol_G(C).
 */
struct BalancedCutOutcome {
  bool expander = true;
  VertexSet cut;
  /// w_H(S, C \ S) / Vol_G(S).
  double sparsity = 0.0;
  /// Vol_G(S) / Vol_G(C).
  double balance = 0.0;
  CutEvidence evidence = CutEvidence::Enumeration;
};

struct ExhaustiveOptions {
  /// Clusters up to this size are enumerated outright.
  int enumeration_limit = kDefaultEnumerationLimit;
  /// Clusters above enumeration_limit and up to this size are handled by a
  /// spectral certificate, then by bounded_cut_search. Larger clusters raise
  /// SizeGuardError.
  int size_limit = kDefaultEnumerationLimit;
  std::uint64_t search_nodes = kDefaultSearchNodes;
};

/**
   Looks at every S with 0 < Vol_G(S) <= Vol_G(C) / 2 and the score
   w_H(S, C \ S) / Vol_G(S), where Vol_G uses `deg_g`. If no score is at most
   (1 + 2 delta) phi the cluster is declared an expander; otherwise the
   qualifying S of largest volume is returned, ties going to the
   lexicographically smallest set. Loops in H never cross a cut.
 */
BalancedCutOutcome exhaustive_balanced_cut(const Graph& h, std::span<const double> deg_g,
                                           double phi, double delta,
                                           const ExhaustiveOptions& options = {});

struct SweepOptions {
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  /// Hard ceiling on the 10 log2(n) / phi iteration budget.
  int iteration_cap = 100000;
};

/**
   Polynomial stand-in with the same contract shape. Repeatedly peels a sweep
   cut of the second eigenvector of H restricted to what is left (or the
   lightest connected component when that graph is disconnected), keeping the
   running union while it stays within half the volume and its score stays at
   most (1 + 2 delta) phi. Expander is returned when the first sweep finds
   nothing. Throws NumericFailure when power iteration does not settle.
 */
BalancedCutOutcome sweep_balanced_cut(const Graph& h, std::span<const double> deg_g, double phi,
                                      double delta, const SweepOptions& options = {});

/// Score w_H(S, C \ S) / Vol_G(S) of a local set S.
double cut_score(const Graph& h, std::span<const double> deg_g, const VertexSet& s);

}  // namespace pcs
