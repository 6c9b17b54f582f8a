#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcs/graph.hpp"

namespace pcs {

/**
   Half the second-smallest eigenvalue of D^-1/2 L D^-1/2, where L is the
   loop-free Laplacian of `h` and D = diag(weights). Vertices of zero weight
   are dropped first since they change neither side of a cut.

   Every cut S with positive weight on both sides has
   w_h(S) / min(weights(S), weights(S-bar)) >= the returned value, so a value
   above a threshold certifies that no cut is sparser than it. Returns +inf
   when fewer than two vertices carry positive weight.
 */
double cheeger_lower_bound(const Graph& h, std::span<const double> weights);

struct EigenvectorEstimate {
  /// Entries in the D^-1/2 scaled basis, ready for a sweep.
  std::vector<double> vector;
  double rayleigh = 0.0;
  int iterations = 0;
};

/// Power iteration for the second eigenvector of D^-1/2 L D^-1/2 (same
/// operator as cheeger_lower_bound). Every weight must be positive. Stops when
/// the Rayleigh quotient moves by less than `tolerance` between iterations and
/// throws NumericFailure if that never happens within `max_iterations`.
EigenvectorEstimate second_eigenvector(const Graph& h, std::span<const double> weights,
                                       int max_iterations, double tolerance, std::uint64_t seed);

}  // namespace pcs
