#include "pcs/power_sparsifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pcs/cut_enumeration.hpp"
#include "pcs/errors.hpp"
#include "pcs/prf.hpp"

namespace pcs {

double upsilon(int n, double epsilon, double delta, double failure_exponent) {
  if (n < 2) throw std::invalid_argument("upsilon needs n >= 2");
  if (!(epsilon > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument("upsilon needs positive epsilon and delta");
  }
  const double ln_n = std::log(static_cast<double>(n));
  const double log2_n = std::log2(static_cast<double>(n));
  return 6.0 * (failure_exponent + 2.0) / (delta * epsilon) * 2.0 * log2_n * ln_n;
}

double upsilon_override(double scale, double epsilon, double delta) {
  if (!(scale > 0.0)) throw std::invalid_argument("upsilon scale must be positive");
  if (!(epsilon > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument("upsilon needs positive epsilon and delta");
  }
  return scale / (delta * epsilon);
}

void SparsifierParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(failure_exponent > 0.0)) throw std::invalid_argument("failure exponent C must be positive");
  if (upsilon_scale && !(*upsilon_scale > 0.0)) {
    throw std::invalid_argument("upsilon scale must be positive");
  }
}

double SparsifierParams::resolved_upsilon(int n) const {
  if (upsilon_scale) return upsilon_override(*upsilon_scale, epsilon, delta);
  return upsilon(std::max(n, 2), epsilon, delta, failure_exponent);
}

double edge_probability(double deg_u, double deg_v, double ups) {
  if (!(deg_u > 0.0) || !(deg_v > 0.0)) {
    throw std::invalid_argument("edge probability needs positive endpoint degrees");
  }
  return std::min(1.0, ups * (1.0 / deg_u + 1.0 / deg_v));
}

Graph sample(const Graph& g, const SparsifierParams& params) {
  params.validate();
  const double ups = params.resolved_upsilon(g.num_vertices());
  const std::uint64_t coin_seed = derive_seed(params.seed, "edge-coins");
  Graph h(g.num_vertices());
  const auto edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    double p = edge_probability(g.degree(e.u), g.degree(e.v), ups);
    if (p >= 1.0) {
      h.add_edge(e.u, e.v, e.w);
    } else if (to_unit_interval(prf(coin_seed, i)) < p) {
      h.add_edge(e.u, e.v, e.w / p);
    }
  }
  return h;
}

double mean_keep_probability(const Graph& g, double ups) {
  if (g.num_edges() == 0) return 1.0;
  double total = 0.0;
  for (const Edge& e : g.edges()) total += edge_probability(g.degree(e.u), g.degree(e.v), ups);
  return total / static_cast<double>(g.num_edges());
}

SparsifierCheck check_cut_sparsifier(const Graph& g, const Graph& h, double delta, double epsilon,
                                     int limit) {
  if (g.num_vertices() != h.num_vertices()) {
    throw std::invalid_argument("sparsifier and graph have different vertex counts");
  }
  const int n = g.num_vertices();
  if (n > std::min(limit, kHardEnumerationLimit)) {
    throw SizeGuardError("cut-sparsifier check over " + std::to_string(n) +
                         " vertices exceeds the limit of " + std::to_string(limit));
  }
  SparsifierCheck result;
  if (n < 2) return result;
  CutTable table({&g, &h}, std::vector<double>(g.degrees().begin(), g.degrees().end()));
  const double total = table.total_volume();
  const double scale = std::max(total, 1.0);
  std::uint32_t worst_mask = 0;
  table.for_each(
      [&](std::uint32_t mask, std::span<const double> cuts, double vol) {
        const double smaller = std::min(vol, total - vol);
        const double w_g = cuts[0];
        const double w_h = cuts[1];
        const double lower = (1.0 - delta) * w_g - epsilon * smaller;
        const double upper = (1.0 + delta) * w_g + epsilon * smaller;
        if (!approx_le(lower, w_h) || !approx_le(w_h, upper)) result.ok = false;
        const double excess = std::max(lower - w_h, w_h - upper) / scale;
        if (excess > result.worst_violation ||
            (excess == result.worst_violation && mask_lex_less(mask, worst_mask))) {
          result.worst_violation = excess;
          worst_mask = mask;
        }
      },
      /*exclude_last=*/true);
  if (worst_mask != 0) result.witness = mask_to_set(worst_mask);
  return result;
}

PartitionCheck check_power_partition(const Graph& g, const Graph& h, const Partition& partition,
                                     double delta, double epsilon, int limit) {
  if (g.num_vertices() != h.num_vertices()) {
    throw std::invalid_argument("sparsifier and graph have different vertex counts");
  }
  validate_partition(g.num_vertices(), partition);
  PartitionCheck result;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (partition[i].size() < 2) continue;
    InducedGraph gc = induce_with_loops(g, partition[i]);
    InducedGraph hc = induce_with_loops(h, partition[i]);
    SparsifierCheck check = check_cut_sparsifier(gc.graph, hc.graph, delta, epsilon, limit);
    if (!check.ok) result.ok = false;
    if (check.worst_violation > result.worst_violation) {
      result.worst_violation = check.worst_violation;
      result.worst_cluster = static_cast<int>(i);
    }
  }
  return result;
}

}  // namespace pcs
