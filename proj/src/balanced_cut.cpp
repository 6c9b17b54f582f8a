#include "pcs/balanced_cut.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pcs/errors.hpp"
#include "pcs/spectral.hpp"

namespace pcs {

std::string_view to_string(CutEvidence evidence) {
  switch (evidence) {
    case CutEvidence::Enumeration:
      return "enumeration";
    case CutEvidence::Certificate:
      return "certificate";
    case CutEvidence::BoundedSearch:
      return "bounded-search";
    case CutEvidence::Sweep:
      return "sweep";
  }
  return "unknown";
}

namespace {

void check_inputs(const Graph& h, std::span<const double> deg_g, double phi, double delta) {
  if (static_cast<int>(deg_g.size()) != h.num_vertices()) {
    throw std::invalid_argument("need one original degree per cluster vertex");
  }
  if (!(phi >= 0.0) || !std::isfinite(phi)) throw std::invalid_argument("phi must be non-negative");
  if (!(delta >= 0.0 && delta <= 1.0 / 16.0)) {
    throw std::invalid_argument("delta must lie in [0, 1/16]");
  }
}

double crossing_weight(const Graph& h, const std::vector<char>& in) {
  double total = 0.0;
  for (const Edge& e : h.edges()) {
    if (in[e.u] != in[e.v]) total += e.w;
  }
  return total;
}

// Candidate bookkeeping shared by all exact strategies: largest volume wins,
// then the lexicographically smallest set.
struct Best {
  bool found = false;
  double volume = 0.0;
  double cut = 0.0;
  VertexSet set;

  void offer(const VertexSet& s, double cut_w, double vol) {
    if (!found || vol > volume || (vol == volume && s < set)) {
      found = true;
      volume = vol;
      cut = cut_w;
      set = s;
    }
  }
};

BalancedCutOutcome to_outcome(const Best& best, double total, CutEvidence evidence) {
  BalancedCutOutcome out;
  out.evidence = evidence;
  if (!best.found) return out;
  out.expander = false;
  out.cut = best.set;
  out.sparsity = best.cut / best.volume;
  out.balance = best.volume / total;
  return out;
}

}  // namespace

double cut_score(const Graph& h, std::span<const double> deg_g, const VertexSet& s) {
  if (static_cast<int>(deg_g.size()) != h.num_vertices()) {
    throw std::invalid_argument("need one original degree per cluster vertex");
  }
  std::vector<char> in(static_cast<std::size_t>(h.num_vertices()), 0);
  double vol = 0.0;
  for (VertexId v : s) {
    if (v >= h.num_vertices()) throw std::out_of_range("cut vertex outside the cluster");
    in[v] = 1;
    vol += deg_g[v];
  }
  if (!(vol > 0.0)) throw DegenerateCut("cut has zero original volume");
  return crossing_weight(h, in) / vol;
}

BalancedCutOutcome exhaustive_balanced_cut(const Graph& h, std::span<const double> deg_g,
                                           double phi, double delta,
                                           const ExhaustiveOptions& options) {
  check_inputs(h, deg_g, phi, delta);
  const int n = h.num_vertices();
  const double threshold = (1.0 + 2.0 * delta) * phi;
  const double total = std::accumulate(deg_g.begin(), deg_g.end(), 0.0);
  const double half = total / 2.0;
  auto qualifies = [&](double cut, double vol) {
    return vol > 0.0 && approx_le(vol, half) && approx_le(cut, threshold * vol);
  };
  Best best;

  if (n <= std::min(options.enumeration_limit, kHardEnumerationLimit)) {
    if (n < 2) return to_outcome(best, total, CutEvidence::Enumeration);
    CutTable table({&h}, std::vector<double>(deg_g.begin(), deg_g.end()));
    std::uint32_t best_mask = 0;
    table.for_each([&](std::uint32_t mask, std::span<const double> cuts, double vol) {
      if (!qualifies(cuts[0], vol)) return;
      if (!best.found || vol > best.volume ||
          (vol == best.volume && mask_lex_less(mask, best_mask))) {
        best.found = true;
        best.volume = vol;
        best.cut = cuts[0];
        best_mask = mask;
      }
    });
    if (best.found) {
      best.set = mask_to_set(best_mask);
      // Recompute the weight from the edge list so the report carries no
      // table round-off.
      best.cut = best.volume * cut_score(h, deg_g, best.set);
    }
    return to_outcome(best, total, CutEvidence::Enumeration);
  }

  if (n > options.size_limit) {
    throw SizeGuardError("exact balanced cut on " + std::to_string(n) +
                         " vertices exceeds the size limit of " +
                         std::to_string(options.size_limit));
  }
  // lambda_2 / 2 lower-bounds every score, so a bound strictly above the
  // threshold rules out every cut without looking at one.
  const double bound = cheeger_lower_bound(h, deg_g);
  if (bound > threshold * (1.0 + 1e-6) + 1e-12) {
    return to_outcome(best, total, CutEvidence::Certificate);
  }
  // A qualifying S has w_H(S) <= threshold * Vol_G(S) <= threshold * half.
  bounded_cut_search(
      h, deg_g, threshold * half,
      [&](const VertexSet& s, double cut, double vol) {
        if (qualifies(cut, vol)) best.offer(s, cut, vol);
      },
      options.search_nodes);
  return to_outcome(best, total, CutEvidence::BoundedSearch);
}

constexpr double kMinSweepIterations = 2000.0;

BalancedCutOutcome sweep_balanced_cut(const Graph& h, std::span<const double> deg_g, double phi,
                                      double delta, const SweepOptions& options) {
  check_inputs(h, deg_g, phi, delta);
  const int n = h.num_vertices();
  const double threshold = (1.0 + 2.0 * delta) * phi;
  const double total = std::accumulate(deg_g.begin(), deg_g.end(), 0.0);
  const double half = total / 2.0;

  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : h.edges()) {
    if (e.is_loop()) continue;
    adj[e.u].emplace_back(e.v, e.w);
    adj[e.v].emplace_back(e.u, e.w);
  }

  // Zero-volume vertices can never make a cut sparser; they stay out of S.
  std::vector<char> remaining(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) remaining[v] = deg_g[v] > 0.0;
  std::vector<char> in_union(static_cast<std::size_t>(n), 0);
  double union_volume = 0.0;
  double union_cut = 0.0;
  bool any = false;
  int round = 0;

  while (true) {
    std::vector<int> rest;
    for (int v = 0; v < n; ++v) {
      if (remaining[v]) rest.push_back(v);
    }
    if (rest.size() < 2) break;

    // Connected components of H restricted to the remaining vertices.
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::vector<double> comp_volume;
    for (int root : rest) {
      if (comp[root] >= 0) continue;
      int id = static_cast<int>(comp_volume.size());
      comp_volume.push_back(0.0);
      std::vector<int> stack{root};
      comp[root] = id;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        comp_volume[id] += deg_g[v];
        for (const auto& [u, w] : adj[v]) {
          if (remaining[u] && comp[u] < 0) {
            comp[u] = id;
            stack.push_back(u);
          }
        }
      }
    }

    std::vector<VertexId> candidate;
    if (comp_volume.size() > 1) {
      int lightest = 0;
      for (int c = 1; c < static_cast<int>(comp_volume.size()); ++c) {
        if (comp_volume[c] < comp_volume[lightest]) lightest = c;
      }
      for (int v : rest) {
        if (comp[v] == lightest) candidate.push_back(v);
      }
    } else {
      std::vector<int> local(static_cast<std::size_t>(n), -1);
      for (std::size_t i = 0; i < rest.size(); ++i) local[rest[i]] = static_cast<int>(i);
      Graph sub(static_cast<int>(rest.size()));
      std::vector<double> weights;
      weights.reserve(rest.size());
      for (int v : rest) weights.push_back(deg_g[v]);
      for (const Edge& e : h.edges()) {
        if (e.is_loop() || local[e.u] < 0 || local[e.v] < 0) continue;
        sub.add_edge(local[e.u], local[e.v], e.w);
      }
      const double rest_volume = std::accumulate(weights.begin(), weights.end(), 0.0);
      const double budget = 10.0 * std::log2(std::max(2.0, static_cast<double>(rest.size()))) /
                            std::max(phi, 1e-12);
      // Small clusters get a floor so slow mixing on tiny graphs is not a failure.
      const int max_iterations = static_cast<int>(std::min(
          static_cast<double>(options.iteration_cap), std::max(kMinSweepIterations, std::ceil(budget))));
      EigenvectorEstimate est =
          second_eigenvector(sub, weights, std::max(max_iterations, 1), options.tolerance,
                             options.seed + static_cast<std::uint64_t>(round));
      std::vector<int> order(rest.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return est.vector[a] < est.vector[b]; });

      std::vector<char> in_prefix(rest.size(), 0);
      double prefix_cut = 0.0;
      double prefix_volume = 0.0;
      bool found = false;
      double best_volume = 0.0;
      VertexSet best_set;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        int v = order[i];
        in_prefix[v] = 1;
        prefix_volume += weights[v];
        for (const auto& [u, w] : adj[rest[v]]) {
          int lu = local[u];
          if (lu < 0) continue;
          prefix_cut += in_prefix[lu] ? -w : w;
        }
        prefix_cut = std::max(prefix_cut, 0.0);
        const bool prefix_smaller = prefix_volume <= rest_volume - prefix_volume;
        const double side_volume = prefix_smaller ? prefix_volume : rest_volume - prefix_volume;
        if (!(side_volume > 0.0) || !approx_le(prefix_cut, threshold * side_volume)) continue;
        std::vector<VertexId> ids;
        for (std::size_t j = 0; j < order.size(); ++j) {
          if ((in_prefix[j] != 0) == prefix_smaller) ids.push_back(rest[j]);
        }
        VertexSet side(std::move(ids));
        if (!found || side_volume > best_volume || (side_volume == best_volume && side < best_set)) {
          found = true;
          best_volume = side_volume;
          best_set = std::move(side);
        }
      }
      if (!found) break;
      candidate.assign(best_set.begin(), best_set.end());
    }

    std::vector<char> trial = in_union;
    double trial_volume = union_volume;
    for (VertexId v : candidate) {
      trial[v] = 1;
      trial_volume += deg_g[v];
    }
    if (!approx_le(trial_volume, half)) break;
    const double trial_cut = crossing_weight(h, trial);
    if (!approx_le(trial_cut, threshold * trial_volume)) break;
    in_union = std::move(trial);
    union_volume = trial_volume;
    union_cut = trial_cut;
    any = true;
    for (VertexId v : candidate) remaining[v] = 0;
    ++round;
  }

  BalancedCutOutcome out;
  out.evidence = CutEvidence::Sweep;
  if (!any) return out;
  std::vector<VertexId> ids;
  for (int v = 0; v < n; ++v) {
    if (in_union[v]) ids.push_back(v);
  }
  out.expander = false;
  out.cut = VertexSet(std::move(ids));
  out.sparsity = union_cut / union_volume;
  out.balance = union_volume / total;
  return out;
}

}  // namespace pcs
