#include "pcs/expander_decomp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pcs/errors.hpp"
#include "pcs/power_sparsifier.hpp"
#include "pcs/prf.hpp"
#include "pcs/spectral.hpp"

namespace pcs {

std::string_view to_string(DecompMode mode) {
  return mode == DecompMode::Exact ? "exact" : "fast";
}

std::string_view to_string(SparsifierSource source) {
  return source == SparsifierSource::Offline ? "offline" : "stream";
}

DecompMode parse_mode(std::string_view text) {
  if (text == "exact") return DecompMode::Exact;
  if (text == "fast") return DecompMode::Fast;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected exact|fast)");
}

SparsifierSource parse_source(std::string_view text) {
  if (text == "offline") return SparsifierSource::Offline;
  if (text == "stream") return SparsifierSource::Stream;
  throw std::invalid_argument("unknown sparsifier source '" + std::string(text) +
                              "' (expected offline|stream)");
}

double DecompParams::resolved_alpha() const { return alpha.value_or(1.0 + 5.0 * delta); }

double DecompParams::resolved_b() const {
  return b.value_or(mode == DecompMode::Exact ? 1.0 : 0.5);
}

double DecompParams::resolved_volume_bound(int n) const {
  return volume_bound.value_or(std::max(4.0, static_cast<double>(n) * static_cast<double>(n)));
}

void DecompParams::validate() const {
  // The volume argument needs eps / 2 <= 1/4; eps < 1/2 keeps it intact.
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (!(delta > 0.0 && delta <= 1.0 / 16.0)) throw std::invalid_argument("delta must lie in (0, 1/16]");
  if (!(failure_exponent > 0.0)) throw std::invalid_argument("failure exponent C must be positive");
  if (!(resolved_alpha() >= 1.0)) throw std::invalid_argument("alpha must be at least 1");
  const double bb = resolved_b();
  if (!(bb > 0.0 && bb <= 1.0)) throw std::invalid_argument("b must lie in (0, 1]");
  if (volume_bound && !(*volume_bound > 1.0)) throw std::invalid_argument("volume bound must exceed 1");
  if (upsilon_scale && !(*upsilon_scale > 0.0)) throw std::invalid_argument("upsilon scale must be positive");
  if (enumeration_limit < 1 || enumeration_limit > kHardEnumerationLimit) {
    throw std::invalid_argument("enumeration limit must lie in [1, 32]");
  }
  if (exact_size_limit < enumeration_limit) {
    throw std::invalid_argument("exact size limit must be at least the enumeration limit");
  }
  if (stream_retries < 0) throw std::invalid_argument("stream retries must be non-negative");
}

Schedule schedule(const DecompParams& params, int n, double graph_volume) {
  Schedule s;
  s.alpha = params.resolved_alpha();
  s.b = params.resolved_b();
  s.volume_bound = params.resolved_volume_bound(n);
  const double log_bound = std::log2(s.volume_bound);
  s.phi.resize(static_cast<std::size_t>(params.k) + 2);
  s.psi.resize(s.phi.size());
  s.phi[0] = params.epsilon / (2.0 * log_bound * s.alpha);
  for (std::size_t j = 1; j < s.phi.size(); ++j) s.phi[j] = s.phi[j - 1] / s.alpha;
  for (std::size_t j = 0; j < s.phi.size(); ++j) s.psi[j] = params.delta * s.phi[j];
  s.T = std::ceil(std::pow(params.epsilon * graph_volume, 1.0 / params.k));
  const double shrink = std::log2(1.0 / (1.0 - params.epsilon * s.b / 4.0));
  s.alg1_slots = static_cast<int>(std::ceil(log_bound / shrink)) + 2;
  s.alg2_slots = static_cast<int>(std::floor(s.T / s.b)) + 2;
  s.depth_bound = graph_volume > 1.0 ? std::log2(graph_volume) / shrink : 0.0;
  return s;
}

ClusterSchedule cluster_schedule(const DecompParams& params, const Schedule& s,
                                 double cluster_volume) {
  ClusterSchedule c;
  const double m1 = params.epsilon * cluster_volume;
  c.tau = std::pow(m1, 1.0 / params.k);
  c.m.assign(static_cast<std::size_t>(params.k) + 2, 0.0);
  c.m[1] = m1;
  for (int j = 2; j <= params.k; ++j) c.m[j] = c.m[j - 1] / c.tau;
  c.m[params.k + 1] = 1.0;
  c.inner_bound = static_cast<int>(std::floor(c.tau / s.b)) + 1;
  return c;
}

SparsifierPool::SparsifierPool(const Graph& g, const DecompParams& params, const Schedule& s,
                               const EdgeStream* stream)
    : g_(g), params_(params), schedule_(s), stream_(stream) {}

const Graph& SparsifierPool::alg1(int depth) {
  if (depth < 1 || depth > schedule_.alg1_slots) {
    throw PoolExhausted(fmt::format("recursion depth {} exceeds the {} provisioned sparsifiers",
                                    depth, schedule_.alg1_slots));
  }
  return materialize(0, depth, schedule_.psi[0]);
}

const Graph& SparsifierPool::alg2(int j, int h) {
  if (j < 1 || j > params_.k + 1) {
    throw PoolExhausted(fmt::format("outer iteration {} exceeds k + 1 = {}", j, params_.k + 1));
  }
  if (h < 1 || h > schedule_.alg2_slots) {
    throw PoolExhausted(fmt::format("inner iteration {} at level {} exceeds the {} provisioned sparsifiers",
                                    h, j, schedule_.alg2_slots));
  }
  return materialize(j, h, schedule_.psi[j]);
}

const Graph& SparsifierPool::materialize(int level, int index, double psi) {
  auto key = std::make_pair(level, index);
  if (auto it = slots_.find(key); it != slots_.end()) return it->second;

  SparsifierParams sp;
  sp.delta = params_.delta;
  sp.epsilon = psi;
  sp.failure_exponent = params_.failure_exponent;
  sp.upsilon_scale = params_.upsilon_scale;
  const std::uint64_t slot_seed =
      derive_seed(derive_seed(params_.seed, "sparsifier-pool"),
                  (static_cast<std::uint64_t>(level) << 32) | static_cast<std::uint64_t>(index));

  if (params_.source == SparsifierSource::Offline) {
    sp.seed = slot_seed;
    return slots_.emplace(key, sample(g_, sp)).first->second;
  }
  for (int attempt = 0; attempt <= params_.stream_retries; ++attempt) {
    sp.seed = derive_seed(slot_seed, static_cast<std::uint64_t>(attempt));
    StreamState state(std::max(g_.num_vertices(), 1), sp);
    state.process(stream_->updates);
    sketch_memory_ += state.memory_bytes();
    if (auto recovered = state.recover_sparsifier()) {
      return slots_.emplace(key, std::move(*recovered)).first->second;
    }
    ++stream_failures_;
  }
  throw SketchFailure(fmt::format("sparsifier slot ({}, {}) failed to recover after {} attempts",
                                  level, index, params_.stream_retries + 1));
}

namespace {

std::vector<char> indicator(int n, const VertexSet& s) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (VertexId v : s) in[v] = 1;
  return in;
}

// Weight of edges with one endpoint in s and the other in c \ s.
double boundary_inside(const Graph& g, const std::vector<char>& in_c, const std::vector<char>& in_s) {
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    if (in_c[e.u] && in_c[e.v] && in_s[e.u] != in_s[e.v]) total += e.w;
  }
  return total;
}

class Decomposer {
 public:
  Decomposer(const Graph& g, const DecompParams& params, const Schedule& s, SparsifierPool& pool,
             RunReport& report)
      : g_(g), params_(params), s_(s), pool_(pool), report_(report) {}

  Partition low_depth(const VertexSet& c, int depth) {
    report_.depth = std::max(report_.depth, depth);
    const Graph& h = pool_.alg1(depth);
    BalancedCutOutcome out = balanced_cut(h, c, s_.phi[0], fmt::format("depth {}", depth));
    if (out.expander) return {c};
    VertexSet cut = to_global(c, out.cut);
    if (volume(g_, cut) >= params_.epsilon * s_.b / 4.0 * volume(g_, c)) {
      Partition left = low_depth(cut, depth + 1);
      Partition right = low_depth(c.minus(cut), depth + 1);
      left.insert(left.end(), right.begin(), right.end());
      return left;
    }
    return unbalanced(c);
  }

  Partition unbalanced(const VertexSet& c0) {
    ++report_.alg2_calls;
    const double vol_c0 = volume(g_, c0);
    ClusterSchedule cs = cluster_schedule(params_, s_, vol_c0);
    VertexSet c = c0;
    for (int j = 1;; ++j) {
      report_.outer_iterations = std::max(report_.outer_iterations, j);
      if (j > params_.k + 1) {
        violation(fmt::format("outer loop reached iteration {} > k + 1", j));
      }
      if (static_cast<int>(report_.iterations.size()) < j) report_.iterations.resize(j, 0);
      const VertexSet start = c;
      const double vol_start = volume(g_, start);
      const auto in_start = indicator(g_.num_vertices(), start);
      std::vector<char> removed(static_cast<std::size_t>(g_.num_vertices()), 0);
      double removed_volume = 0.0;
      bool broke = false;
      for (int h = 1; !broke; ++h) {
        report_.iterations[j - 1] = std::max(report_.iterations[j - 1], h);
        if (h == cs.inner_bound + 1) {
          violation(fmt::format("inner loop at outer iteration {} passed floor(tau/b)+1 = {}", j,
                                cs.inner_bound));
        }
        const double phi = j <= params_.k + 1 ? s_.phi[j] : s_.phi.back();
        const Graph& sparsifier = pool_.alg2(j, h);
        BalancedCutOutcome out = balanced_cut(sparsifier, c, phi, fmt::format("({}, {})", j, h));
        if (out.expander) {
          const double lost = vol_c0 - volume(g_, c);
          if (!approx_le(lost, params_.epsilon / 2.0 * vol_c0)) {
            violation(fmt::format("singleton volume {} exceeds eps/2 Vol(C0) = {}", lost,
                                  params_.epsilon / 2.0 * vol_c0));
          }
          Partition result{c};
          for (VertexId v : c0.minus(c)) result.push_back(VertexSet{v});
          return result;
        }
        VertexSet cut = to_global(c, out.cut);
        const double cut_volume = volume(g_, cut);
        if (cut_volume >= s_.b / 2.0 * cs.m[std::min(j, params_.k + 1)]) {
          c = c.minus(cut);
          for (VertexId v : cut) removed[v] = 1;
          removed_volume += cut_volume;
          // Cuts of this outer iteration compose while they stay under half
          // of the cluster they started from.
          if (approx_le(removed_volume, vol_start / 2.0) && removed_volume > 0.0) {
            double score = boundary_inside(g_, in_start, removed) / removed_volume;
            if (!approx_le(score, s_.phi[j - 1])) {
              violation(fmt::format("union of cuts at outer iteration {} has sparsity {} > phi_{} = {}",
                                    j, score, j - 1, s_.phi[j - 1]));
            }
          }
        } else {
          broke = true;
        }
      }
    }
  }

 private:
  VertexSet to_global(const VertexSet& c, const VertexSet& local) const {
    std::vector<VertexId> ids;
    ids.reserve(local.size());
    for (VertexId v : local) ids.push_back(c[v]);
    return VertexSet(std::move(ids));
  }

  BalancedCutOutcome balanced_cut(const Graph& sparsifier, const VertexSet& c, double phi,
                                  const std::string& where) {
    InducedGraph hc = induce_with_loops(sparsifier, c);
    std::vector<double> deg = restricted_degrees(g_, c);
    ExhaustiveOptions exact;
    exact.enumeration_limit = params_.enumeration_limit;
    exact.size_limit = params_.exact_size_limit;
    exact.search_nodes = params_.search_nodes;
    BalancedCutOutcome out;
    if (params_.mode == DecompMode::Exact) {
      out = exhaustive_balanced_cut(hc.graph, deg, phi, params_.delta, exact);
    } else {
      SweepOptions sweep;
      sweep.seed = derive_seed(params_.seed, static_cast<std::uint64_t>(c[0]));
      try {
        out = sweep_balanced_cut(hc.graph, deg, phi, params_.delta, sweep);
      } catch (const NumericFailure&) {
        if (static_cast<int>(c.size()) > params_.exact_size_limit) throw;
        out = exhaustive_balanced_cut(hc.graph, deg, phi, params_.delta, exact);
      }
    }
    if (!out.expander) {
      // The driver relies on every returned cut being alpha phi sparse in G{C}.
      const auto in_c = indicator(g_.num_vertices(), c);
      const auto in_s = indicator(g_.num_vertices(), to_global(c, out.cut));
      double vol_s = 0.0;
      for (VertexId v : out.cut) vol_s += deg[v];
      const double score = boundary_inside(g_, in_c, in_s) / vol_s;
      if (!approx_le(score, s_.alpha * phi)) {
        violation(fmt::format("cut at {} has sparsity {} in G > alpha phi = {}", where, score,
                              s_.alpha * phi));
      }
    }
    return out;
  }

  void violation(std::string message) { report_.violations.push_back(std::move(message)); }

  const Graph& g_;
  const DecompParams& params_;
  const Schedule& s_;
  SparsifierPool& pool_;
  RunReport& report_;
};

}  // namespace

VerificationReport verify_decomposition(const Graph& g, const Partition& partition, double epsilon,
                                        double phi, const VerifyOptions& options) {
  validate_partition(g.num_vertices(), partition);
  VerificationReport r;
  r.epsilon = epsilon;
  r.phi = phi;
  r.total_volume = g.total_volume();
  r.intercluster_volume = intercluster_volume(g, partition);
  r.intercluster_fraction = r.total_volume > 0.0 ? r.intercluster_volume / r.total_volume : 0.0;
  r.volume_ok = approx_le(r.intercluster_volume, epsilon * r.total_volume);

  for (const VertexSet& c : partition) {
    ClusterVerdict v;
    v.size = c.size();
    v.volume = volume(g, c);
    if (c.size() < 2) {
      v.method = "trivial";
      v.lower_bound = std::numeric_limits<double>::infinity();
      r.clusters.push_back(std::move(v));
      continue;
    }
    InducedGraph gc = induce_with_loops(g, c);
    std::vector<double> deg(gc.graph.degrees().begin(), gc.graph.degrees().end());
    const int size = static_cast<int>(c.size());
    if (size <= options.enumeration_limit) {
      MinConductance mc = min_conductance_bruteforce(gc.graph, options.enumeration_limit);
      v.method = "enumeration";
      v.min_conductance = mc.value;
      v.lower_bound = mc.value;
      v.passes = approx_ge(mc.value, phi);
    } else {
      bool decided = false;
      if (size <= options.size_limit) {
        double bound = cheeger_lower_bound(gc.graph, deg);
        v.lower_bound = bound;
        if (bound >= phi) {
          v.method = "certificate";
          v.passes = true;
          decided = true;
        } else {
          const double half = gc.graph.total_volume() / 2.0;
          try {
            double best = std::numeric_limits<double>::infinity();
            bounded_cut_search(
                gc.graph, deg, phi * half,
                [&](const VertexSet&, double cut, double vol) {
                  double smaller = std::min(vol, 2.0 * half - vol);
                  if (smaller > 0.0) best = std::min(best, cut / smaller);
                },
                options.search_nodes);
            v.method = "bounded-search";
            v.passes = approx_ge(best, phi);
            // Every cut outside the search budget has conductance above phi.
            v.lower_bound = std::max(bound, std::min(best, phi));
            if (!v.passes) v.min_conductance = best;
            decided = true;
          } catch (const SizeGuardError&) {
            if (!options.allow_heuristic) throw;
          }
        }
      } else if (!options.allow_heuristic) {
        throw SizeGuardError(fmt::format("cluster of {} vertices exceeds the verification size limit {}",
                                         size, options.size_limit));
      }
      if (!decided) {
        SweepOptions sweep;
        sweep.seed = options.seed;
        v.method = "sweep-heuristic";
        v.exact = false;
        r.exact = false;
        try {
          BalancedCutOutcome out = sweep_balanced_cut(gc.graph, deg, phi, 0.0, sweep);
          v.passes = out.expander || approx_ge(conductance(gc.graph, out.cut), phi);
        } catch (const NumericFailure&) {
          v.passes = false;
        }
      }
    }
    if (!v.passes) r.expansion_ok = false;
    r.clusters.push_back(std::move(v));
  }
  return r;
}

std::string RunReport::to_json() const {
  using nlohmann::json;
  auto number = [](double x) -> json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  json verdicts = json::array();
  for (const ClusterVerdict& v : verification.clusters) {
    verdicts.push_back({{"size", v.size},
                        {"volume", v.volume},
                        {"min_conductance", v.min_conductance ? number(*v.min_conductance) : json(nullptr)},
                        {"lower_bound", number(v.lower_bound)},
                        {"method", v.method},
                        {"exact", v.exact},
                        {"passes", v.passes}});
  }
  json phi = json::array();
  for (double x : schedule.phi) phi.push_back(x);
  json out = {
      {"depth", depth},
      {"alg1_slots", alg1_slots},
      {"depth_bound", depth_bound},
      {"iterations", iterations},
      {"outer_iterations", outer_iterations},
      {"alg2_calls", alg2_calls},
      {"phi_final", phi_final},
      {"phi_schedule", phi},
      {"T", schedule.T},
      {"alpha", schedule.alpha},
      {"b", schedule.b},
      {"intercluster_fraction", intercluster_fraction},
      {"cluster_sizes", cluster_sizes},
      {"singleton_count", singleton_count},
      {"sparsifiers_used", sparsifiers_used},
      {"sketch_memory_bytes", sketch_memory_bytes},
      {"stream_failures", stream_failures},
      {"violations", violations},
      {"verification",
       {{"epsilon", verification.epsilon},
        {"phi", verification.phi},
        {"intercluster_volume", verification.intercluster_volume},
        {"total_volume", verification.total_volume},
        {"volume_ok", verification.volume_ok},
        {"expansion_ok", verification.expansion_ok},
        {"exact", verification.exact},
        {"passes", verification.passes()}}},
      {"verdicts", verdicts},
  };
  return out.dump(2);
}

DecompResult decompose(const Graph& g, const DecompParams& params, const EdgeStream* stream) {
  params.validate();
  const int n = g.num_vertices();
  const double vol = g.total_volume();
  if (params.volume_bound && *params.volume_bound < vol) {
    throw std::invalid_argument("volume bound is smaller than Vol(G)");
  }
  EdgeStream own;
  if (params.source == SparsifierSource::Stream) {
    if (stream == nullptr) {
      own.n = n;
      const Graph net = g.canonical();
      for (const Edge& e : net.edges()) {
        if (e.is_loop() || e.w != std::round(e.w)) {
          throw std::invalid_argument("stream mode needs a loop-free graph with integral multiplicities");
        }
        for (int copy = 0; copy < static_cast<int>(e.w); ++copy) {
          own.updates.push_back({UpdateOp::Insert, e.u, e.v});
        }
      }
      stream = &own;
    } else if (stream->n != n) {
      throw std::invalid_argument("stream and graph have different vertex counts");
    }
  }

  DecompResult result;
  RunReport& report = result.report;
  report.schedule = schedule(params, n, vol);
  const Schedule& s = report.schedule;
  report.alg1_slots = s.alg1_slots;
  report.depth_bound = s.depth_bound;
  report.phi_final = s.phi.back();

  std::vector<VertexId> active;
  for (VertexId v = 0; v < n; ++v) {
    if (g.degree(v) > 0.0) {
      active.push_back(v);
    } else {
      result.partition.push_back(VertexSet{v});
    }
  }
  SparsifierPool pool(g, params, s, stream);
  if (!active.empty()) {
    Decomposer d(g, params, s, pool, report);
    Partition main = d.low_depth(VertexSet(std::move(active)), 1);
    result.partition.insert(result.partition.end(), main.begin(), main.end());
  }
  result.partition = normalized(std::move(result.partition));
  validate_partition(n, result.partition);

  if (report.depth > s.alg1_slots) {
    report.violations.push_back(fmt::format("recursion depth {} exceeds pool size {}", report.depth,
                                            s.alg1_slots));
  }
  if (report.depth > 0 && !approx_le(report.depth - 1.0, s.depth_bound)) {
    report.violations.push_back(fmt::format("recursion depth {} exceeds 1 + log(Vol)/log(1/(1-eps b/4)) = {}",
                                            report.depth, 1.0 + s.depth_bound));
  }
  report.sparsifiers_used = pool.materialized();
  report.sketch_memory_bytes = pool.sketch_memory_bytes();
  report.stream_failures = pool.stream_failures();
  for (const VertexSet& c : result.partition) {
    report.cluster_sizes.push_back(c.size());
    if (c.size() == 1) ++report.singleton_count;
  }

  VerifyOptions vo;
  vo.enumeration_limit = params.enumeration_limit;
  vo.size_limit = params.exact_size_limit;
  vo.search_nodes = params.search_nodes;
  vo.allow_heuristic = params.mode == DecompMode::Fast;
  vo.seed = derive_seed(params.seed, "verify");
  report.verification = verify_decomposition(g, result.partition, params.epsilon, s.phi.back(), vo);
  report.intercluster_fraction = report.verification.intercluster_fraction;
  if (!report.verification.expansion_ok) {
    report.violations.push_back(fmt::format("some cluster is not a phi_(k+1) = {} expander", s.phi.back()));
  }
  if (!report.verification.volume_ok) {
    report.violations.push_back(fmt::format("intercluster volume fraction {} exceeds eps = {}",
                                            report.verification.intercluster_fraction, params.epsilon));
  }
  return result;
}

}  // namespace pcs
