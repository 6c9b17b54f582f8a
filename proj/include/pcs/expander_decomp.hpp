#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcs/balanced_cut.hpp"
#include "pcs/graph.hpp"
#include "pcs/stream_engine.hpp"

namespace pcs {

enum class DecompMode { Exact, Fast };
enum class SparsifierSource { Offline, Stream };

std::string_view to_string(DecompMode mode);
std::string_view to_string(SparsifierSource source);
DecompMode parse_mode(std::string_view text);
SparsifierSource parse_source(std::string_view text);

struct DecompParams {
  double epsilon = 0.3;
  int k = 2;
  double delta = 1.0 / 16.0;
  double failure_exponent = 1.0;
  /// Balanced-cut constants; defaults depend on the mode (see resolved_*).
  std::optional<double> alpha;
  std::optional<double> b;
  /// Upper bound on Vol(G); defaults to n^2.
  std::optional<double> volume_bound;
  DecompMode mode = DecompMode::Exact;
  SparsifierSource source = SparsifierSource::Offline;
  std::uint64_t seed = 0;
  /// Replaces the formula oversampling factor by scale / (delta psi).
  std::optional<double> upsilon_scale;
  /// Clusters up to this size are checked by full enumeration.
  int enumeration_limit = kDefaultEnumerationLimit;
  /// Exact mode refuses clusters above this size (SizeGuardError). Between the
  /// two limits it uses a spectral certificate and a bounded exact search.
  int exact_size_limit = kDefaultEnumerationLimit;
  std::uint64_t search_nodes = kDefaultSearchNodes;
  /// Extra seeds tried for a stream sparsifier whose recovery reports FAIL.
  int stream_retries = 3;

  /// 1 + 5 delta in both modes unless overridden.
  double resolved_alpha() const;
  /// 1 in exact mode, 0.5 in fast mode unless overridden.
  double resolved_b() const;
  double resolved_volume_bound(int n) const;
  void validate() const;
};

/// Parameter schedule of the two phases.
struct Schedule {
  double alpha = 0.0;
  double b = 0.0;
  double volume_bound = 0.0;
  /// phi[j] for j = 0..k+1 and psi[j] = delta phi[j].
  std::vector<double> phi;
  std::vector<double> psi;
  /// ceil((eps Vol(G))^(1/k)).
  double T = 0.0;
  /// Sparsifier slots for the recursive phase and per level of the second phase.
  int alg1_slots = 0;
  int alg2_slots = 0;
  /// log(Vol(G)) / log(1 / (1 - eps b / 4)).
  double depth_bound = 0.0;
};

/// Per-call constants of the second phase.
struct ClusterSchedule {
  double tau = 0.0;
  /// m[j] for j = 1..k+1 (m[0] unused); m[k+1] is exactly 1.
  std::vector<double> m;
  /// floor(tau / b) + 1.
  int inner_bound = 0;
};

Schedule schedule(const DecompParams& params, int n, double graph_volume);
ClusterSchedule cluster_schedule(const DecompParams& params, const Schedule& s,
                                 double cluster_volume);

/**
   Lazily built sparsifiers for the two phases. Slot (0, i) serves recursion
   depth i of the first phase; slot (j, h) serves inner iteration h of outer
   iteration j of the second phase, shared by every call. A slot is sampled
   offline or recovered from a StreamState that replays the stored stream.
 */
class SparsifierPool {
 public:
  SparsifierPool(const Graph& g, const DecompParams& params, const Schedule& s,
                 const EdgeStream* stream);

  /// Throws PoolExhausted when depth exceeds the provisioned slots.
  const Graph& alg1(int depth);
  /// Throws PoolExhausted when j > k+1 or h exceeds the provisioned slots.
  const Graph& alg2(int j, int h);

  std::size_t materialized() const { return slots_.size(); }
  std::size_t sketch_memory_bytes() const { return sketch_memory_; }
  int stream_failures() const { return stream_failures_; }

 private:
  const Graph& materialize(int level, int index, double psi);

  const Graph& g_;
  const DecompParams& params_;
  const Schedule& schedule_;
  const EdgeStream* stream_;
  std::map<std::pair<int, int>, Graph> slots_;
  std::size_t sketch_memory_ = 0;
  int stream_failures_ = 0;
};

struct ClusterVerdict {
  std::size_t size = 0;
  double volume = 0.0;
  /// Exact minimum conductance of G{C}, when it was computed.
  std::optional<double> min_conductance;
  /// Proven lower bound on the minimum conductance.
  double lower_bound = 0.0;
  std::string method;
  bool exact = true;
  bool passes = true;
};

struct VerificationReport {
  double epsilon = 0.0;
  double phi = 0.0;
  double intercluster_volume = 0.0;
  double total_volume = 0.0;
  double intercluster_fraction = 0.0;
  bool volume_ok = true;
  bool expansion_ok = true;
  /// False when some cluster was only checked heuristically.
  bool exact = true;
  std::vector<ClusterVerdict> clusters;

  bool passes() const { return volume_ok && expansion_ok; }
};

struct VerifyOptions {
  int enumeration_limit = kDefaultEnumerationLimit;
  /// Clusters between the limits get a spectral certificate, then bounded search.
  int size_limit = kDefaultEnumerationLimit;
  std::uint64_t search_nodes = kDefaultSearchNodes;
  /// Above size_limit: sweep-only check (flagged) instead of SizeGuardError.
  bool allow_heuristic = false;
  std::uint64_t seed = 0;
};

/// Intercluster volume against eps Vol(V) and, per cluster, whether G{C} is a
/// phi-expander. Throws NotAPartition on an invalid partition.
VerificationReport verify_decomposition(const Graph& g, const Partition& partition, double epsilon,
                                        double phi, const VerifyOptions& options = {});

struct RunReport {
  int depth = 0;
  int alg1_slots = 0;
  double depth_bound = 0.0;
  /// iterations[j-1]: most inner iterations seen at outer iteration j.
  std::vector<int> iterations;
  int outer_iterations = 0;
  int alg2_calls = 0;
  double phi_final = 0.0;
  double intercluster_fraction = 0.0;
  std::vector<std::size_t> cluster_sizes;
  std::size_t singleton_count = 0;
  std::size_t sparsifiers_used = 0;
  std::size_t sketch_memory_bytes = 0;
  int stream_failures = 0;
  Schedule schedule;
  /// Runtime checks of the termination, volume and sparsity guarantees that
  /// did not hold. Empty on a clean run.
  std::vector<std::string> violations;
  VerificationReport verification;

  std::string to_json() const;
};

struct DecompResult {
  Partition partition;
  RunReport report;
};

/// Runs the recursive phase on V (zero-degree vertices become singletons up
/// front) and verifies the result at (eps, phi_{k+1}). In stream mode the
/// sparsifiers are recovered from `stream`, or from an insertion-only stream
/// of g when none is given.
DecompResult decompose(const Graph& g, const DecompParams& params,
                       const EdgeStream* stream = nullptr);

}  // namespace pcs
