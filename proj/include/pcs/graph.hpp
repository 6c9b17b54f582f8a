#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace pcs {

using VertexId = std::int32_t;

/// Relative slack used by every verification inequality.
inline constexpr double kRelativeSlack = 1e-9;

/// a <= b up to kRelativeSlack.
bool approx_le(double a, double b);
inline bool approx_ge(double a, double b) { return approx_le(b, a); }

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double w = 1.0;

  bool is_loop() const { return u == v; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/**
   Undirected weighted multigraph on vertices 0..n-1.

   A self-loop contributes its weight to the degree of its vertex exactly
   once, so Vol(V) = 2 w(E) only when the graph is loop-free.
 */
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  Graph(int n, std::vector<Edge> edges);
  Graph(int n, std::initializer_list<Edge> edges) : Graph(n, std::vector<Edge>(edges)) {}

  /// Throws std::out_of_range for bad ids and std::invalid_argument for
  /// non-positive or non-finite weights.
  void add_edge(VertexId u, VertexId v, double w = 1.0);

  int num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  double degree(VertexId v) const;
  std::span<const double> degrees() const { return deg_; }
  double total_volume() const;
  double total_weight() const;

  /// Parallel edges merged (weights summed), endpoints ordered u <= v,
  /// edges sorted. Two graphs are the same weighted multigraph iff their
  /// canonical forms compare equal.
  Graph canonical() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  void check_vertex(VertexId v) const;

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> deg_;
};

/// Sorted set of distinct vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  /// Sorts the ids; throws std::invalid_argument on duplicates or negatives.
  explicit VertexSet(std::vector<VertexId> ids);
  VertexSet(std::initializer_list<VertexId> ids) : VertexSet(std::vector<VertexId>(ids)) {}

  static VertexSet range(int n);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool contains(VertexId v) const;
  VertexId operator[](std::size_t i) const { return ids_[i]; }
  std::span<const VertexId> ids() const { return ids_; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  /// Elements of this set not in `other`.
  VertexSet minus(const VertexSet& other) const;
  VertexSet united(const VertexSet& other) const;

  friend bool operator==(const VertexSet&, const VertexSet&) = default;
  /// Lexicographic order on the sorted id lists.
  friend bool operator<(const VertexSet& a, const VertexSet& b) { return a.ids_ < b.ids_; }

 private:
  std::vector<VertexId> ids_;
};

using Partition = std::vector<VertexSet>;

/// Throws NotAPartition unless the clusters are non-empty, pairwise disjoint
/// and cover 0..n-1 exactly.
void validate_partition(int n, const Partition& partition);

/// Clusters sorted by their smallest vertex; convenient for comparisons.
Partition normalized(Partition partition);

double volume(const Graph& g, const VertexSet& s);
/// Throws InvalidCut if s is empty or all of V.
double cut_weight(const Graph& g, const VertexSet& s);
/// cut_weight / min(Vol(S), Vol(V \ S)). Throws DegenerateCut on a zero denominator.
double conductance(const Graph& g, const VertexSet& s);
/// min(Vol(S), Vol(V \ S)) / Vol(V).
double balance(const Graph& g, const VertexSet& s);

/// G{C}: a graph on local ids 0..|C|-1 (local i is vertices[i]).
struct InducedGraph {
  Graph graph;
  std::vector<VertexId> vertices;

  VertexSet to_global(const VertexSet& local) const;
};

/// Keeps the edges inside C and adds at each vertex a self-loop carrying the
/// weight of its edges leaving C, so every degree is preserved.
InducedGraph induce_with_loops(const Graph& g, const VertexSet& c);

/// Degrees of `g` restricted to `c`, in the local order of induce_with_loops.
std::vector<double> restricted_degrees(const Graph& g, const VertexSet& c);

struct MinConductance {
  /// +infinity when no cut has a positive denominator.
  double value = std::numeric_limits<double>::infinity();
  VertexSet witness;
};

inline constexpr int kDefaultEnumerationLimit = 22;
/// Masks are 32-bit, so no enumeration can exceed this.
inline constexpr int kHardEnumerationLimit = 32;

/// Exact minimum conductance over all cuts with positive denominator, by
/// enumeration of all 2^n subsets. Throws SizeGuardError when n > limit.
MinConductance min_conductance_bruteforce(const Graph& g, int limit = kDefaultEnumerationLimit);

/// Sum over clusters of the weight leaving the cluster; every inter-cluster
/// edge is counted from both sides.
double intercluster_volume(const Graph& g, const Partition& partition);

}  // namespace pcs
