#include "pcs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "pcs/cut_enumeration.hpp"
#include "pcs/errors.hpp"

namespace pcs {

bool approx_le(double a, double b) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return a <= b + kRelativeSlack * scale;
}

Graph::Graph(int n) : n_(n), deg_(static_cast<std::size_t>(std::max(n, 0)), 0.0) {
  if (n < 0) throw std::invalid_argument("vertex count must be non-negative");
}

Graph::Graph(int n, std::vector<Edge> edges) : Graph(n) {
  edges_.reserve(edges.size());
  for (const Edge& e : edges) add_edge(e.u, e.v, e.w);
}

void Graph::check_vertex(VertexId v) const {
  if (v < 0 || v >= n_) {
    throw std::out_of_range("vertex " + std::to_string(v) + " out of range [0, " +
                            std::to_string(n_) + ")");
  }
}

void Graph::add_edge(VertexId u, VertexId v, double w) {
  check_vertex(u);
  check_vertex(v);
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw std::invalid_argument("edge weights must be positive and finite");
  }
  edges_.push_back({u, v, w});
  deg_[u] += w;
  if (u != v) deg_[v] += w;
}

double Graph::degree(VertexId v) const {
  check_vertex(v);
  return deg_[v];
}

double Graph::total_volume() const {
  double total = 0.0;
  for (double d : deg_) total += d;
  return total;
}

double Graph::total_weight() const {
  double total = 0.0;
  for (const Edge& e : edges_) total += e.w;
  return total;
}

Graph Graph::canonical() const {
  std::map<std::pair<VertexId, VertexId>, double> merged;
  for (const Edge& e : edges_) {
    merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.w;
  }
  Graph out(n_);
  out.edges_.reserve(merged.size());
  for (const auto& [key, w] : merged) out.add_edge(key.first, key.second, w);
  return out;
}

VertexSet::VertexSet(std::vector<VertexId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  if (!ids_.empty() && ids_.front() < 0) throw std::invalid_argument("negative vertex id");
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
    throw std::invalid_argument("duplicate vertex id in VertexSet");
  }
}

VertexSet VertexSet::range(int n) {
  std::vector<VertexId> ids(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) ids[i] = i;
  VertexSet s;
  s.ids_ = std::move(ids);
  return s;
}

bool VertexSet::contains(VertexId v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

VertexSet VertexSet::minus(const VertexSet& other) const {
  VertexSet out;
  std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                      std::back_inserter(out.ids_));
  return out;
}

VertexSet VertexSet::united(const VertexSet& other) const {
  VertexSet out;
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(out.ids_));
  if (std::adjacent_find(out.ids_.begin(), out.ids_.end()) != out.ids_.end()) {
    throw std::logic_error("set union produced duplicates");
  }
  return out;
}

namespace {

std::vector<char> membership(const Graph& g, const VertexSet& s) {
  std::vector<char> in(static_cast<std::size_t>(g.num_vertices()), 0);
  for (VertexId v : s) {
    if (v < 0 || v >= g.num_vertices()) {
      throw std::out_of_range("vertex " + std::to_string(v) + " not in graph");
    }
    in[v] = 1;
  }
  return in;
}

void require_proper(const Graph& g, const VertexSet& s) {
  if (s.empty() || s.size() >= static_cast<std::size_t>(g.num_vertices())) {
    throw InvalidCut("a cut must be a non-empty proper subset of V");
  }
}

}  // namespace

void validate_partition(int n, const Partition& partition) {
  std::vector<char> seen(static_cast<std::size_t>(std::max(n, 0)), 0);
  std::size_t covered = 0;
  for (const VertexSet& cluster : partition) {
    if (cluster.empty()) throw NotAPartition("partition contains an empty cluster");
    for (VertexId v : cluster) {
      if (v < 0 || v >= n) throw NotAPartition("cluster vertex " + std::to_string(v) + " out of range");
      if (seen[v]) throw NotAPartition("vertex " + std::to_string(v) + " appears in two clusters");
      seen[v] = 1;
      ++covered;
    }
  }
  if (covered != static_cast<std::size_t>(n)) {
    throw NotAPartition("clusters do not cover every vertex");
  }
}

Partition normalized(Partition partition) {
  std::sort(partition.begin(), partition.end());
  return partition;
}

double volume(const Graph& g, const VertexSet& s) {
  double total = 0.0;
  for (VertexId v : s) total += g.degree(v);
  return total;
}

double cut_weight(const Graph& g, const VertexSet& s) {
  auto in = membership(g, s);
  require_proper(g, s);
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    if (in[e.u] != in[e.v]) total += e.w;
  }
  return total;
}

double conductance(const Graph& g, const VertexSet& s) {
  double cut = cut_weight(g, s);
  double vs = volume(g, s);
  double denominator = std::min(vs, g.total_volume() - vs);
  if (!(denominator > 0.0)) throw DegenerateCut("smaller side of the cut has zero volume");
  return cut / denominator;
}

double balance(const Graph& g, const VertexSet& s) {
  membership(g, s);
  require_proper(g, s);
  double vs = volume(g, s);
  double total = g.total_volume();
  double smaller = std::min(vs, total - vs);
  if (!(smaller > 0.0)) throw DegenerateCut("smaller side of the cut has zero volume");
  return smaller / total;
}

VertexSet InducedGraph::to_global(const VertexSet& local) const {
  std::vector<VertexId> ids;
  ids.reserve(local.size());
  for (VertexId v : local) ids.push_back(vertices.at(v));
  return VertexSet(std::move(ids));
}

InducedGraph induce_with_loops(const Graph& g, const VertexSet& c) {
  std::vector<VertexId> local(static_cast<std::size_t>(g.num_vertices()), -1);
  InducedGraph out{Graph(static_cast<int>(c.size())), {}};
  out.vertices.assign(c.begin(), c.end());
  for (std::size_t i = 0; i < out.vertices.size(); ++i) {
    VertexId v = out.vertices[i];
    if (v < 0 || v >= g.num_vertices()) throw std::out_of_range("cluster vertex out of range");
    local[v] = static_cast<VertexId>(i);
  }
  std::vector<double> inside(c.size(), 0.0);
  for (const Edge& e : g.edges()) {
    VertexId lu = local[e.u];
    VertexId lv = local[e.v];
    if (lu < 0 || lv < 0) continue;
    out.graph.add_edge(lu, lv, e.w);
    inside[lu] += e.w;
    if (lu != lv) inside[lv] += e.w;
  }
  for (std::size_t i = 0; i < out.vertices.size(); ++i) {
    double missing = g.degree(out.vertices[i]) - inside[i];
    if (missing > kRelativeSlack * std::max(1.0, g.degree(out.vertices[i]))) {
      out.graph.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(i), missing);
    }
  }
  return out;
}

std::vector<double> restricted_degrees(const Graph& g, const VertexSet& c) {
  std::vector<double> d;
  d.reserve(c.size());
  for (VertexId v : c) d.push_back(g.degree(v));
  return d;
}

MinConductance min_conductance_bruteforce(const Graph& g, int limit) {
  const int n = g.num_vertices();
  if (n > std::min(limit, kHardEnumerationLimit)) {
    throw SizeGuardError("exhaustive conductance over " + std::to_string(n) +
                         " vertices exceeds the limit of " + std::to_string(limit));
  }
  MinConductance best;
  if (n < 2) return best;
  CutTable table({&g}, std::vector<double>(g.degrees().begin(), g.degrees().end()));
  const double total = table.total_volume();
  std::uint32_t best_mask = 0;
  table.for_each(
      [&](std::uint32_t mask, std::span<const double> cuts, double vol) {
        double denominator = std::min(vol, total - vol);
        if (!(denominator > 0.0)) return;
        double phi = cuts[0] / denominator;
        if (phi < best.value || (phi == best.value && mask_lex_less(mask, best_mask))) {
          best.value = phi;
          best_mask = mask;
        }
      },
      /*exclude_last=*/true);
  if (best_mask != 0) best.witness = mask_to_set(best_mask);
  return best;
}

double intercluster_volume(const Graph& g, const Partition& partition) {
  validate_partition(g.num_vertices(), partition);
  std::vector<std::size_t> cluster_of(static_cast<std::size_t>(g.num_vertices()));
  for (std::size_t i = 0; i < partition.size(); ++i) {
    for (VertexId v : partition[i]) cluster_of[v] = i;
  }
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    if (cluster_of[e.u] != cluster_of[e.v]) total += 2.0 * e.w;
  }
  return total;
}

}  // namespace pcs
