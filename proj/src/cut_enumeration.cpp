#include "pcs/cut_enumeration.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pcs/errors.hpp"

namespace pcs {

VertexSet mask_to_set(std::uint32_t mask) {
  std::vector<VertexId> ids;
  for (; mask != 0; mask &= mask - 1) ids.push_back(std::countr_zero(mask));
  return VertexSet(std::move(ids));
}

std::uint32_t set_to_mask(const VertexSet& s) {
  std::uint32_t mask = 0;
  for (VertexId v : s) {
    if (v >= kHardEnumerationLimit) throw SizeGuardError("vertex id does not fit a 32-bit mask");
    mask |= 1u << v;
  }
  return mask;
}

double mask_cut_weight(const Graph& g, std::uint32_t mask) {
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    bool in_u = (mask >> e.u) & 1u;
    bool in_v = (mask >> e.v) & 1u;
    if (in_u != in_v) total += e.w;
  }
  return total;
}

double mask_volume(std::span<const double> weights, std::uint32_t mask) {
  double total = 0.0;
  for (; mask != 0; mask &= mask - 1) total += weights[std::countr_zero(mask)];
  return total;
}

CutTable::CutTable(std::vector<const Graph*> layers, std::vector<double> volume_weights)
    : n_(static_cast<int>(volume_weights.size())),
      layers_(static_cast<int>(layers.size())),
      volume_weights_(std::move(volume_weights)) {
  if (layers_ < 1 || layers_ > kMaxLayers) {
    throw std::invalid_argument("CutTable takes one or two graphs");
  }
  if (n_ > kHardEnumerationLimit) {
    throw SizeGuardError("subset enumeration over " + std::to_string(n_) +
                         " vertices exceeds the 32-vertex mask width");
  }
  for (double w : volume_weights_) total_volume_ += w;
  for (int l = 0; l < layers_; ++l) {
    const Graph& g = *layers[l];
    if (g.num_vertices() != n_) {
      throw std::invalid_argument("CutTable layers must share the vertex set");
    }
    auto& adj = adjacency_[l];
    adj.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    for (const Edge& e : g.edges()) {
      if (e.is_loop()) continue;
      adj[static_cast<std::size_t>(e.u) * n_ + e.v] += e.w;
      adj[static_cast<std::size_t>(e.v) * n_ + e.u] += e.w;
    }
  }
  int low = std::min(n_, 16);
  build_half(low_, 0, low);
  build_half(high_, low, n_ - low);
}

void CutTable::build_half(Half& half, int offset, int size) const {
  half.offset = offset;
  half.size = size;
  const std::size_t count = std::size_t{1} << size;
  half.volume.assign(count, 0.0);
  for (std::size_t a = 1; a < count; ++a) {
    half.volume[a] = half.volume[a & (a - 1)] + volume_weights_[offset + std::countr_zero(a)];
  }
  for (int l = 0; l < layers_; ++l) {
    const auto& adj = adjacency_[l];
    std::vector<double> loop_free_degree(size, 0.0);
    for (int i = 0; i < size; ++i) {
      for (int u = 0; u < n_; ++u) {
        loop_free_degree[i] += adj[static_cast<std::size_t>(offset + i) * n_ + u];
      }
    }
    auto& degree_sum = half.degree_sum[l];
    auto& internal = half.internal[l];
    degree_sum.assign(count, 0.0);
    internal.assign(count, 0.0);
    for (std::size_t a = 1; a < count; ++a) {
      std::size_t rest = a & (a - 1);
      int i = std::countr_zero(a);
      double to_rest = 0.0;
      for (std::size_t bits = rest; bits != 0; bits &= bits - 1) {
        to_rest += adj[static_cast<std::size_t>(offset + i) * n_ + offset + std::countr_zero(bits)];
      }
      degree_sum[a] = degree_sum[rest] + loop_free_degree[i];
      internal[a] = internal[rest] + to_rest;
    }
  }
}


void bounded_cut_search(const Graph& g, std::span<const double> weights, double budget,
                        const std::function<void(const VertexSet&, double, double)>& fn,
                        std::uint64_t max_nodes) {
  const int n = g.num_vertices();
  if (static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("bounded_cut_search needs one weight per vertex");
  }
  if (n < 2) return;

  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    if (e.is_loop()) continue;
    adj[e.u].emplace_back(e.v, e.w);
    adj[e.v].emplace_back(e.u, e.w);
  }
  // Breadth-first order keeps neighbours close together, so a branch that
  // splits a dense region pays for it early.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<char> queued(static_cast<std::size_t>(n), 0);
  for (int root = 0; root < n; ++root) {
    if (queued[root]) continue;
    queued[root] = 1;
    order.push_back(root);
    for (std::size_t head = order.size() - 1; head < order.size(); ++head) {
      for (const auto& [u, w] : adj[order[head]]) {
        if (!queued[u]) {
          queued[u] = 1;
          order.push_back(u);
        }
      }
    }
  }

  std::vector<int> side(static_cast<std::size_t>(n), -1);
  std::uint64_t nodes = 0;
  const double limit = budget + kRelativeSlack * std::max(1.0, std::fabs(budget));

  auto emit = [&](double cut) {
    std::vector<VertexId> a;
    std::vector<VertexId> b;
    double vol_a = 0.0;
    double vol_b = 0.0;
    for (int v = 0; v < n; ++v) {
      if (side[v] == 0) {
        a.push_back(v);
        vol_a += weights[v];
      } else {
        b.push_back(v);
        vol_b += weights[v];
      }
    }
    fn(VertexSet(std::move(a)), cut, vol_a);
    fn(VertexSet(std::move(b)), cut, vol_b);
  };

  std::function<void(int, double, bool)> descend = [&](int depth, double cut, bool used_other) {
    if (depth == n) {
      if (used_other) emit(cut);
      return;
    }
    const int v = order[depth];
    for (int s = 0; s < 2; ++s) {
      double added = 0.0;
      for (const auto& [u, w] : adj[v]) {
        if (side[u] >= 0 && side[u] != s) added += w;
      }
      if (cut + added > limit) continue;
      if (++nodes > max_nodes) {
        throw SizeGuardError("bounded cut search exceeded " + std::to_string(max_nodes) +
                             " search nodes");
      }
      side[v] = s;
      descend(depth + 1, cut + added, used_other || s == 1);
      side[v] = -1;
    }
  };
  // The first vertex is pinned to side 0; its complement is reported alongside.
  side[order[0]] = 0;
  descend(1, 0.0, false);
}

}  // namespace pcs
