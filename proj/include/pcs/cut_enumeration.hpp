#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pcs/graph.hpp"

namespace pcs {

/// Lexicographic order on the sorted id lists encoded by two masks.
constexpr bool mask_lex_less(std::uint64_t a, std::uint64_t b) {
  while (a != 0 && b != 0) {
    int la = std::countr_zero(a);
    int lb = std::countr_zero(b);
    if (la != lb) return la < lb;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

VertexSet mask_to_set(std::uint32_t mask);
std::uint32_t set_to_mask(const VertexSet& s);

/// Cut weight of a mask computed straight from the edge list.
double mask_cut_weight(const Graph& g, std::uint32_t mask);
double mask_volume(std::span<const double> weights, std::uint32_t mask);

/**
   Enumerates subsets of a vertex set of size <= 32 and reports, for every
   subset, its cut weight in one or two graphs over the same vertices and its
   volume under a caller-supplied degree vector.

   Subsets are split into a low half (up to 16 vertices) and a high half.
   Cut weights are assembled from per-half tables plus a cross-term table
   rebuilt once per high half, so each subset costs O(1) and no error
   accumulates across the walk.
 */
class CutTable {
 public:
  static constexpr int kMaxLayers = 2;

  CutTable(std::vector<const Graph*> layers, std::vector<double> volume_weights);

  int num_vertices() const { return n_; }
  double total_volume() const { return total_volume_; }
  std::uint32_t full_mask() const {
    return n_ == 32 ? 0xffffffffu : ((1u << n_) - 1u);
  }

  /// Calls fn(mask, cuts, volume) for every mask other than the empty set and
  /// the full set, where cuts[l] is the cut weight in layer l. With
  /// `exclude_last` only masks omitting vertex n-1 are visited: one
  /// representative from each {S, complement} pair.
  template <class Fn>
  void for_each(Fn&& fn, bool exclude_last = false) const;

 private:
  struct Half {
    int offset = 0;
    int size = 0;
    std::vector<double> volume;
    // Per layer: loop-free degree sums and internal edge weight of subsets.
    std::array<std::vector<double>, kMaxLayers> degree_sum;
    std::array<std::vector<double>, kMaxLayers> internal;
  };

  void build_half(Half& half, int offset, int size) const;

  int n_ = 0;
  int layers_ = 0;
  double total_volume_ = 0.0;
  std::vector<double> volume_weights_;
  // Dense symmetric adjacency per layer, loops dropped.
  std::array<std::vector<double>, kMaxLayers> adjacency_;
  Half low_;
  Half high_;
};

template <class Fn>
void CutTable::for_each(Fn&& fn, bool exclude_last) const {
  if (n_ < 2) return;
  const std::uint32_t full = full_mask();
  const std::uint64_t low_count = std::uint64_t{1} << low_.size;
  std::uint64_t high_count = std::uint64_t{1} << high_.size;
  std::uint64_t low_limit = low_count;
  if (exclude_last) {
    if (high_.size > 0) {
      high_count >>= 1;
    } else {
      low_limit >>= 1;
    }
  }

  std::array<std::vector<double>, kMaxLayers> cross;
  for (int l = 0; l < layers_; ++l) cross[l].assign(low_count, 0.0);
  std::array<double, 16> towards_high{};
  std::array<double, kMaxLayers> cuts{};

  for (std::uint64_t b = 0; b < high_count; ++b) {
    for (int l = 0; l < layers_; ++l) {
      const auto& adj = adjacency_[l];
      for (int v = 0; v < low_.size; ++v) {
        double s = 0.0;
        for (std::uint64_t bits = b; bits != 0; bits &= bits - 1) {
          int u = high_.offset + std::countr_zero(bits);
          s += adj[static_cast<std::size_t>(v) * n_ + u];
        }
        towards_high[v] = s;
      }
      auto& table = cross[l];
      for (std::uint64_t a = 1; a < low_count; ++a) {
        table[a] = table[a & (a - 1)] + towards_high[std::countr_zero(a)];
      }
    }
    const double high_volume = high_.volume[b];
    const std::uint32_t high_bits = static_cast<std::uint32_t>(b << low_.size);
    for (std::uint64_t a = 0; a < low_limit; ++a) {
      const std::uint32_t mask = high_bits | static_cast<std::uint32_t>(a);
      if (mask == 0 || mask == full) continue;
      for (int l = 0; l < layers_; ++l) {
        double c = low_.degree_sum[l][a] + high_.degree_sum[l][b] -
                   2.0 * (low_.internal[l][a] + high_.internal[l][b] + cross[l][a]);
        cuts[l] = std::max(c, 0.0);
      }
      fn(mask, std::span<const double>(cuts.data(), static_cast<std::size_t>(layers_)),
         low_.volume[a] + high_volume);
    }
  }
}

/// Search-tree size cap for bounded_cut_search before it gives up.
inline constexpr std::uint64_t kDefaultSearchNodes = std::uint64_t{1} << 24;

/**
   Exact enumeration of every non-trivial cut S of `g` with cut weight at most
   `budget` (up to kRelativeSlack), by depth-first assignment of vertices with
   a running cut weight that only grows, so branches above the budget are cut
   off. Loops are ignored. Calls fn(S, cut_weight, volume) with volume taken
   from `weights`. Both sides of each cut are reported. Throws SizeGuardError
   when the search tree exceeds `max_nodes`.
 */
void bounded_cut_search(const Graph& g, std::span<const double> weights, double budget,
                        const std::function<void(const VertexSet&, double, double)>& fn,
                        std::uint64_t max_nodes = kDefaultSearchNodes);

}  // namespace pcs
