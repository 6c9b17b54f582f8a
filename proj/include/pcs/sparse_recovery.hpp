#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace pcs {

struct SketchParams {
  std::uint64_t universe = 0;  // n: indices are 0..n-1
  std::uint64_t sparsity = 1;  // k
  double failure_prob = 0.01;  // p
  std::uint64_t seed = 0;

  friend bool operator==(const SketchParams&, const SketchParams&) = default;
};

/// Rows per sketch: ceil(kRowConstant * log2(1/p)).
inline constexpr double kRowConstant = 2.0;
std::uint64_t sketch_rows(double failure_prob);

/// (index, value) pairs sorted by index, values non-zero.
using SparseVector = std::vector<std::pair<std::uint64_t, std::int64_t>>;

/**
   Linear sketch of an integer vector that recovers the vector exactly when
   it has at most k non-zero entries.

   R rows of 2k buckets each. A bucket accumulates, for every update
   (index, delta) hashed into it, the count delta, the index sum
   delta * index, and the fingerprint delta * r^index in GF(2^61 - 1).
   Recovery peels buckets that hold exactly one index and reports FAIL
   (std::nullopt) when peeling stalls, when residue remains, or when more
   than k indices come out.
 */
class SparseRecoverySketch {
 public:
  struct Bucket {
    std::int64_t count = 0;
    std::int64_t index_sum = 0;
    std::uint64_t fingerprint = 0;

    bool is_zero() const { return count == 0 && index_sum == 0 && fingerprint == 0; }
    friend bool operator==(const Bucket&, const Bucket&) = default;
  };

  static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

  explicit SparseRecoverySketch(const SketchParams& params);

  const SketchParams& params() const { return params_; }
  std::uint64_t rows() const { return rows_; }
  std::uint64_t buckets_per_row() const { return 2 * params_.sparsity; }
  std::size_t bucket_count() const { return buckets_.size(); }
  std::size_t memory_bytes() const { return buckets_.size() * sizeof(Bucket); }

  /// Adds delta to coordinate `index`. Throws std::out_of_range if index >= n.
  void update(std::uint64_t index, std::int64_t delta);
  /// Adds another sketch bucket-wise. Throws std::invalid_argument unless the
  /// parameters (seed included) are identical.
  void merge(const SparseRecoverySketch& other);
  std::optional<SparseVector> recover() const;
  bool is_zero() const;

  /// Little-endian header (n, k, p, R, seed) followed by the bucket array.
  std::vector<std::uint8_t> serialize() const;
  static SparseRecoverySketch deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const SparseRecoverySketch& a, const SparseRecoverySketch& b) {
    return a.params_ == b.params_ && a.buckets_ == b.buckets_;
  }

 private:
  std::size_t bucket_of(std::uint64_t row, std::uint64_t index) const;
  std::uint64_t power_of_base(std::uint64_t index) const;
  void apply(std::vector<Bucket>& buckets, std::uint64_t index, std::int64_t delta,
             std::uint64_t term) const;

  SketchParams params_;
  std::uint64_t rows_ = 0;
  std::uint64_t base_ = 0;
  std::vector<std::uint64_t> row_keys_;
  std::vector<Bucket> buckets_;
};

SparseRecoverySketch merged(SparseRecoverySketch a, const SparseRecoverySketch& b);

}  // namespace pcs
