#include "pcs/sparse_recovery.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>
#include <string>

#include "pcs/prf.hpp"

namespace pcs {

namespace {

using u128 = unsigned __int128;
constexpr std::uint64_t P = SparseRecoverySketch::kPrime;

std::uint64_t reduce(u128 x) {
  std::uint64_t lo = static_cast<std::uint64_t>(x & P);
  std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
  std::uint64_t s = lo + hi;
  s = (s & P) + (s >> 61);
  return s >= P ? s - P : s;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  return reduce(static_cast<u128>(a) * b);
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s >= P ? s - P : s;
}

std::uint64_t field_of(std::int64_t v) {
  if (v >= 0) return static_cast<std::uint64_t>(v) % P;
  std::uint64_t m = static_cast<std::uint64_t>(-(v + 1)) % P;  // avoids overflow at INT64_MIN
  m = (m + 1) % P;
  return m == 0 ? 0 : P - m;
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  if (pos + 8 > bytes.size()) throw std::invalid_argument("sketch snapshot truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
  pos += 8;
  return v;
}

}  // namespace

std::uint64_t sketch_rows(double failure_prob) {
  if (!(failure_prob > 0.0 && failure_prob < 1.0)) {
    throw std::invalid_argument("sketch failure probability must lie in (0, 1)");
  }
  double rows = std::ceil(kRowConstant * std::log2(1.0 / failure_prob));
  return static_cast<std::uint64_t>(std::max(1.0, rows));
}

SparseRecoverySketch::SparseRecoverySketch(const SketchParams& params) : params_(params) {
  if (params.universe < 1) throw std::invalid_argument("sketch universe must be non-empty");
  if (params.sparsity < 1 || params.sparsity > params.universe) {
    throw std::invalid_argument("sketch sparsity must satisfy 1 <= k <= n");
  }
  rows_ = sketch_rows(params.failure_prob);
  base_ = derive_seed(params.seed, "fingerprint-base") % P;
  if (base_ < 2) base_ += 2;
  row_keys_.resize(rows_);
  const std::uint64_t row_seed = derive_seed(params.seed, "rows");
  for (std::uint64_t r = 0; r < rows_; ++r) row_keys_[r] = derive_seed(row_seed, r);
  buckets_.assign(rows_ * buckets_per_row(), Bucket{});
}

std::size_t SparseRecoverySketch::bucket_of(std::uint64_t row, std::uint64_t index) const {
  return static_cast<std::size_t>(row * buckets_per_row() +
                                  prf(row_keys_[row], index) % buckets_per_row());
}

std::uint64_t SparseRecoverySketch::power_of_base(std::uint64_t index) const {
  std::uint64_t result = 1;
  std::uint64_t b = base_;
  for (std::uint64_t e = index; e != 0; e >>= 1) {
    if (e & 1) result = mul_mod(result, b);
    b = mul_mod(b, b);
  }
  return result;
}

void SparseRecoverySketch::apply(std::vector<Bucket>& buckets, std::uint64_t index,
                                 std::int64_t delta, std::uint64_t term) const {
  const std::int64_t weighted_index = delta * static_cast<std::int64_t>(index);
  for (std::uint64_t r = 0; r < rows_; ++r) {
    Bucket& b = buckets[bucket_of(r, index)];
    b.count += delta;
    b.index_sum += weighted_index;
    b.fingerprint = add_mod(b.fingerprint, term);
  }
}

void SparseRecoverySketch::update(std::uint64_t index, std::int64_t delta) {
  if (index >= params_.universe) {
    throw std::out_of_range("sketch index " + std::to_string(index) + " outside universe of size " +
                            std::to_string(params_.universe));
  }
  if (delta == 0) return;
  apply(buckets_, index, delta, mul_mod(field_of(delta), power_of_base(index)));
}

void SparseRecoverySketch::merge(const SparseRecoverySketch& other) {
  if (!(params_ == other.params_)) {
    throw std::invalid_argument("cannot merge sketches with different parameters or seeds");
  }
  for (std::size_t i = 0; i < buckets_.size(); ++i) {
    buckets_[i].count += other.buckets_[i].count;
    buckets_[i].index_sum += other.buckets_[i].index_sum;
    buckets_[i].fingerprint = add_mod(buckets_[i].fingerprint, other.buckets_[i].fingerprint);
  }
}

bool SparseRecoverySketch::is_zero() const {
  for (const Bucket& b : buckets_) {
    if (!b.is_zero()) return false;
  }
  return true;
}

std::optional<SparseVector> SparseRecoverySketch::recover() const {
  std::vector<Bucket> work = buckets_;
  const std::int64_t n = static_cast<std::int64_t>(params_.universe);
  const std::uint64_t width = buckets_per_row();

  // A bucket is pure when its three sums are consistent with a single index
  // that hashes to it.
  auto pure = [&](std::size_t pos, std::uint64_t& index, std::int64_t& value) {
    const Bucket& b = work[pos];
    if (b.count == 0) return false;
    if (b.index_sum % b.count != 0) return false;
    std::int64_t candidate = b.index_sum / b.count;
    if (candidate < 0 || candidate >= n) return false;
    auto idx = static_cast<std::uint64_t>(candidate);
    if (bucket_of(pos / width, idx) != pos) return false;
    if (b.fingerprint != mul_mod(field_of(b.count), power_of_base(idx))) return false;
    index = idx;
    value = b.count;
    return true;
  };

  std::map<std::uint64_t, std::int64_t> found;
  std::vector<std::size_t> pending(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) pending[i] = work.size() - 1 - i;
  std::size_t peels = 0;
  const std::size_t peel_cap = 2 * work.size() + 16;

  while (!pending.empty()) {
    std::size_t pos = pending.back();
    pending.pop_back();
    std::uint64_t index = 0;
    std::int64_t value = 0;
    if (!pure(pos, index, value)) continue;
    if (++peels > peel_cap) return std::nullopt;
    found[index] += value;
    apply(work, index, -value, mul_mod(field_of(-value), power_of_base(index)));
    for (std::uint64_t r = 0; r < rows_; ++r) pending.push_back(bucket_of(r, index));
  }

  for (const Bucket& b : work) {
    if (!b.is_zero()) return std::nullopt;
  }
  SparseVector out;
  for (const auto& [index, value] : found) {
    if (value != 0) out.emplace_back(index, value);
  }
  if (out.size() > params_.sparsity) return std::nullopt;
  return out;
}

std::vector<std::uint8_t> SparseRecoverySketch::serialize() const {
  std::vector<std::uint8_t> out;
  out.reserve(40 + buckets_.size() * 24);
  put_u64(out, params_.universe);
  put_u64(out, params_.sparsity);
  put_u64(out, std::bit_cast<std::uint64_t>(params_.failure_prob));
  put_u64(out, rows_);
  put_u64(out, params_.seed);
  for (const Bucket& b : buckets_) {
    put_u64(out, static_cast<std::uint64_t>(b.count));
    put_u64(out, static_cast<std::uint64_t>(b.index_sum));
    put_u64(out, b.fingerprint);
  }
  return out;
}

SparseRecoverySketch SparseRecoverySketch::deserialize(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  SketchParams params;
  params.universe = get_u64(bytes, pos);
  params.sparsity = get_u64(bytes, pos);
  params.failure_prob = std::bit_cast<double>(get_u64(bytes, pos));
  std::uint64_t rows = get_u64(bytes, pos);
  params.seed = get_u64(bytes, pos);
  SparseRecoverySketch sketch(params);
  if (rows != sketch.rows_) throw std::invalid_argument("sketch snapshot row count mismatch");
  if (bytes.size() != 40 + sketch.buckets_.size() * 24) {
    throw std::invalid_argument("sketch snapshot has the wrong length");
  }
  for (Bucket& b : sketch.buckets_) {
    b.count = static_cast<std::int64_t>(get_u64(bytes, pos));
    b.index_sum = static_cast<std::int64_t>(get_u64(bytes, pos));
    b.fingerprint = get_u64(bytes, pos);
    if (b.fingerprint >= P) throw std::invalid_argument("sketch snapshot fingerprint out of field");
  }
  return sketch;
}

SparseRecoverySketch merged(SparseRecoverySketch a, const SparseRecoverySketch& b) {
  a.merge(b);
  return a;
}

}  // namespace pcs
