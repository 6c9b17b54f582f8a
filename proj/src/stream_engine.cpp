#include "pcs/stream_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pcs/prf.hpp"

namespace pcs {

namespace {

void check_id(int n, VertexId v) {
  if (v < 0 || v >= n) {
    throw std::out_of_range("stream vertex " + std::to_string(v) + " out of range [0, " +
                            std::to_string(n) + ")");
  }
}

}  // namespace

EdgeStream read_stream(std::istream& in) {
  EdgeStream stream;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (!have_header) {
      if (!(fields >> stream.n) || stream.n < 0) {
        throw std::runtime_error("stream header must be a vertex count");
      }
      have_header = true;
      continue;
    }
    std::string op;
    StreamUpdate upd;
    if (!(fields >> op >> upd.u >> upd.v) || (op != "+" && op != "-")) {
      throw std::runtime_error("malformed stream update on line " + std::to_string(line_no));
    }
    upd.op = op == "+" ? UpdateOp::Insert : UpdateOp::Delete;
    check_id(stream.n, upd.u);
    check_id(stream.n, upd.v);
    stream.updates.push_back(upd);
  }
  if (!have_header) throw std::runtime_error("stream is missing its header line");
  return stream;
}

void write_stream(std::ostream& out, const EdgeStream& stream) {
  out << stream.n << '\n';
  for (const StreamUpdate& u : stream.updates) {
    out << (u.op == UpdateOp::Insert ? '+' : '-') << ' ' << u.u << ' ' << u.v << '\n';
  }
}

EdgeStream load_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream file " + path);
  try {
    return read_stream(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_stream(const std::string& path, const EdgeStream& stream) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write stream file " + path);
  write_stream(out, stream);
  if (!out) throw std::runtime_error("error writing stream file " + path);
}

int max_level(int n) {
  if (n <= 1) return 0;
  return static_cast<int>(std::bit_width(static_cast<std::uint32_t>(n - 1)));
}

int edge_level(std::uint64_t seed, VertexId u, VertexId v) {
  std::uint64_t bits = prf(seed, pair_key(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)));
  return std::countl_one(bits);
}

int vertex_level(double deg, double ups, int top_level) {
  int j = 0;
  while (j < top_level && std::ldexp(2.0 * ups, j + 1) <= deg) ++j;
  return j;
}

std::uint64_t level_seed(const SparsifierParams& params) {
  return derive_seed(params.seed, "edge-levels");
}

StreamState::StreamState(int n, const SparsifierParams& params)
    : n_(n), params_(params), upsilon_(0.0), top_level_(max_level(n)) {
  if (n < 1) throw std::invalid_argument("stream needs at least one vertex");
  params.validate();
  upsilon_ = params.resolved_upsilon(n);
  const double k = std::ceil(8.0 * upsilon_);
  sparsity_ = static_cast<std::uint64_t>(std::min(static_cast<double>(n), std::max(1.0, k)));
  failure_prob_ = std::min(0.5, std::pow(static_cast<double>(n), -(params.failure_exponent + 3.0)));
  level_seed_ = level_seed(params);
  deg_.assign(static_cast<std::size_t>(n), 0);

  const std::uint64_t sketch_seed = derive_seed(params.seed, "neighbourhood-sketches");
  sketches_.reserve(static_cast<std::size_t>(top_level_ + 1) * static_cast<std::size_t>(n));
  for (int level = 0; level <= top_level_; ++level) {
    for (VertexId v = 0; v < n; ++v) {
      SketchParams sp;
      sp.universe = static_cast<std::uint64_t>(n);
      sp.sparsity = sparsity_;
      sp.failure_prob = failure_prob_;
      sp.seed = derive_seed(sketch_seed, slot(level, v));
      sketches_.emplace_back(sp);
    }
  }
}

const SketchParams& StreamState::sketch_params(int level, VertexId v) const {
  if (level < 0 || level > top_level_) throw std::out_of_range("level out of range");
  check_id(n_, v);
  return sketches_[slot(level, v)].params();
}

void StreamState::process(const StreamUpdate& update) {
  check_id(n_, update.u);
  check_id(n_, update.v);
  if (update.u == update.v) throw std::invalid_argument("streams may not contain self-loops");
  const std::int64_t delta = update.op == UpdateOp::Insert ? 1 : -1;
  deg_[update.u] += delta;
  deg_[update.v] += delta;
  const int top = std::min(top_level_, level_of(update.u, update.v));
  for (int level = 0; level <= top; ++level) {
    sketches_[slot(level, update.u)].update(static_cast<std::uint64_t>(update.v), delta);
    sketches_[slot(level, update.v)].update(static_cast<std::uint64_t>(update.u), delta);
  }
}

void StreamState::process(std::span<const StreamUpdate> updates) {
  for (const StreamUpdate& u : updates) process(u);
}

std::optional<Graph> StreamState::recover_sparsifier() const {
  std::vector<int> level(static_cast<std::size_t>(n_));
  for (VertexId v = 0; v < n_; ++v) {
    level[v] = vertex_level(static_cast<double>(deg_[v]), upsilon_, top_level_);
  }

  struct Found {
    std::int64_t multiplicity;
    int sides;
  };
  std::map<std::pair<VertexId, VertexId>, Found> found;
  for (VertexId v = 0; v < n_; ++v) {
    if (deg_[v] < 0) return std::nullopt;
    if (deg_[v] == 0) continue;
    auto neighbours = sketches_[slot(level[v], v)].recover();
    if (!neighbours) return std::nullopt;
    std::int64_t seen = 0;
    for (const auto& [index, value] : *neighbours) {
      auto u = static_cast<VertexId>(index);
      // A genuine neighbourhood has positive multiplicities on partners whose
      // edge level reaches j_v; anything else is a recovery error.
      if (value <= 0 || u == v || level_of(u, v) < level[v]) return std::nullopt;
      seen += value;
      auto [it, inserted] = found.try_emplace({std::min(u, v), std::max(u, v)}, Found{value, 1});
      if (!inserted) {
        if (it->second.multiplicity != value) return std::nullopt;
        ++it->second.sides;
      }
    }
    if (level[v] == 0 && seen != deg_[v]) return std::nullopt;
  }

  Graph out(n_);
  for (const auto& [key, f] : found) {
    const auto [u, v] = key;
    const int j = std::min(level[u], level[v]);
    // Both endpoints see the edge exactly when its level reaches max(j_u, j_v).
    const int expected_sides = level_of(u, v) >= std::max(level[u], level[v]) ? 2 : 1;
    if (f.sides != expected_sides) return std::nullopt;
    out.add_edge(u, v, static_cast<double>(f.multiplicity) * std::ldexp(1.0, j));
  }
  return out;
}

std::size_t StreamState::bucket_count() const {
  std::size_t total = 0;
  for (const auto& s : sketches_) total += s.bucket_count();
  return total;
}

std::size_t StreamState::expected_bucket_count() const {
  return static_cast<std::size_t>(n_) * static_cast<std::size_t>(top_level_ + 1) * 2 *
         static_cast<std::size_t>(sparsity_) *
         static_cast<std::size_t>(sketch_rows(failure_prob_));
}

std::size_t StreamState::memory_bytes() const {
  std::size_t total = deg_.size() * sizeof(std::int64_t);
  for (const auto& s : sketches_) total += s.memory_bytes();
  return total;
}

std::vector<std::uint8_t> StreamState::serialize() const {
  std::vector<std::uint8_t> out;
  auto put = [&out](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  put(static_cast<std::uint64_t>(n_));
  put(params_.seed);
  for (std::int64_t d : deg_) put(static_cast<std::uint64_t>(d));
  for (const auto& s : sketches_) {
    auto bytes = s.serialize();
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  return out;
}

Graph sample_offline(const Graph& g, const SparsifierParams& params) {
  params.validate();
  const int n = g.num_vertices();
  const double ups = params.resolved_upsilon(n);
  const int top = max_level(n);
  const std::uint64_t seed = level_seed(params);
  Graph net = g.canonical();
  std::vector<int> level(static_cast<std::size_t>(n));
  for (VertexId v = 0; v < n; ++v) level[v] = vertex_level(net.degree(v), ups, top);
  Graph out(n);
  for (const Edge& e : net.edges()) {
    if (e.is_loop()) throw std::invalid_argument("offline stream sampling needs a loop-free graph");
    if (e.w != std::round(e.w)) {
      throw std::invalid_argument("offline stream sampling needs integral edge multiplicities");
    }
    const int j = std::min(level[e.u], level[e.v]);
    if (edge_level(seed, e.u, e.v) >= j) out.add_edge(e.u, e.v, e.w * std::ldexp(1.0, j));
  }
  return out;
}

}  // namespace pcs
