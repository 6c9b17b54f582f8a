#include "pcs/graph_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace pcs {

namespace {

std::string next_data_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return line;
  }
  return {};
}

}  // namespace

Graph read_graph(std::istream& in) {
  std::istringstream header(next_data_line(in));
  long long n = -1, m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) {
    throw std::runtime_error("graph header must be \"n m\"");
  }
  Graph g(static_cast<int>(n));
  for (long long i = 0; i < m; ++i) {
    std::string line = next_data_line(in);
    std::istringstream row(line);
    long long u, v;
    if (!(row >> u >> v)) {
      throw std::runtime_error(fmt::format("edge line {} is malformed: \"{}\"", i + 1, line));
    }
    double w = 1.0;
    if (!(row >> w)) w = 1.0;
    g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), w);
  }
  return g;
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) {
    if (e.w == 1.0) {
      out << e.u << ' ' << e.v << '\n';
    } else {
      out << fmt::format("{} {} {}\n", e.u, e.v, e.w);
    }
  }
}

Partition read_partition(std::istream& in, int n) {
  std::map<long long, std::vector<VertexId>> clusters;
  for (int i = 0; i < n; ++i) {
    std::istringstream row(next_data_line(in));
    long long v, id;
    if (!(row >> v >> id)) throw std::runtime_error("partition line must be \"v cluster_id\"");
    clusters[id].push_back(static_cast<VertexId>(v));
  }
  Partition p;
  for (auto& [id, members] : clusters) p.emplace_back(std::move(members));
  validate_partition(n, p);
  return normalized(std::move(p));
}

void write_partition(std::ostream& out, int n, const Partition& partition) {
  validate_partition(n, partition);
  std::vector<std::size_t> cluster_of(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < partition.size(); ++i) {
    for (VertexId v : partition[i]) cluster_of[v] = i;
  }
  for (int v = 0; v < n; ++v) out << v << ' ' << cluster_of[v] << '\n';
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path);
  try {
    return read_graph(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file " + path);
  write_graph(out, g);
}

Partition load_partition(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open partition file " + path);
  try {
    return read_partition(in, n);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_partition(const std::string& path, int n, const Partition& partition) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write partition file " + path);
  write_partition(out, n, partition);
}

}  // namespace pcs
