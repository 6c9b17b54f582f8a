#pragma once

#include <iosfwd>
#include <string>

#include "pcs/graph.hpp"

namespace pcs {

// Graph text format: first line "n m", then m lines "u v [w]" with 0-based
// ids; w defaults to 1 and u == v denotes a self-loop.
Graph read_graph(std::istream& in);
/// Writes weights with full round-trip precision; unit weights are omitted.
void write_graph(std::ostream& out, const Graph& g);

// Partition text format: n lines "v cluster_id".
Partition read_partition(std::istream& in, int n);
void write_partition(std::ostream& out, int n, const Partition& partition);

Graph load_graph(const std::string& path);
void save_graph(const std::string& path, const Graph& g);
Partition load_partition(const std::string& path, int n);
void save_partition(const std::string& path, int n, const Partition& partition);

}  // namespace pcs
