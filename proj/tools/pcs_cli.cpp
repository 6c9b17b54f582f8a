#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pcs/errors.hpp"
#include "pcs/experiment.hpp"
#include "pcs/generators.hpp"
#include "pcs/graph_io.hpp"
#include "pcs/power_sparsifier.hpp"
#include "pcs/stream_engine.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerify = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSketch = 3;

void emit_graph(const std::string& path, const pcs::Graph& g) {
  if (path.empty() || path == "-") {
    pcs::write_graph(std::cout, g);
  } else {
    pcs::save_graph(path, g);
  }
}

void emit_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct SparsifyOptions {
  std::string graph;
  std::string stream;
  std::string out;
  double epsilon = 0.5;
  double delta = 0.5;
  double c = 1.0;
  std::optional<double> upsilon_scale;
  std::uint64_t seed = 0;

  pcs::SparsifierParams params() const {
    pcs::SparsifierParams p;
    p.epsilon = epsilon;
    p.delta = delta;
    p.failure_exponent = c;
    p.upsilon_scale = upsilon_scale;
    p.seed = seed;
    p.validate();
    return p;
  }
};

void add_sparsifier_flags(CLI::App* cmd, SparsifyOptions& o) {
  cmd->add_option("--eps", o.epsilon, "additive error epsilon")->capture_default_str();
  cmd->add_option("--delta", o.delta, "multiplicative error delta")->capture_default_str();
  cmd->add_option("--C", o.c, "failure exponent C")->capture_default_str();
  cmd->add_option("--upsilon-scale", o.upsilon_scale, "replace the oversampling factor by scale/(delta eps)");
  cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
  cmd->add_option("-o,--out", o.out, "output file (default stdout)");
}

struct DecomposeOptions {
  std::string graph;
  std::string stream;
  std::string out;
  std::string report;
  std::string mode = "exact";
  bool use_stream = false;
  pcs::DecompParams params;
};

std::string verification_summary(const pcs::VerificationReport& r) {
  return fmt::format("intercluster_fraction={} epsilon={} volume_ok={} phi={} expansion_ok={} exact={} clusters={}\n",
                     r.intercluster_fraction, r.epsilon, r.volume_ok, r.phi, r.expansion_ok, r.exact,
                     r.clusters.size());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Power cut sparsifiers, dynamic-stream sketches and expander decomposition"};
  app.require_subcommand(1);

  pcs::GraphSpec spec;
  std::uint64_t graph_seed = 0;
  std::string graph_out;
  auto* gen_graph = app.add_subcommand("gen-graph", "generate a graph");
  gen_graph->add_option("--model", spec.model, "regular|gnp|barbell|planted")->capture_default_str();
  gen_graph->add_option("--n", spec.n, "vertices (regular, gnp)")->capture_default_str();
  gen_graph->add_option("--d", spec.d, "degree (regular)")->capture_default_str();
  gen_graph->add_option("--p", spec.p, "edge probability (gnp)")->capture_default_str();
  gen_graph->add_option("--cliques", spec.cliques, "cliques or clusters (barbell, planted)")->capture_default_str();
  gen_graph->add_option("--size", spec.size, "clique or cluster size (barbell, planted)")->capture_default_str();
  gen_graph->add_option("--bridges", spec.bridges, "bridge edges (barbell)")->capture_default_str();
  gen_graph->add_option("--p-in", spec.p_in, "within-cluster probability (planted)")->capture_default_str();
  gen_graph->add_option("--p-out", spec.p_out, "between-cluster probability (planted)")->capture_default_str();
  gen_graph->add_option("--seed", graph_seed, "random seed")->capture_default_str();
  gen_graph->add_option("-o,--out", graph_out, "output file (default stdout)");

  std::string stream_graph;
  std::string stream_out;
  double churn = 0.0;
  std::uint64_t stream_seed = 0;
  auto* gen_stream = app.add_subcommand("gen-stream", "turn a graph into a shuffled update stream");
  gen_stream->add_option("--graph", stream_graph, "input graph")->required();
  gen_stream->add_option("--churn", churn, "decoy insert/delete pairs per edge")->capture_default_str();
  gen_stream->add_option("--seed", stream_seed, "random seed")->capture_default_str();
  gen_stream->add_option("-o,--out", stream_out, "output file (default stdout)");

  SparsifyOptions sparsify_opts;
  auto* sparsify = app.add_subcommand("sparsify", "sample a power cut sparsifier offline");
  sparsify->add_option("--graph", sparsify_opts.graph, "input graph")->required();
  add_sparsifier_flags(sparsify, sparsify_opts);

  SparsifyOptions sketch_opts;
  auto* sketch = app.add_subcommand("sketch", "run the streaming algorithm and dump the recovered sparsifier");
  sketch->add_option("--stream", sketch_opts.stream, "input stream")->required();
  add_sparsifier_flags(sketch, sketch_opts);

  DecomposeOptions dec;
  std::optional<double> alpha, b, volume_bound, upsilon_scale;
  auto* decompose = app.add_subcommand("decompose", "expander decomposition");
  decompose->add_option("--graph", dec.graph, "input graph")->required();
  decompose->add_option("--mode", dec.mode, "exact|fast")->capture_default_str();
  decompose->add_flag("--use-stream", dec.use_stream, "recover sparsifiers from a stream");
  decompose->add_option("--stream", dec.stream, "stream whose net graph is --graph (implies --use-stream)");
  decompose->add_option("--eps", dec.params.epsilon, "intercluster volume fraction")->capture_default_str();
  decompose->add_option("--k", dec.params.k, "number of passes")->capture_default_str();
  decompose->add_option("--delta", dec.params.delta, "sparsifier accuracy")->capture_default_str();
  decompose->add_option("--C", dec.params.failure_exponent, "failure exponent")->capture_default_str();
  decompose->add_option("--alpha", alpha, "balanced-cut sparsity slack");
  decompose->add_option("--b", b, "balanced-cut balance factor");
  decompose->add_option("--vol-bound", volume_bound, "upper bound on Vol(G)");
  decompose->add_option("--upsilon-scale", upsilon_scale, "replace the oversampling factor by scale/(delta psi)");
  decompose->add_option("--seed", dec.params.seed, "random seed")->capture_default_str();
  decompose->add_option("--enumeration-limit", dec.params.enumeration_limit, "largest cluster checked by enumeration")
      ->capture_default_str();
  decompose->add_option("--size-limit", dec.params.exact_size_limit, "largest cluster handled exactly")
      ->capture_default_str();
  decompose->add_option("--retries", dec.params.stream_retries, "stream recovery retries per sparsifier")
      ->capture_default_str();
  decompose->add_option("-o,--out", dec.out, "partition output (default stdout)");
  decompose->add_option("--report", dec.report, "RunReport JSON output");

  std::string verify_graph, verify_partition;
  double verify_phi = 0.0;
  double verify_eps = 0.0;
  pcs::VerifyOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "check an (eps, phi) expander decomposition");
  verify->add_option("--graph", verify_graph, "input graph")->required();
  verify->add_option("--partition", verify_partition, "partition file")->required();
  verify->add_option("--phi", verify_phi, "required cluster conductance")->required();
  verify->add_option("--eps", verify_eps, "intercluster volume fraction")->required();
  verify->add_option("--enumeration-limit", verify_opts.enumeration_limit)->capture_default_str();
  verify->add_option("--size-limit", verify_opts.size_limit)->capture_default_str();
  verify->add_flag("--allow-heuristic", verify_opts.allow_heuristic,
                   "sweep-check clusters above the size limit instead of refusing");

  std::string config_path, csv_override, json_override;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("--csv", csv_override, "override the CSV output path");
  run->add_option("--json", json_override, "override the JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*gen_graph) {
      emit_graph(graph_out, pcs::generate(spec, graph_seed));
      return kExitPass;
    }
    if (*gen_stream) {
      pcs::EdgeStream s = pcs::gen_stream(pcs::load_graph(stream_graph), churn, stream_seed);
      if (stream_out.empty() || stream_out == "-") {
        pcs::write_stream(std::cout, s);
      } else {
        pcs::save_stream(stream_out, s);
      }
      return kExitPass;
    }
    if (*sparsify) {
      emit_graph(sparsify_opts.out, pcs::sample(pcs::load_graph(sparsify_opts.graph), sparsify_opts.params()));
      return kExitPass;
    }
    if (*sketch) {
      pcs::EdgeStream s = pcs::load_stream(sketch_opts.stream);
      pcs::StreamState state(s.n, sketch_opts.params());
      state.process(s.updates);
      std::optional<pcs::Graph> h = state.recover_sparsifier();
      std::cerr << fmt::format("sketch memory: {} bytes\n", state.memory_bytes());
      if (!h) {
        std::cerr << "sparse recovery reported FAIL\n";
        return kExitSketch;
      }
      emit_graph(sketch_opts.out, *h);
      return kExitPass;
    }
    if (*decompose) {
      dec.params.mode = pcs::parse_mode(dec.mode);
      dec.params.alpha = alpha;
      dec.params.b = b;
      dec.params.volume_bound = volume_bound;
      dec.params.upsilon_scale = upsilon_scale;
      const bool stream_source = dec.use_stream || !dec.stream.empty();
      dec.params.source = stream_source ? pcs::SparsifierSource::Stream : pcs::SparsifierSource::Offline;
      pcs::Graph g = pcs::load_graph(dec.graph);
      std::optional<pcs::EdgeStream> stream;
      if (!dec.stream.empty()) stream = pcs::load_stream(dec.stream);
      pcs::DecompResult result = pcs::decompose(g, dec.params, stream ? &*stream : nullptr);
      if (dec.out.empty() || dec.out == "-") {
        pcs::write_partition(std::cout, g.num_vertices(), result.partition);
      } else {
        pcs::save_partition(dec.out, g.num_vertices(), result.partition);
      }
      if (!dec.report.empty()) emit_text(dec.report, result.report.to_json() + "\n");
      std::cerr << verification_summary(result.report.verification);
      for (const std::string& v : result.report.violations) std::cerr << "violation: " << v << "\n";
      const bool ok = result.report.verification.passes() && result.report.violations.empty();
      return ok ? kExitPass : kExitVerify;
    }
    if (*verify) {
      pcs::Graph g = pcs::load_graph(verify_graph);
      pcs::Partition p = pcs::load_partition(verify_partition, g.num_vertices());
      pcs::VerificationReport r = pcs::verify_decomposition(g, p, verify_eps, verify_phi, verify_opts);
      std::cout << verification_summary(r);
      for (std::size_t i = 0; i < r.clusters.size(); ++i) {
        const pcs::ClusterVerdict& c = r.clusters[i];
        std::cout << fmt::format("cluster {} size={} volume={} lower_bound={} method={} passes={}\n", i, c.size,
                                 c.volume, c.lower_bound, c.method, c.passes);
      }
      return r.passes() ? kExitPass : kExitVerify;
    }
    if (*run) {
      pcs::ExperimentConfig config = pcs::load_config(config_path);
      if (!csv_override.empty()) config.csv_path = csv_override;
      if (!json_override.empty()) config.json_path = json_override;
      pcs::ExperimentResult result = pcs::run_experiment(config);
      if (config.csv_path.empty()) std::cout << result.csv;
      std::cerr << fmt::format("trials={} verify_failures={} sketch_failures={} errors={}\n",
                               result.trials.size(), result.verify_failures, result.sketch_failures,
                               result.errors);
      if (result.errors > 0) return kExitConfig;
      if (result.verify_failures > 0) return kExitVerify;
      if (result.sketch_failures > 0) return kExitSketch;
      return kExitPass;
    }
  } catch (const pcs::SketchFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSketch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
