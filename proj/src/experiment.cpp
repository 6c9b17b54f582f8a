#include "pcs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pcs/errors.hpp"
#include "pcs/prf.hpp"

namespace pcs {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

void read_optional(const json& j, const char* key, std::optional<double>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
  } else {
    out = j.at(key).get<double>();
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return key == k; }) == keys.end()) {
      throw std::invalid_argument(fmt::format("unknown key '{}' in {}", key, where));
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c) {
  json j = {
      {"name", c.name},
      {"seed", c.seed},
      {"trials", c.trials},
      {"graph",
       {{"model", c.graph.model},
        {"n", c.graph.n},
        {"d", c.graph.d},
        {"p", c.graph.p},
        {"cliques", c.graph.cliques},
        {"size", c.graph.size},
        {"bridges", c.graph.bridges},
        {"p_in", c.graph.p_in},
        {"p_out", c.graph.p_out}}},
      {"stream", {{"enabled", c.stream.enabled}, {"churn", c.stream.churn}}},
      {"decomp",
       {{"epsilon", c.decomp.epsilon},
        {"k", c.decomp.k},
        {"delta", c.decomp.delta},
        {"C", c.decomp.failure_exponent},
        {"alpha", optional_number(c.decomp.alpha)},
        {"b", optional_number(c.decomp.b)},
        {"volume_bound", optional_number(c.decomp.volume_bound)},
        {"mode", std::string(to_string(c.decomp.mode))},
        {"upsilon_scale", optional_number(c.decomp.upsilon_scale)},
        {"enumeration_limit", c.decomp.enumeration_limit},
        {"exact_size_limit", c.decomp.exact_size_limit},
        {"search_nodes", c.decomp.search_nodes},
        {"stream_retries", c.decomp.stream_retries}}},
      {"output", {{"csv", c.csv_path}, {"json", c.json_path}}},
      {"record_timing", c.record_timing},
      {"threads", c.threads},
  };
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    reject_unknown(j, {"name", "seed", "trials", "graph", "stream", "decomp", "output", "record_timing", "threads"},
                   "config");
    read(j, "name", c.name);
    read(j, "seed", c.seed);
    read(j, "trials", c.trials);
    read(j, "record_timing", c.record_timing);
    read(j, "threads", c.threads);
    if (j.contains("graph")) {
      const json& g = j.at("graph");
      reject_unknown(g, {"model", "n", "d", "p", "cliques", "size", "bridges", "p_in", "p_out"}, "graph");
      read(g, "model", c.graph.model);
      read(g, "n", c.graph.n);
      read(g, "d", c.graph.d);
      read(g, "p", c.graph.p);
      read(g, "cliques", c.graph.cliques);
      read(g, "size", c.graph.size);
      read(g, "bridges", c.graph.bridges);
      read(g, "p_in", c.graph.p_in);
      read(g, "p_out", c.graph.p_out);
    }
    if (j.contains("stream")) {
      const json& s = j.at("stream");
      reject_unknown(s, {"enabled", "churn"}, "stream");
      read(s, "enabled", c.stream.enabled);
      read(s, "churn", c.stream.churn);
    }
    if (j.contains("decomp")) {
      const json& d = j.at("decomp");
      reject_unknown(d, {"epsilon", "k", "delta", "C", "alpha", "b", "volume_bound", "mode", "upsilon_scale",
                         "enumeration_limit", "exact_size_limit", "search_nodes", "stream_retries"},
                     "decomp");
      read(d, "epsilon", c.decomp.epsilon);
      read(d, "k", c.decomp.k);
      read(d, "delta", c.decomp.delta);
      read(d, "C", c.decomp.failure_exponent);
      read_optional(d, "alpha", c.decomp.alpha);
      read_optional(d, "b", c.decomp.b);
      read_optional(d, "volume_bound", c.decomp.volume_bound);
      if (d.contains("mode")) c.decomp.mode = parse_mode(d.at("mode").get<std::string>());
      read_optional(d, "upsilon_scale", c.decomp.upsilon_scale);
      read(d, "enumeration_limit", c.decomp.enumeration_limit);
      read(d, "exact_size_limit", c.decomp.exact_size_limit);
      read(d, "search_nodes", c.decomp.search_nodes);
      read(d, "stream_retries", c.decomp.stream_retries);
    }
    if (j.contains("output")) {
      const json& o = j.at("output");
      reject_unknown(o, {"csv", "json"}, "output");
      read(o, "csv", c.csv_path);
      read(o, "json", c.json_path);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
  if (c.trials < 0) throw std::invalid_argument("trials must be non-negative");
  c.decomp.source = c.stream.enabled ? SparsifierSource::Stream : SparsifierSource::Offline;
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return config_from_json(buffer.str());
  } catch (const std::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

int worker_count(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("PCS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

TrialOutcome run_trial(const ExperimentConfig& config, int trial) {
  TrialOutcome out;
  out.trial = trial;
  out.seed = derive_seed(config.seed, static_cast<std::uint64_t>(trial));
  auto start = std::chrono::steady_clock::now();
  try {
    Graph g = generate(config.graph, derive_seed(out.seed, "graph"));
    out.n = g.num_vertices();
    DecompParams params = config.decomp;
    params.source = config.stream.enabled ? SparsifierSource::Stream : SparsifierSource::Offline;
    params.seed = derive_seed(out.seed, "decomp");
    if (config.stream.enabled) {
      EdgeStream stream = gen_stream(g, config.stream.churn, derive_seed(out.seed, "stream"));
      out.result = decompose(g, params, &stream);
    } else {
      out.result = decompose(g, params);
    }
    const RunReport& r = out.result.report;
    out.status = r.verification.passes() && r.violations.empty() ? "ok" : "verify-fail";
  } catch (const SketchFailure& e) {
    out.status = "sketch-fail";
    out.error = e.what();
  } catch (const std::exception& e) {
    out.status = "error";
    out.error = e.what();
  }
  out.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.trials < 0) throw std::invalid_argument("trials must be non-negative");
  ExperimentResult result;
  result.trials.resize(static_cast<std::size_t>(config.trials));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int t = next++; t < config.trials; t = next++) result.trials[t] = run_trial(config, t);
  };
  const int threads = std::min(worker_count(config.threads), std::max(config.trials, 1));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::string csv =
      "trial,seed,status,mode,source,n,epsilon,k,intercluster_fraction,min_cluster_conductance,"
      "conductance_exact,clusters,singleton_count,depth,outer_iterations,violations,"
      "sketch_memory_bytes";
  if (config.record_timing) csv += ",wall_ms";
  csv += '\n';

  json trials = json::array();
  double fraction_sum = 0.0;
  double fraction_max = 0.0;
  int completed = 0;
  for (const TrialOutcome& t : result.trials) {
    if (t.status == "verify-fail") ++result.verify_failures;
    if (t.status == "sketch-fail") ++result.sketch_failures;
    if (t.status == "error") ++result.errors;
    const bool ran = t.status == "ok" || t.status == "verify-fail";
    const RunReport& r = t.result.report;
    std::string min_phi;
    bool exact = true;
    if (ran) {
      double lowest = std::numeric_limits<double>::infinity();
      bool any = false;
      for (const ClusterVerdict& v : r.verification.clusters) {
        if (v.size < 2) continue;
        any = true;
        if (v.min_conductance) {
          lowest = std::min(lowest, *v.min_conductance);
        } else {
          exact = false;
          lowest = std::min(lowest, v.lower_bound);
        }
      }
      if (any && std::isfinite(lowest)) min_phi = fmt::format("{}", lowest);
      fraction_sum += r.intercluster_fraction;
      fraction_max = std::max(fraction_max, r.intercluster_fraction);
      ++completed;
    }
    csv += fmt::format("{},{},{},{},{},{},{},{},", t.trial, t.seed, t.status, to_string(config.decomp.mode),
                       config.stream.enabled ? "stream" : "offline", t.n, config.decomp.epsilon,
                       config.decomp.k);
    if (ran) {
      csv += fmt::format("{},{},{},{},{},{},{},{},{}", r.intercluster_fraction, min_phi, exact ? 1 : 0,
                         r.cluster_sizes.size(), r.singleton_count, r.depth, r.outer_iterations,
                         r.violations.size(), r.sketch_memory_bytes);
    } else {
      csv += ",,,,,,,,";
    }
    if (config.record_timing) csv += fmt::format(",{:.3f}", t.wall_ms);
    csv += '\n';

    json entry = {{"trial", t.trial}, {"seed", t.seed}, {"status", t.status}};
    if (!t.error.empty()) entry["error"] = csv_field(t.error);
    if (ran) entry["report"] = json::parse(r.to_json());
    if (config.record_timing) entry["wall_ms"] = t.wall_ms;
    trials.push_back(std::move(entry));
  }

  json summary = {
      {"config", json::parse(config_to_json(config))},
      {"trials", config.trials},
      {"completed", completed},
      {"verify_failures", result.verify_failures},
      {"sketch_failures", result.sketch_failures},
      {"errors", result.errors},
      {"mean_intercluster_fraction", completed > 0 ? json(fraction_sum / completed) : json(nullptr)},
      {"max_intercluster_fraction", completed > 0 ? json(fraction_max) : json(nullptr)},
      {"results", trials},
  };
  result.csv = std::move(csv);
  result.json = summary.dump(2) + "\n";

  auto write = [](const std::string& path, const std::string& text) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("error writing " + path);
  };
  write(config.csv_path, result.csv);
  write(config.json_path, result.json);
  return result;
}

}  // namespace pcs
