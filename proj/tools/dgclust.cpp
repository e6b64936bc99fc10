// dgclust: ingest taxi trips into a weighted digraph, cluster it, compare
// partitions, generate planted benchmarks and export colored graphs.
//
// Exit codes: 0 success, 2 usage/config, 3 numeric/convergence, 4 I/O.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dgclust/dgclust.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;
using namespace dgclust;

enum ExitCode { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

// DGCLUST_LOG=quiet|info|debug (default info) controls stderr chatter.
int log_level() {
  const char* env = std::getenv("DGCLUST_LOG");
  if (!env) return 1;
  const std::string v = env;
  if (v == "quiet" || v == "0") return 0;
  if (v == "debug" || v == "2") return 2;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "dgclust: " << msg << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json input_entry(const std::string& path) {
  return {{"path", path}, {"fnv1a64", fnv1a64(read_file(path))}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("error while writing '" + path + "'");
}

void write_json(const std::string& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

ordered_json manifest(const std::string& command, ordered_json inputs, ordered_json parameters, ordered_json flags,
                      ordered_json outputs) {
  ordered_json m;
  m["tool"] = "dgclust";
  m["version"] = kVersion;
  m["command"] = command;
  m["inputs"] = std::move(inputs);
  m["parameters"] = std::move(parameters);
  m["flags"] = std::move(flags);
  m["outputs"] = std::move(outputs);
  return m;
}

std::string default_manifest_path(const std::string& out) { return out + ".manifest.json"; }

std::optional<std::size_t> parse_count_or_auto(const std::string& s, const char* what) {
  if (s == "auto") return std::nullopt;
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(std::string(what) + " must be a positive integer or 'auto', got '" + s + "'");
  return v;
}

WeightRange parse_range(const std::string& s) {
  const auto comma = s.find(',');
  auto lo = detail::parse_double(s.substr(0, comma));
  auto hi = comma == std::string::npos ? lo : detail::parse_double(s.substr(comma + 1));
  if (!lo || !hi) throw ConfigError("weight range must be 'lo,hi', got '" + s + "'");
  return {*lo, *hi};
}

// ---------------------------------------------------------------- ingest

struct IngestOptions {
  std::string trips, out, report, manifest;
  std::string weight_mode = "mean_travel_time";
  TripColumns columns;
};

int run_ingest(const IngestOptions& o) {
  const WeightMode mode = parse_weight_mode(o.weight_mode);
  const TripIngest in = ingest_trips_file(o.trips, o.columns);
  log_info("read " + std::to_string(in.rows_read) + " rows, dropped " + std::to_string(in.dropped));
  const WeightedDigraph g = build_graph(in.records, mode);
  write_graph_file(g, o.out);

  ordered_json isolated = ordered_json::array();
  for (auto i : isolated_nodes(with_zero_diagonal(g.weights))) isolated.push_back(g.node_ids[i]);
  ordered_json report;
  report["rows_read"] = in.rows_read;
  report["rows_dropped"] = in.dropped;
  report["nodes"] = g.size();
  report["edges"] = g.edge_count();
  report["isolated_nodes"] = isolated;
  const std::string report_path = o.report.empty() ? o.out + ".report.json" : o.report;
  write_json(report_path, report);

  ordered_json params;
  params["weight_mode"] = to_string(mode);
  params["columns"] = {{"pickup", o.columns.pickup}, {"dropoff", o.columns.dropoff}, {"duration", o.columns.duration}};
  write_json(o.manifest.empty() ? default_manifest_path(o.out) : o.manifest,
             manifest("ingest", ordered_json::array({input_entry(o.trips)}), params, ordered_json::object(),
                      ordered_json::array({o.out, report_path})));
  std::cout << report.dump() << '\n';
  return kOk;
}

// --------------------------------------------------------------- cluster

struct ClusterOptions {
  std::string graph, out, manifest;
  std::string algorithm;
  std::string k = "2";
  std::string d = "auto";
  std::optional<double> gamma;
  int walk_length = 4;
  double teleport = 0.0;
  std::uint64_t seed = 0;
  int restarts = 10;
  std::string kernel = "cdf";
};

int run_cluster_cmd(const ClusterOptions& o) {
  ClusterRequest req;
  req.algorithm = parse_algorithm(o.algorithm);
  req.k = parse_count_or_auto(o.k, "--k");
  if (!req.k && req.algorithm != Algorithm::walktrap && req.algorithm != Algorithm::leiden)
    throw ConfigError("--k auto is only supported by walktrap");
  req.d = parse_count_or_auto(o.d, "--d");
  req.gamma = o.gamma;
  req.walk_length = o.walk_length;
  req.teleport = o.teleport;
  req.seed = o.seed;
  req.restarts = o.restarts;
  if (o.kernel == "cdf") req.kernel = KernelKind::cdf;
  else if (o.kernel == "density") req.kernel = KernelKind::density;
  else throw ConfigError("--kernel must be 'cdf' or 'density'");

  const WeightedDigraph g = read_graph_file(o.graph);
  const ClusterOutcome r = run_cluster(g, req);
  log_info(std::string(to_string(req.algorithm)) + ": " + std::to_string(r.partition.k) + " clusters over " +
           std::to_string(g.size() - r.excluded.size()) + " nodes");

  std::ostringstream csv;
  write_assignments(g.node_ids, r.partition, csv);
  write_text(o.out, csv.str());

  ordered_json params;
  params["algorithm"] = to_string(req.algorithm);
  params["k"] = req.algorithm == Algorithm::leiden ? ordered_json(nullptr)
                : req.k                           ? ordered_json(*req.k)
                                                  : ordered_json("auto");
  params["clusters_found"] = r.partition.k;
  params["d"] = r.d ? ordered_json(*r.d) : ordered_json(nullptr);
  params["gamma"] = r.gamma ? ordered_json(*r.gamma) : ordered_json(nullptr);
  params["walk_length"] = req.algorithm == Algorithm::walktrap ? ordered_json(req.walk_length) : ordered_json(nullptr);
  params["teleport"] = r.teleport ? ordered_json(*r.teleport) : ordered_json(nullptr);
  params["kernel"] = req.algorithm == Algorithm::randwalk ? ordered_json(o.kernel) : ordered_json(nullptr);
  params["seed"] = req.seed;
  params["restarts"] = req.restarts;
  params["weight_mode"] = nullptr;  // not recorded in graph files

  ordered_json flags;
  flags["teleport_applied"] = r.teleport_applied;
  flags["degenerate_spectrum"] = r.degenerate;
  flags["kernel_degenerate"] = r.kernel_degenerate;
  ordered_json excluded = ordered_json::array();
  for (auto i : r.excluded) excluded.push_back(g.node_ids[i]);
  flags["excluded_nodes"] = excluded;
  if (r.eigenvalue) flags["second_eigenvalue"] = {r.eigenvalue->real(), r.eigenvalue->imag()};
  if (r.quality) flags["quality"] = *r.quality;

  write_json(o.manifest.empty() ? default_manifest_path(o.out) : o.manifest,
             manifest("cluster", ordered_json::array({input_entry(o.graph)}), params, flags,
                      ordered_json::array({o.out})));
  return kOk;
}

// --------------------------------------------------------------- compare

struct CompareOptions {
  std::string a, b, out, manifest;
};

int run_compare(const CompareOptions& o) {
  const auto [pa, pb] = align_assignments(read_assignments_file(o.a), read_assignments_file(o.b));
  const AgreementReport rep = agreement(pa, pb);
  ordered_json j;
  j["ari"] = rep.ari;
  j["nmi"] = rep.nmi;
  j["compared"] = rep.compared;
  j["excluded"] = rep.excluded;
  j["contingency"] = rep.contingency;
  std::cout << j.dump() << '\n';
  if (!o.out.empty()) {
    write_json(o.out, j);
    write_json(o.manifest.empty() ? default_manifest_path(o.out) : o.manifest,
               manifest("compare", ordered_json::array({input_entry(o.a), input_entry(o.b)}), ordered_json::object(),
                        ordered_json::object(), ordered_json::array({o.out})));
  }
  return kOk;
}

// ----------------------------------------------------------------- synth

struct SynthOptions {
  std::vector<std::size_t> blocks{40, 40};
  double p_in = 0.5, p_out = 0.05;
  std::string w_in = "1,1", w_out = "1,1";
  std::uint64_t seed = 0;
  std::string out, truth, manifest;
};

int run_synth(const SynthOptions& o) {
  SbmSpec spec{o.blocks, o.p_in, o.p_out, parse_range(o.w_in), parse_range(o.w_out), o.seed};
  const PlantedGraph pg = generate_sbm(spec);
  write_graph_file(pg.graph, o.out);
  const std::string truth = o.truth.empty() ? o.out + ".truth.csv" : o.truth;
  std::ostringstream csv;
  write_assignments(pg.graph.node_ids, pg.truth, csv);
  write_text(truth, csv.str());

  ordered_json params;
  params["blocks"] = o.blocks;
  params["p_in"] = o.p_in;
  params["p_out"] = o.p_out;
  params["w_in"] = {spec.w_in.lo, spec.w_in.hi};
  params["w_out"] = {spec.w_out.lo, spec.w_out.hi};
  params["seed"] = o.seed;
  write_json(o.manifest.empty() ? default_manifest_path(o.out) : o.manifest,
             manifest("synth", ordered_json::array(), params, ordered_json::object(), ordered_json::array({o.out, truth})));
  return kOk;
}

// ---------------------------------------------------------------- export

struct ExportOptions {
  std::string graph, assignments, out, manifest;
  std::string format = "dot";
};

int run_export(const ExportOptions& o) {
  const WeightedDigraph g = read_graph_file(o.graph);
  const Assignments a = read_assignments_file(o.assignments);
  std::vector<int> labels(g.size(), Partition::kExcluded);
  for (std::size_t i = 0; i < a.node_ids.size(); ++i) {
    const auto idx = g.index_of(a.node_ids[i]);
    if (!idx) throw DomainError("assignment references unknown node " + std::to_string(a.node_ids[i]));
    labels[*idx] = a.clusters[i];
  }
  const Partition p{labels, static_cast<int>(std::set<int>(labels.begin(), labels.end()).size())};
  std::ostringstream text;
  if (o.format == "dot") write_dot(g, p, text);
  else if (o.format == "graphml") write_graphml(g, p, text);
  else throw ConfigError("--format must be 'dot' or 'graphml'");
  write_text(o.out, text.str());
  write_json(o.manifest.empty() ? default_manifest_path(o.out) : o.manifest,
             manifest("export", ordered_json::array({input_entry(o.graph), input_entry(o.assignments)}),
                      {{"format", o.format}}, ordered_json::object(), ordered_json::array({o.out})));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed-graph clustering of origin-destination trip networks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  IngestOptions ing;
  auto* ingest = app.add_subcommand("ingest", "Aggregate a trips CSV into a graph file");
  ingest->add_option("trips", ing.trips, "Trips CSV")->required();
  ingest->add_option("out", ing.out, "Output graph file")->required();
  ingest->add_option("--weight-mode", ing.weight_mode, "mean_travel_time | trip_count | inverse_mean_time");
  ingest->add_option("--pickup-col", ing.columns.pickup, "Pickup area column");
  ingest->add_option("--dropoff-col", ing.columns.dropoff, "Dropoff area column");
  ingest->add_option("--duration-col", ing.columns.duration, "Trip duration column (seconds)");
  ingest->add_option("--report", ing.report, "Ingest report JSON (default <out>.report.json)");
  ingest->add_option("--manifest", ing.manifest, "Run manifest (default <out>.manifest.json)");

  ClusterOptions cl;
  auto* cluster = app.add_subcommand("cluster", "Cluster a graph file");
  cluster->add_option("graph", cl.graph, "Graph file")->required();
  cluster->add_option("-a,--algorithm", cl.algorithm,
                      "spectral-unnorm | spectral-norm | leiden | walktrap | simple-sym | bibliometric | cdl | svd | randwalk")
      ->required();
  cluster->add_option("-k,--k", cl.k, "Cluster count (walktrap also accepts 'auto')");
  cluster->add_option("--d", cl.d, "SVD latent dimension or 'auto'");
  cluster->add_option("--gamma", cl.gamma, "Leiden CPM resolution (default: edge density)");
  cluster->add_option("--walk-length", cl.walk_length, "Walktrap walk length");
  cluster->add_option("--teleport", cl.teleport, "Teleport probability for cdl / randwalk");
  cluster->add_option("--seed", cl.seed, "Random seed");
  cluster->add_option("--restarts", cl.restarts, "k-means restarts");
  cluster->add_option("--kernel", cl.kernel, "randwalk kernel: cdf | density");
  cluster->add_option("-o,--out", cl.out, "Assignments CSV")->required();
  cluster->add_option("--manifest", cl.manifest, "Run manifest (default <out>.manifest.json)");

  CompareOptions cmp;
  auto* compare = app.add_subcommand("compare", "Agreement (ARI, NMI) between two assignment files");
  compare->add_option("a", cmp.a, "First assignments CSV")->required();
  compare->add_option("b", cmp.b, "Second assignments CSV")->required();
  compare->add_option("-o,--out", cmp.out, "Report JSON");
  compare->add_option("--manifest", cmp.manifest, "Run manifest (default <out>.manifest.json)");

  SynthOptions syn;
  auto* synth = app.add_subcommand("synth", "Generate a directed stochastic block model");
  synth->add_option("--blocks", syn.blocks, "Block sizes")->delimiter(',');
  synth->add_option("--p-in", syn.p_in, "Within-block edge probability");
  synth->add_option("--p-out", syn.p_out, "Between-block edge probability");
  synth->add_option("--w-in", syn.w_in, "Within-block weight range lo,hi");
  synth->add_option("--w-out", syn.w_out, "Between-block weight range lo,hi");
  synth->add_option("--seed", syn.seed, "Random seed");
  synth->add_option("-o,--out", syn.out, "Output graph file")->required();
  synth->add_option("--truth", syn.truth, "Ground-truth CSV (default <out>.truth.csv)");
  synth->add_option("--manifest", syn.manifest, "Run manifest (default <out>.manifest.json)");

  ExportOptions exp;
  auto* exporter = app.add_subcommand("export", "Render a clustered graph as DOT or GraphML");
  exporter->add_option("graph", exp.graph, "Graph file")->required();
  exporter->add_option("assignments", exp.assignments, "Assignments CSV")->required();
  exporter->add_option("--format", exp.format, "dot | graphml");
  exporter->add_option("-o,--out", exp.out, "Output file")->required();
  exporter->add_option("--manifest", exp.manifest, "Run manifest (default <out>.manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*ingest) return run_ingest(ing);
    if (*cluster) return run_cluster_cmd(cl);
    if (*compare) return run_compare(cmp);
    if (*synth) return run_synth(syn);
    if (*exporter) return run_export(exp);
  } catch (const ConfigError& e) {
    std::cerr << "dgclust: error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "dgclust: error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    std::cerr << "dgclust: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const IoError& e) {
    std::cerr << "dgclust: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const dgclust::ParseError& e) {
    std::cerr << "dgclust: malformed input: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}
