// wfgraph: command-line front end.
#include "wfg/bakery.hpp"
#include "wfg/certify.hpp"
#include "wfg/error.hpp"
#include "wfg/measure.hpp"
#include "wfg/model.hpp"
#include "wfg/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#ifndef WFG_MODELS_DIR
#define WFG_MODELS_DIR "models"
#endif

namespace {

using namespace wfg;

struct Config {
  std::string model;
  std::string map;
  std::string graph;
  std::string omap;
  std::string out;
  std::string cex;
  std::string backend = "exhaustive";
  std::size_t num = 4096;
  unsigned jobs = 1;
  std::optional<std::int64_t> n, runs, width;
  std::uint64_t seed = 1;
  std::size_t sims = 1;
  std::string dump_cnf;
  bool quiet = false;
};

constexpr int kOk = 0;
constexpr int kFail = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out, std::ios::binary);
  if (!out) throw Error("cannot write " + c.out);
  out << text;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

Model load(const Config& c) {
  ParamOverrides o;
  if (c.n) o["n"] = *c.n;
  if (c.runs) o["r"] = *c.runs;
  if (c.width) o["w"] = *c.width;
  for (const auto& [k, v] : o) {
    if (v < 1) throw Error("parameter " + k + " must be at least 1");
  }
  return load_model(c.model.empty() ? std::string(WFG_MODELS_DIR) + "/bakery.wfm" : c.model, o);
}

struct Session {
  std::unique_ptr<Backend> base;
  std::unique_ptr<Backend> dumping;
  GraphOptions opts;

  const Backend& backend() const { return dumping ? *dumping : *base; }
};

Session session(const Config& c) {
  if (c.num < 1) throw Error("--num must be at least 1");
  Session s;
  s.base = make_backend(c.backend);
  if (!c.dump_cnf.empty()) {
    std::filesystem::create_directories(c.dump_cnf);
    s.dumping = std::make_unique<DumpingBackend>(*s.base, c.dump_cnf);
  }
  s.opts.num = c.num;
  s.opts.jobs = c.jobs;
  return s;
}

const MapDecl& pick_map(const Model& m, const Config& c) {
  if (!c.map.empty()) return m.map(c.map);
  if (m.maps().empty()) throw Error("the model declares no maps");
  return m.maps().front();
}

Graph load_or_build(const Model& model, const MapDecl& map, const Config& c, const Session& s, bool tagged) {
  if (!c.graph.empty()) {
    auto abs = abstraction_of(model, map);
    Graph g = graph_from_json(nlohmann::ordered_json::parse(read_file(c.graph)), abs.node_sort());
    if (tagged && !g.tagged) g = comp_map_order(g, order_spec(relation_of(model, map), abs), s.backend(), s.opts);
    return g;
  }
  const auto rel = relation_of(model, map);
  const auto abs = abstraction_of(model, map);
  return tagged ? tagged_graph(rel, abs, s.backend(), s.opts) : abstract_graph(rel, abs, s.backend(), s.opts);
}

void warn(const Graph& g) {
  for (const auto& w : g.warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_check(const Config& c) {
  auto m = load(c);
  std::cout << "model " << m.name() << ": " << m.functions().size() << " definitions, " << m.invariants().size()
            << " invariants, " << m.maps().size() << " maps\n";
  for (const auto& [k, v] : m.params()) std::cout << "  param " << k << " = " << v << '\n';
  for (const auto& map : m.maps()) {
    std::cout << "  map " << map.name << " (" << (map.relation == RelationKind::Step ? "step" : "blok " + map.invariant)
              << "), measures:";
    for (const auto& ms : map.measures) std::cout << ' ' << ms.name;
    std::cout << '\n';
  }
  return kOk;
}

int cmd_reach(const Config& c) {
  auto m = load(c);
  auto s = session(c);
  const auto& map = pick_map(m, c);
  Graph g = abstract_graph(relation_of(m, map), abstraction_of(m, map), s.backend(), s.opts);
  warn(g);
  emit(c, dump(graph_to_json(g)));
  if (!c.quiet) std::cerr << g.nodes.size() << " nodes, " << g.arc_count() << " arcs\n";
  return kOk;
}

int cmd_order(const Config& c) {
  auto m = load(c);
  auto s = session(c);
  Graph g = load_or_build(m, pick_map(m, c), c, s, true);
  warn(g);
  emit(c, dump(graph_to_json(g)));
  return kOk;
}

int cmd_synth(const Config& c) {
  auto m = load(c);
  auto s = session(c);
  Graph g = load_or_build(m, pick_map(m, c), c, s, true);
  warn(g);
  auto r = synthesize_omap(g);
  if (!r.ok()) {
    std::cout << cycle_report(g, *r.counterexample);
    if (!c.cex.empty()) {
      std::ofstream out(c.cex, std::ios::binary);
      out << dump(cycle_to_json(g, *r.counterexample));
    }
    return kFail;
  }
  emit(c, dump(omap_to_json(*r.omap)));
  return kOk;
}

// The map whose node sort reads every omap key, preferring --map.
const MapDecl& map_for_omap(const Model& m, const Config& c, const nlohmann::ordered_json& j) {
  if (!c.map.empty()) return m.map(c.map);
  for (const auto& map : m.maps()) {
    try {
      omap_from_json(j, abstraction_of(m, map).node_sort());
      return map;
    } catch (const Error&) {
    }
  }
  throw Error("no map of the model matches the omap nodes; pass --map");
}

int cmd_certify(const Config& c) {
  if (c.omap.empty()) throw Error("certify needs --omap");
  auto m = load(c);
  auto s = session(c);
  const auto j = nlohmann::ordered_json::parse(read_file(c.omap));
  const auto& map = map_for_omap(m, c, j);
  Omap omap = omap_from_json(j, abstraction_of(m, map).node_sort());
  Graph g = load_or_build(m, map, c, s, true);
  auto cert = certify(m, map.name, g, omap, s.backend(), s.opts);
  emit(c, dump(certificate_to_json(cert)));
  if (!c.quiet) {
    for (const auto& v : cert.verdicts) {
      std::cerr << (v.pass ? "pass " : "FAIL ") << v.check;
      if (!v.pass) std::cerr << ": " << v.detail;
      std::cerr << '\n';
    }
  }
  return cert.pass() ? kOk : kFail;
}

int cmd_run(const Config& c) {
  auto m = load(c);
  auto s = session(c);
  bakery::Params p;
  p.n = static_cast<unsigned>(m.param("n"));
  p.r = static_cast<unsigned>(m.param("r"));
  p.w = static_cast<unsigned>(m.param("w"));
  auto synth = [&](const std::string& name) {
    auto r = synthesize_omap(tagged_graph(m, name, s.backend(), s.opts));
    if (!r.ok()) throw Error("map " + name + " has no omap");
    return *r.omap;
  };
  bakery::OmapTrMeasure rank(m, "rank", synth("rank"));
  bakery::OmapTrMeasure nlock(m, "nlock", synth("nlock"));
  std::ostringstream trace;
  for (std::size_t i = 0; i < c.sims; ++i) {
    bakery::RunOptions o;
    o.oracle = bakery::random_oracle(c.seed + i);
    o.nlock = &nlock;
    auto r = bakery::bake_run(p, bakery::initial(p), rank, o);
    trace << "# run seed " << c.seed + i << ": " << r.steps.size() << " steps, all done\n";
    bakery::write_trace(trace, r);
  }
  emit(c, trace.str());
  return kOk;
}

int cmd_export_dot(const Config& c) {
  auto m = load(c);
  auto s = session(c);
  Graph g = load_or_build(m, pick_map(m, c), c, s, false);
  emit(c, graph_to_dot(g));
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"wfgraph: well-foundedness proofs for finite-state relations via abstract graphs"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* sub, bool needs_map) {
    sub->add_option("--model", c.model, "model file (.wfm); defaults to the shipped Bakery model");
    if (needs_map) sub->add_option("--map", c.map, "abstraction map name (default: first declared)");
    sub->add_option("--out", c.out, "output file (default: stdout)");
    sub->add_option("--backend", c.backend, "enumeration backend")->check(CLI::IsMember({"exhaustive", "ipasir"}));
    sub->add_option("--num", c.num, "per-query value budget");
    sub->add_option("--jobs", c.jobs, "concurrent queries")->check(CLI::Range(1u, 256u));
    sub->add_option("--n", c.n, "process count parameter");
    sub->add_option("--runs", c.runs, "run count parameter");
    sub->add_option("--width", c.width, "counter width parameter");
    sub->add_option("--dump-cnf", c.dump_cnf, "write every query's CNF into this directory");
    sub->add_flag("--quiet", c.quiet, "no progress output on stderr");
  };

  auto* check = app.add_subcommand("check", "parse and sort-check a model");
  check->add_option("--model", c.model, "model file (.wfm)");
  check->add_option("--n", c.n, "process count parameter");
  check->add_option("--runs", c.runs, "run count parameter");
  check->add_option("--width", c.width, "counter width parameter");
  auto* reach = app.add_subcommand("reach", "abstract graph (JSON)");
  common(reach, true);
  auto* order = app.add_subcommand("order", "abstract graph with ordering tags (JSON)");
  common(order, true);
  order->add_option("--graph", c.graph, "untagged graph JSON to tag instead of rebuilding");
  auto* synth = app.add_subcommand("synth", "synthesize an omap or report a non-decreasing cycle");
  common(synth, true);
  synth->add_option("--graph", c.graph, "tagged graph JSON");
  synth->add_option("--cex", c.cex, "write the counterexample JSON here on failure");
  auto* cert = app.add_subcommand("certify", "check an omap against the model and emit a certificate");
  common(cert, true);
  cert->add_option("--omap", c.omap, "omap JSON")->required();
  cert->add_option("--graph", c.graph, "tagged graph JSON (default: rebuilt from the model)");
  auto* run = app.add_subcommand("run", "seeded Bakery simulations with measure monitors");
  common(run, false);
  run->add_option("--seed", c.seed, "first oracle seed");
  run->add_option("--sims", c.sims, "number of simulations")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of the abstract graph");
  common(dot, true);
  dot->add_option("--graph", c.graph, "graph JSON (default: rebuilt from the model)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*check) return cmd_check(c);
    if (*reach) return cmd_reach(c);
    if (*order) return cmd_order(c);
    if (*synth) return cmd_synth(c);
    if (*cert) return cmd_certify(c);
    if (*run) return cmd_run(c);
    if (*dot) return cmd_export_dot(c);
  } catch (const wfg::ParseError& e) {
    std::cerr << "wfgraph: " << c.model << ":" << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "wfgraph: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
