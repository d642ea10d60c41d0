// regulens: regularity decompositions of k-graphs and grid subsets of the
// unit cube, plus seeded property suites for the underlying inequalities.

#include "regulens/errors.hpp"
#include "regulens/instances.hpp"
#include "regulens/report.hpp"
#include "regulens/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

using namespace regulens;

struct CommonOptions {
  std::string eps = "1/4";
  std::string mode = "exact";
  std::size_t samples = 256;
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_iterations;
  std::size_t subset_cap = std::size_t{1} << 22;
  std::string output;
  std::string format = "json";
  std::vector<std::string> inputs;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("inputs", o.inputs, "Input files, one set per file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--eps", o.eps, "Regularity parameter, \"a/b\" or a decimal")->capture_default_str();
  cmd->add_option("--mode", o.mode, "Witness search mode")
      ->check(CLI::IsMember({"exact", "sample"}))
      ->capture_default_str();
  cmd->add_option("--samples", o.samples, "Candidates drawn per cell in sample mode")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for sample mode")->capture_default_str();
  cmd->add_option("--max-iterations", o.max_iterations, "Stop with an error after this many refinement rounds");
  cmd->add_option("--subset-cap", o.subset_cap, "Largest witness space exact mode will enumerate per cell")
      ->capture_default_str();
  cmd->add_option("-o,--output", o.output, "Report file (default: standard output)");
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
}

unsigned engine_threads() {
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("REGULENS_THREADS"); env && *env) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && cap > 0) threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

EngineConfig engine_config(const CommonOptions& o) {
  EngineConfig cfg;
  try {
    cfg.eps = parse_rational(o.eps);
  } catch (const std::invalid_argument& e) {
    throw PreconditionError(std::string("--eps: ") + e.what());
  }
  cfg.mode = o.mode == "exact" ? SearchMode::exact : SearchMode::sample;
  cfg.sample_count = o.samples;
  cfg.seed = o.seed;
  cfg.max_iterations = o.max_iterations;
  cfg.coordinate_subset_cap = o.subset_cap;
  cfg.threads = engine_threads();
  cfg.validate();
  return cfg;
}

template <class T, class Parser>
std::vector<T> read_inputs(const std::vector<std::string>& paths, Parser parse) {
  std::vector<T> out;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open " + path);
    out.push_back(parse(in, path));
  }
  return out;
}

int emit(const DriverReport& rep, const Json& summary, const CommonOptions& o) {
  std::string body = o.format == "json" ? report_json(rep, summary).dump(2) + "\n" : report_text(rep, summary);
  if (o.output.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(o.output, std::ios::binary);
    if (!out) throw StructuralError("cannot write " + o.output);
    out << body;
  }
  if (!rep.holds()) return 1;
  const bool exact = rep.engine.config.mode == SearchMode::exact;
  return exact && rep.engine.certified() ? 0 : 2;
}

Json set_summary(const std::string& path, std::size_t items, const Rational& measure) {
  Json j;
  j["path"] = path;
  j["items"] = items;
  j["measure"] = to_fraction_string(measure);
  return j;
}

int run_regularize(const CommonOptions& o, const std::string& bounding, bool undirected, bool kpartite) {
  if (undirected && kpartite) throw PreconditionError("--undirected and --kpartite exclude each other");
  EngineConfig cfg = engine_config(o);
  const Rational eps = cfg.eps;
  Json summary;
  std::vector<SrSystem> systems;

  std::vector<DirectedKGraph> graphs;
  std::vector<KPartiteKGraph> parts;
  if (kpartite) {
    parts = read_inputs<KPartiteKGraph>(o.inputs, parse_kpartite);
    summary["kind"] = "k-partite";
    summary["k"] = parts.front().k();
    summary["class_sizes"] = parts.front().class_sizes;
    for (const auto& g : parts) systems.push_back(kpartite_sr_system(g));
  } else {
    graphs = read_inputs<DirectedKGraph>(o.inputs, parse_digraph);
    if (undirected) {
      for (auto& g : graphs) g = symmetrize(g);
    }
    summary["kind"] = undirected ? "undirected" : "directed";
    summary["k"] = graphs.front().k;
    summary["n"] = graphs.front().n;
    for (const auto& g : graphs) systems.push_back(digraph_sr_system(g));
  }
  Json sets = Json::array();
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const std::size_t items = kpartite ? parts[i].edges.size() : graphs[i].edges.size();
    sets.push_back(set_summary(o.inputs[i], items, measure(systems[i].triple, systems[i].set)));
  }
  summary["sets"] = std::move(sets);

  if (bounding == "equitable") {
    DriverReport rep = kpartite     ? decompose_kpartite(parts, eps, cfg)
                       : undirected ? decompose_undirected(graphs, eps, cfg)
                                    : decompose_digraph(graphs, eps, cfg);
    return emit(rep, summary, o);
  }
  for (const auto& sys : systems) {
    if (!(sys.semiring == systems.front().semiring)) throw StructuralError("inputs must share their vertex sets");
  }
  std::vector<AtomSet> atom_sets;
  for (const auto& sys : systems) atom_sets.push_back(sys.set);
  Bounding b{bounding == "product-family" ? BoundingKind::product_family : BoundingKind::none, false};
  return emit(decompose_generic(systems.front(), atom_sets, cfg, b), summary, o);
}

int run_cube(const CommonOptions& o, bool intervals) {
  EngineConfig cfg = engine_config(o);
  auto grids = read_inputs<GridSubset>(o.inputs, parse_grid);
  const CubeCells cells = intervals ? CubeCells::intervals : CubeCells::sets;
  Json summary;
  summary["kind"] = "grid";
  summary["cells"] = intervals ? "intervals" : "sets";
  summary["k"] = grids.front().k;
  summary["m"] = grids.front().m;
  Json sets = Json::array();
  for (std::size_t i = 0; i < grids.size(); ++i) {
    SrSystem sys = grid_sr_system(grids[i], cells);
    sets.push_back(set_summary(o.inputs[i], grids[i].cells.size(), measure(sys.triple, sys.set)));
  }
  summary["sets"] = std::move(sets);
  const RateFunction reference = equitable_rate(cfg.eps, grids.front().k, EquitableVariant::cube);
  summary["reference_rate"] = reference.describe();
  return emit(decompose_cube(grids, cfg.eps, cfg, cells), summary, o);
}

struct VerifyOptions {
  std::vector<std::string> suites;
  std::size_t cases = 1000;
  std::uint64_t seed = 0;
  bool claim = false;
  std::string output;
};

int run_verify(const VerifyOptions& o) {
  Json out;
  out["seed"] = o.seed;
  out["cases"] = o.cases;
  Json results = Json::array();
  bool all_ok = true;
  const auto& names = o.suites.empty() ? suite_names() : o.suites;
  for (const auto& name : names) {
    SuiteResult r = run_suite(name, o.cases, o.seed);
    all_ok = all_ok && r.ok();
    results.push_back(suite_json(r));
    std::cerr << name << ": " << r.passed << "/" << r.cases << " passed\n";
  }
  out["suites"] = std::move(results);
  if (o.claim) out["claim_k_root"] = claim_json(run_claim_k_root(o.cases, o.seed));
  out["all_pass"] = all_ok;
  const std::string body = out.dump(2) + "\n";
  if (o.output.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw StructuralError("cannot write " + o.output);
    f << body;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularity decompositions with exact arithmetic"};
  app.require_subcommand(1);

  CommonOptions reg_opts;
  std::string bounding = "product-family";
  bool undirected = false;
  bool kpartite = false;
  auto* reg = app.add_subcommand("regularize", "Decompose directed, undirected or k-partite k-graphs");
  add_common(reg, reg_opts);
  reg->add_option("--bounding", bounding, "Bounding family applied after each refinement")
      ->check(CLI::IsMember({"product-family", "equitable", "none"}))
      ->capture_default_str();
  reg->add_flag("--undirected", undirected, "Symmetrize inputs and count unordered index sets");
  reg->add_flag("--kpartite", kpartite, "Inputs are k-partite k-graphs ('k n1 ... nk' header)");

  CommonOptions cube_opts;
  bool intervals = false;
  bool sets = false;
  auto* cube = app.add_subcommand("cube", "Decompose grid subsets of the unit cube");
  add_common(cube, cube_opts);
  auto* iflag = cube->add_flag("--intervals", intervals, "Cells are bricks of intervals");
  cube->add_flag("--sets", sets, "Cells are products of arbitrary grid sets (default)")->excludes(iflag);

  VerifyOptions ver_opts;
  auto* ver = app.add_subcommand("verify", "Run the seeded property suites");
  ver->add_option("--suite", ver_opts.suites, "Suites to run (default: all)")->check(CLI::IsMember(suite_names()));
  ver->add_option("--cases", ver_opts.cases, "Instances per suite")->capture_default_str();
  ver->add_option("--seed", ver_opts.seed, "Generator seed")->capture_default_str();
  ver->add_flag("--claim-k-root", ver_opts.claim, "Also run the empirical k-th root density check");
  ver->add_option("-o,--output", ver_opts.output, "Report file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*reg) return run_regularize(reg_opts, bounding, undirected, kpartite);
    if (*cube) return run_cube(cube_opts, intervals);
    if (*ver) return run_verify(ver_opts);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
  } catch (const CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n  hint: rerun with --mode sample\n";
  } catch (const InvariantError& e) {
    std::cerr << "internal invariant violated: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
