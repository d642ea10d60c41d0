#include "regulens/instances.hpp"

#include "regulens/errors.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>

namespace regulens {

namespace {

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::size_t checked_power(std::size_t base, std::size_t k, std::size_t cap, const char* what) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (base != 0 && total > cap / base) {
      throw CapacityError(std::string(what) + " has more than " + std::to_string(cap) + " atoms");
    }
    total *= base;
  }
  if (total > cap) throw CapacityError(std::string(what) + " has more than " + std::to_string(cap) + " atoms");
  return total;
}

// Splits a line into unsigned integers after stripping a '#' comment.
std::vector<std::size_t> parse_fields(const std::string& raw, const std::string& source, std::size_t line_no) {
  std::string line = raw.substr(0, raw.find('#'));
  std::istringstream in(line);
  std::vector<std::size_t> out;
  std::string tok;
  while (in >> tok) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw ParseError(source, line_no, "expected a nonnegative integer, got '" + tok + "'");
    }
    out.push_back(value);
  }
  return out;
}

struct ParsedFile {
  std::vector<std::size_t> header;
  std::size_t header_line = 0;
  std::vector<std::pair<std::size_t, Tuple>> rows;  // line number, fields
};

ParsedFile read_rows(std::istream& in, const std::string& source) {
  ParsedFile f;
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    auto fields = parse_fields(raw, source, line_no);
    if (fields.empty()) continue;
    if (!have_header) {
      f.header = std::move(fields);
      f.header_line = line_no;
      have_header = true;
    } else {
      f.rows.emplace_back(line_no, std::move(fields));
    }
  }
  if (!have_header) throw ParseError(source, line_no == 0 ? 1 : line_no, "missing header");
  return f;
}

// Every k-tuple of [a_0] x ... x [a_{k-1}], optionally with distinct entries.
void enumerate_tuples(const std::vector<std::size_t>& sizes, bool distinct, const std::function<void(const Tuple&)>& fn) {
  Tuple cur(sizes.size());
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == sizes.size()) {
      fn(cur);
      return;
    }
    for (std::size_t v = 0; v < sizes[pos]; ++v) {
      if (distinct && std::find(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(pos), v) !=
                          cur.begin() + static_cast<std::ptrdiff_t>(pos)) {
        continue;
      }
      cur[pos] = v;
      rec(pos + 1);
    }
  };
  rec(0);
}

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  BigInt out = 1;
  for (std::size_t i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

std::size_t factorial(std::size_t k) {
  std::size_t out = 1;
  for (std::size_t i = 2; i <= k; ++i) out *= i;
  return out;
}

// Coordinate partitions of a product or box partition. Parts of maximal size
// are the equal blocks; every smaller part belongs to Q0.
std::vector<CoordinatePartition> extract_coordinates(const Partition& p) {
  const SemiRing& s = p.semiring();
  const std::size_t axes = s.disjoint_or_equal() || s.kind() != SemiRing::Kind::product ? 1 : s.arity();
  std::vector<CoordinatePartition> out;
  for (std::size_t axis = 0; axis < axes; ++axis) {
    std::vector<AtomSet> parts;
    for (const auto& c : p.cells()) {
      if (axes == 1) {
        for (const auto& a : c.coords()) parts.push_back(a);
      } else {
        parts.push_back(c.coord(axis));
      }
    }
    sort_unique(parts);
    CoordinatePartition cp;
    cp.universe = parts.front().universe();
    cp.exceptional = AtomSet(cp.universe);
    std::size_t largest = 0;
    for (const auto& a : parts) largest = std::max(largest, a.count());
    AtomSet covered(cp.universe);
    for (auto& a : parts) {
      if (covered.intersects(a)) throw InvariantError("coordinate sets of the final partition overlap");
      covered |= a;
      if (a.count() == largest) {
        cp.parts.push_back(std::move(a));
      } else {
        cp.exceptional |= a;
      }
    }
    if (covered.count() != cp.universe) throw InvariantError("coordinate sets do not cover the vertex set");
    out.push_back(std::move(cp));
  }
  return out;
}

bool is_singleton_partition(const std::vector<CoordinatePartition>& coords) {
  return std::all_of(coords.begin(), coords.end(), [](const CoordinatePartition& c) {
    return c.exceptional.empty() && c.parts.size() == c.universe;
  });
}

enum class CountRule { distinct, unordered, boxes };

struct DriverSpec {
  std::string theorem;
  CountRule rule = CountRule::distinct;
  Rational start_eps;
};

std::uint64_t count_stream(std::size_t set, std::size_t cell) {
  return (std::uint64_t{1} << 62) ^ (static_cast<std::uint64_t>(set) << 32) ^ cell;
}

void evaluate_conditions(DriverReport& rep, const MeasureTriple& t, const SemiRing& s,
                         std::span<const AtomSet> sets, const EngineConfig& cfg, CountRule rule) {
  rep.coordinates = extract_coordinates(rep.engine.partition);
  const std::size_t k = s.arity();
  const auto& coords = rep.coordinates;

  // (i): q against the size bound psi' maintained by the engine.
  std::size_t q_max = 0;
  for (const auto& c : coords) q_max = std::max(q_max, c.parts.size());
  {
    Condition c{"q_bound", rep.engine.bounds.conservative.admits(q_max),
                "q = " + std::to_string(q_max) + ", psi' = " + rep.engine.bounds.conservative.str()};
    rep.conditions.push_back(std::move(c));
  }

  // (ii): equal block sizes and a small exceptional class, per coordinate.
  bool equal_ok = true;
  bool exc_ok = true;
  std::string equal_detail;
  std::string exc_detail;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto& c = coords[i];
    const Rational bound = rep.eps * c.universe;
    std::size_t size = c.parts.front().count();
    for (const auto& part : c.parts) equal_ok = equal_ok && part.count() == size;
    equal_ok = equal_ok && Rational(size) < bound;
    exc_ok = exc_ok && Rational(c.exceptional.count()) < bound;
    if (i) {
      equal_detail += "; ";
      exc_detail += "; ";
    }
    equal_detail += std::to_string(c.parts.size()) + " parts of size " + std::to_string(size) + " < " +
                    to_fraction_string(bound);
    exc_detail += "|Q0| = " + std::to_string(c.exceptional.count()) + " < " + to_fraction_string(bound);
  }
  rep.conditions.push_back({"equal_parts", equal_ok, equal_detail});
  rep.conditions.push_back({"exceptional_small", exc_ok, exc_detail});

  // (iii): regular cells among the candidate index tuples, rechecked at eps.
  EngineConfig check_cfg = cfg;
  check_cfg.eps = rep.eps;
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < k; ++i) sizes.push_back(coords[coords.size() == 1 ? 0 : i].parts.size());
  const auto& cells = rep.engine.partition.cells();

  bool counts_ok = true;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    CellCount cc;
    cc.set_id = j;
    std::map<Tuple, bool> verdict;
    enumerate_tuples(sizes, rule != CountRule::boxes, [&](const Tuple& idx) {
      std::vector<AtomSet> factors;
      for (std::size_t i = 0; i < k; ++i) factors.push_back(coords[coords.size() == 1 ? 0 : i].parts[idx[i]]);
      Cell cell(std::move(factors));
      auto it = std::lower_bound(cells.begin(), cells.end(), cell);
      if (it == cells.end() || !(*it == cell)) throw InvariantError("block product is not a cell of the partition");
      const auto pos = static_cast<std::size_t>(it - cells.begin());
      bool regular = check_regular_in_cell(t, s, sets[j], cell, check_cfg, count_stream(j, pos)).regular;
      cc.cells.push_back(idx);
      cc.regular.push_back(regular);
      verdict[idx] = regular;
    });

    const std::size_t q = sizes.front();
    if (rule == CountRule::unordered) {
      std::size_t good = 0;
      std::size_t total = 0;
      for (const auto& [idx, ok] : verdict) {
        if (!std::is_sorted(idx.begin(), idx.end())) continue;
        ++total;
        Tuple perm = idx;
        bool all = true;
        do {
          all = all && verdict.at(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (all) ++good;
      }
      cc.good = good;
      cc.candidates = total;
      cc.required = (1 - rep.eps) * Rational(binomial(q, k));
    } else {
      cc.good = static_cast<std::size_t>(std::count(cc.regular.begin(), cc.regular.end(), true));
      cc.candidates = cc.regular.size();
      BigInt all = 1;
      for (auto sz : sizes) all *= sz;
      cc.required = (1 - rep.eps) * Rational(all);
    }
    cc.holds = Rational(cc.good) >= cc.required;
    counts_ok = counts_ok && cc.holds;
    rep.counts.push_back(std::move(cc));
  }
  std::string detail;
  for (const auto& cc : rep.counts) {
    if (!detail.empty()) detail += "; ";
    detail += "set " + std::to_string(cc.set_id) + ": " + std::to_string(cc.good) +
              " >= " + to_fraction_string(cc.required);
  }
  rep.conditions.push_back({"regular_cells", counts_ok, detail});
}

// Runs the engine with the equitable family and strict blocks. When the count
// condition fails at the current internal parameter, it is halved and the run
// resumes from the partition reached so far; the singleton partition ends the
// schedule since every set is regular in every singleton cell.
DriverReport run_theorem(const MeasureTriple& t, const SemiRing& s, const std::vector<AtomSet>& sets,
                         const Rational& eps, const EngineConfig& cfg, const DriverSpec& spec) {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("eps must lie strictly between 0 and 1");
  std::size_t n_min = s.factor(0).size;
  for (const auto& f : s.factors()) n_min = std::min(n_min, f.size);
  const std::size_t n0 = min_vertices(eps);
  if (n_min <= n0) {
    throw PreconditionError("vertex classes need more than ceil(1/eps) = " + std::to_string(n0) + " elements, got " +
                            std::to_string(n_min));
  }

  const Bounding equitable{BoundingKind::equitable, true};
  EngineConfig run_cfg = cfg;
  run_cfg.eps = spec.start_eps;
  Partition start = Partition::trivial(s);
  bool singletons = !(run_cfg.eps * n_min > 1);
  if (singletons) start = Partition::singletons(s);

  std::vector<Rational> schedule;
  constexpr std::size_t kMaxAttempts = 64;
  for (std::size_t attempt = 0;; ++attempt) {
    schedule.push_back(run_cfg.eps);
    const Bounding bounding = singletons ? Bounding{BoundingKind::none, false} : equitable;
    DriverReport rep{.theorem = spec.theorem,
                     .eps = eps,
                     .eps_schedule = schedule,
                     .engine = regularize(t, sets, start, run_cfg, bounding),
                     .coordinates = {},
                     .counts = {},
                     .conditions = {},
                     .set_measures = {}};
    for (const auto& a : sets) rep.set_measures.push_back(measure(t, a));
    rep.conditions.push_back({"all_sets_regular", rep.engine.all_regular(),
                              "every input set is eps-regular in the final partition at eps = " +
                                  to_fraction_string(run_cfg.eps)});
    evaluate_conditions(rep, t, s, sets, cfg, spec.rule);
    if (rep.holds() || singletons || is_singleton_partition(rep.coordinates) || attempt + 1 >= kMaxAttempts) {
      return rep;
    }
    Rational next = run_cfg.eps / 2;
    if (next * n_min > 1) {
      run_cfg.eps = next;
      start = rep.engine.partition;
    } else {
      singletons = true;
      start = Partition::singletons(s);
    }
  }
}

std::vector<AtomSet> set_list(const std::vector<SrSystem>& systems) {
  std::vector<AtomSet> out;
  for (const auto& sys : systems) out.push_back(sys.set);
  return out;
}

}  // namespace

void DirectedKGraph::normalize() {
  if (k == 0) throw StructuralError("arity must be positive");
  for (const auto& e : edges) {
    if (e.size() != k) throw StructuralError("edge of the wrong arity");
    for (auto v : e) {
      if (v >= n) throw StructuralError("vertex " + std::to_string(v) + " out of range [0, " + std::to_string(n) + ")");
    }
  }
  sort_unique(edges);
}

void KPartiteKGraph::normalize() {
  if (class_sizes.empty()) throw StructuralError("at least one vertex class is needed");
  for (auto c : class_sizes) {
    if (c == 0) throw StructuralError("vertex classes must be nonempty");
  }
  for (const auto& e : edges) {
    if (e.size() != k()) throw StructuralError("edge of the wrong arity");
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] >= class_sizes[i]) {
        throw StructuralError("vertex " + std::to_string(e[i]) + " out of range for class " + std::to_string(i));
      }
    }
  }
  sort_unique(edges);
}

void GridSubset::normalize() {
  if (k == 0 || m == 0) throw StructuralError("dimension and resolution must be positive");
  for (const auto& c : cells) {
    if (c.size() != k) throw StructuralError("grid cell of the wrong dimension");
    for (auto v : c) {
      if (v >= m) throw StructuralError("grid index " + std::to_string(v) + " out of range [0, " + std::to_string(m) + ")");
    }
  }
  sort_unique(cells);
}

GridSubset GridSubset::refined() const {
  GridSubset out{k, 2 * m, {}};
  for (const auto& c : cells) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      Tuple child(k);
      for (std::size_t i = 0; i < k; ++i) child[i] = 2 * c[i] + ((mask >> i) & 1U);
      out.cells.push_back(std::move(child));
    }
  }
  out.normalize();
  return out;
}

SrSystem digraph_sr_system(const DirectedKGraph& g, std::size_t max_atoms) {
  if (g.n == 0) throw PreconditionError("a digraph needs at least one vertex");
  DirectedKGraph h = g;
  h.normalize();
  const std::size_t total = checked_power(h.n, h.k, max_atoms, "the product ground set");
  SemiRing s = SemiRing::product(SemiRing::power_set(h.n), h.k);
  AtomSet edges(total);
  for (const auto& e : h.edges) edges.insert(s.encode(e));
  return {MeasureTriple::uniform(total, max_atoms), std::move(s), std::move(edges)};
}

SrSystem kpartite_sr_system(const KPartiteKGraph& g, std::size_t max_atoms) {
  KPartiteKGraph h = g;
  h.normalize();
  std::vector<SemiRing> bases;
  std::size_t total = 1;
  for (auto c : h.class_sizes) {
    if (total > max_atoms / c) throw CapacityError("the box ground set has more than " + std::to_string(max_atoms) + " atoms");
    total *= c;
    bases.push_back(SemiRing::power_set(c));
  }
  SemiRing s = SemiRing::boxes(bases);
  AtomSet edges(total);
  for (const auto& e : h.edges) edges.insert(s.encode(e));
  return {MeasureTriple::uniform(total, max_atoms), std::move(s), std::move(edges)};
}

SrSystem grid_sr_system(const GridSubset& g, CubeCells cells, std::size_t max_atoms) {
  GridSubset h = g;
  h.normalize();
  const std::size_t total = checked_power(h.m, h.k, max_atoms, "the grid");
  SemiRing base = cells == CubeCells::sets ? SemiRing::power_set(h.m) : SemiRing::intervals(h.m);
  SemiRing s = SemiRing::product(base, h.k);
  AtomSet set(total);
  for (const auto& c : h.cells) set.insert(s.encode(c));
  return {MeasureTriple::uniform(total, max_atoms), std::move(s), std::move(set)};
}

std::size_t edge_count(const DirectedKGraph& g, const std::vector<AtomSet>& parts) {
  if (parts.size() != g.k) throw StructuralError("need one vertex set per coordinate");
  std::size_t count = 0;
  for (const auto& e : g.edges) {
    bool inside = true;
    for (std::size_t i = 0; i < g.k && inside; ++i) inside = parts[i].contains(e[i]);
    if (inside) ++count;
  }
  return count;
}

bool is_permutation_closed(const DirectedKGraph& g) {
  std::vector<Tuple> sorted = g.edges;
  sort_unique(sorted);
  for (const auto& e : sorted) {
    Tuple perm = e;
    std::sort(perm.begin(), perm.end());
    if (std::adjacent_find(perm.begin(), perm.end()) != perm.end()) return false;
    do {
      if (!std::binary_search(sorted.begin(), sorted.end(), perm)) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return true;
}

DirectedKGraph symmetrize(const DirectedKGraph& g) {
  DirectedKGraph out{g.n, g.k, {}};
  for (const auto& e : g.edges) {
    Tuple perm = e;
    std::sort(perm.begin(), perm.end());
    if (std::adjacent_find(perm.begin(), perm.end()) != perm.end()) {
      throw StructuralError("undirected edges need k distinct vertices");
    }
    do {
      out.edges.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  out.normalize();
  return out;
}

DirectedKGraph parse_digraph(std::istream& in, const std::string& source) {
  ParsedFile f = read_rows(in, source);
  if (f.header.size() != 2) throw ParseError(source, f.header_line, "header must be 'k n'");
  DirectedKGraph g{f.header[1], f.header[0], {}};
  if (g.k == 0) throw ParseError(source, f.header_line, "arity must be positive");
  if (g.n == 0) throw ParseError(source, f.header_line, "vertex count must be positive");
  for (auto& [line, row] : f.rows) {
    if (row.size() != g.k) throw ParseError(source, line, "expected " + std::to_string(g.k) + " vertex indices");
    for (auto v : row) {
      if (v >= g.n) throw ParseError(source, line, "vertex " + std::to_string(v) + " out of range");
    }
    g.edges.push_back(std::move(row));
  }
  g.normalize();
  return g;
}

KPartiteKGraph parse_kpartite(std::istream& in, const std::string& source) {
  ParsedFile f = read_rows(in, source);
  if (f.header.size() < 2 || f.header[0] == 0 || f.header.size() != f.header[0] + 1) {
    throw ParseError(source, f.header_line, "header must be 'k n1 ... nk'");
  }
  KPartiteKGraph g{{f.header.begin() + 1, f.header.end()}, {}};
  for (auto c : g.class_sizes) {
    if (c == 0) throw ParseError(source, f.header_line, "class sizes must be positive");
  }
  for (auto& [line, row] : f.rows) {
    if (row.size() != g.k()) throw ParseError(source, line, "expected " + std::to_string(g.k()) + " vertex indices");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] >= g.class_sizes[i]) {
        throw ParseError(source, line, "vertex " + std::to_string(row[i]) + " out of range for class " + std::to_string(i));
      }
    }
    g.edges.push_back(std::move(row));
  }
  g.normalize();
  return g;
}

GridSubset parse_grid(std::istream& in, const std::string& source) {
  ParsedFile f = read_rows(in, source);
  if (f.header.size() != 2) throw ParseError(source, f.header_line, "header must be 'k m'");
  GridSubset g{f.header[0], f.header[1], {}};
  if (g.k == 0 || g.m == 0) throw ParseError(source, f.header_line, "dimension and resolution must be positive");
  for (auto& [line, row] : f.rows) {
    if (row.size() != g.k) throw ParseError(source, line, "expected " + std::to_string(g.k) + " grid indices");
    for (auto v : row) {
      if (v >= g.m) throw ParseError(source, line, "grid index " + std::to_string(v) + " out of range");
    }
    g.cells.push_back(std::move(row));
  }
  g.normalize();
  return g;
}

std::size_t min_vertices(const Rational& eps) {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("eps must lie strictly between 0 and 1");
  return ceil_of(Rational(1) / eps).convert_to<std::size_t>();
}

bool DriverReport::holds() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.holds; });
}

DriverReport decompose_digraph(const std::vector<DirectedKGraph>& graphs, const Rational& eps, const EngineConfig& cfg) {
  if (graphs.empty()) throw PreconditionError("at least one graph is needed");
  std::vector<SrSystem> systems;
  for (const auto& g : graphs) {
    if (g.n != graphs.front().n || g.k != graphs.front().k) throw StructuralError("graphs must share n and k");
    systems.push_back(digraph_sr_system(g));
  }
  return run_theorem(systems.front().triple, systems.front().semiring, set_list(systems), eps, cfg,
                     {"directed", CountRule::distinct, eps});
}

DriverReport decompose_undirected(const std::vector<DirectedKGraph>& graphs, const Rational& eps,
                                  const EngineConfig& cfg) {
  if (graphs.empty()) throw PreconditionError("at least one graph is needed");
  std::vector<SrSystem> systems;
  for (const auto& g : graphs) {
    if (g.n != graphs.front().n || g.k != graphs.front().k) throw StructuralError("graphs must share n and k");
    if (!is_permutation_closed(g)) {
      throw StructuralError("undirected input is not closed under permutations of its edges");
    }
    systems.push_back(digraph_sr_system(g));
  }
  const Rational internal = eps / factorial(graphs.front().k);
  return run_theorem(systems.front().triple, systems.front().semiring, set_list(systems), eps, cfg,
                     {"undirected", CountRule::unordered, internal});
}

DriverReport decompose_kpartite(const std::vector<KPartiteKGraph>& graphs, const Rational& eps,
                                const EngineConfig& cfg) {
  if (graphs.empty()) throw PreconditionError("at least one graph is needed");
  std::vector<SrSystem> systems;
  for (const auto& g : graphs) {
    if (g.class_sizes != graphs.front().class_sizes) throw StructuralError("graphs must share their vertex classes");
    const auto& cs = g.class_sizes;
    if (cs.empty() || std::adjacent_find(cs.begin(), cs.end(), std::not_equal_to<>()) != cs.end()) {
      throw StructuralError("vertex classes must have equal sizes");
    }
    systems.push_back(kpartite_sr_system(g));
  }
  return run_theorem(systems.front().triple, systems.front().semiring, set_list(systems), eps, cfg,
                     {"k-partite", CountRule::boxes, eps});
}

DriverReport decompose_cube(const std::vector<GridSubset>& sets, const Rational& eps, const EngineConfig& cfg,
                            CubeCells cells) {
  if (sets.empty()) throw PreconditionError("at least one set is needed");
  std::vector<SrSystem> systems;
  for (const auto& g : sets) {
    if (g.k != sets.front().k || g.m != sets.front().m) throw StructuralError("grid sets must share k and m");
    systems.push_back(grid_sr_system(g, cells));
  }
  if (sets.front().m <= min_vertices(eps)) {
    throw PreconditionError("grid resolution " + std::to_string(sets.front().m) + " is too coarse for eps = " +
                            to_fraction_string(eps) + "; need m > " + std::to_string(min_vertices(eps)));
  }
  return run_theorem(systems.front().triple, systems.front().semiring, set_list(systems), eps, cfg,
                     {cells == CubeCells::sets ? "cube-sets" : "cube-intervals", CountRule::distinct, eps});
}

DriverReport decompose_generic(const SrSystem& system, const std::vector<AtomSet>& sets, const EngineConfig& cfg,
                               const Bounding& bounding) {
  DriverReport rep{.theorem = "generic",
                   .eps = cfg.eps,
                   .eps_schedule = {cfg.eps},
                   .engine = regularize(system.triple, sets, Partition::trivial(system.semiring), cfg, bounding),
                   .coordinates = {},
                   .counts = {},
                   .conditions = {},
                   .set_measures = {}};
  for (const auto& a : sets) rep.set_measures.push_back(measure(system.triple, a));
  rep.conditions.push_back({"all_sets_regular", rep.engine.all_regular(), "every input set is eps-regular"});
  rep.conditions.push_back({"size_bound", rep.engine.bounds.conservative.admits(rep.engine.partition.size()),
                            std::to_string(rep.engine.partition.size()) +
                                " cells <= psi' = " + rep.engine.bounds.conservative.str()});
  return rep;
}

}  // namespace regulens
