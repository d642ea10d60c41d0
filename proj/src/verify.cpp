#include "regulens/verify.hpp"

#include "regulens/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace regulens {

namespace {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng) { return (rng() & 1U) != 0; }

Rational random_positive(Rng& rng, std::size_t max_num = 20, std::size_t max_den = 20) {
  return Rational(static_cast<long>(uniform(rng, 1, max_num)), static_cast<long>(uniform(rng, 1, max_den)));
}

AtomSet random_subset(Rng& rng, std::size_t n, bool nonempty) {
  while (true) {
    AtomSet a(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (coin(rng)) a.insert(i);
    }
    if (!nonempty || !a.empty()) return a;
  }
}

MeasureTriple random_triple(Rng& rng, std::size_t n) {
  if (coin(rng)) return MeasureTriple::uniform(n);
  std::vector<long> raw(n);
  long total = 0;
  for (auto& w : raw) {
    w = static_cast<long>(uniform(rng, 0, 6));
    total += w;
  }
  if (total == 0) {
    raw[0] = 1;
    total = 1;
  }
  std::vector<Rational> weights;
  for (auto w : raw) weights.emplace_back(w, total);
  return MeasureTriple(std::move(weights));
}

// b pairwise disjoint nonempty base cells of the factor's semi-ring.
std::vector<AtomSet> disjoint_family(Rng& rng, const Factor& f, std::size_t b) {
  const std::size_t n = f.size;
  if (f.kind == BaseKind::interval) {
    std::vector<std::size_t> cuts(n + 1);
    std::iota(cuts.begin(), cuts.end(), 0);
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(2 * b);
    std::sort(cuts.begin(), cuts.end());
    std::vector<AtomSet> out;
    for (std::size_t i = 0; i < b; ++i) out.push_back(AtomSet::range(n, cuts[2 * i], cuts[2 * i + 1]));
    return out;
  }
  while (true) {
    std::vector<AtomSet> out(b, AtomSet(n));
    for (std::size_t atom = 0; atom < n; ++atom) {
      std::size_t label = uniform(rng, 0, b);
      if (label < b) out[label].insert(atom);
    }
    if (std::none_of(out.begin(), out.end(), [](const AtomSet& a) { return a.empty(); })) return out;
  }
}

std::size_t max_family(const Factor& f) { return f.kind == BaseKind::interval ? (f.size + 1) / 2 : f.size; }

Cell random_cell(Rng& rng, const SemiRing& s) {
  if (s.kind() != SemiRing::Kind::product) return Cell(disjoint_family(rng, s.factor(0), 1).front());
  const std::size_t k = s.arity();
  if (!s.disjoint_or_equal()) {
    std::vector<AtomSet> coords;
    for (std::size_t i = 0; i < k; ++i) coords.push_back(disjoint_family(rng, s.factor(i), 1).front());
    return Cell(std::move(coords));
  }
  const std::size_t b = uniform(rng, 1, std::min(k, max_family(s.factor(0))));
  auto family = disjoint_family(rng, s.factor(0), b);
  std::vector<AtomSet> coords;
  for (std::size_t i = 0; i < k; ++i) coords.push_back(family[uniform(rng, 0, b - 1)]);
  return Cell(std::move(coords));
}

SemiRing random_semiring(Rng& rng) {
  switch (uniform(rng, 0, 3)) {
    case 0:
      return SemiRing::power_set(uniform(rng, 1, 8));
    case 1:
      return SemiRing::intervals(uniform(rng, 1, 10));
    case 2: {
      const std::size_t n = uniform(rng, 1, 4);
      const std::size_t k = uniform(rng, 1, 3);
      return SemiRing::product(coin(rng) ? SemiRing::power_set(n) : SemiRing::intervals(n), k);
    }
    default: {
      std::vector<SemiRing> bases;
      const std::size_t k = uniform(rng, 1, 3);
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t n = uniform(rng, 1, 4);
        bases.push_back(coin(rng) ? SemiRing::power_set(n) : SemiRing::intervals(n));
      }
      return SemiRing::boxes(bases);
    }
  }
}

// A partition of a power-set base into at most m random blocks.
Partition random_partition(Rng& rng, const SemiRing& base, std::size_t m) {
  const std::size_t n = base.ground_size();
  std::vector<AtomSet> blocks(m, AtomSet(n));
  for (std::size_t atom = 0; atom < n; ++atom) blocks[uniform(rng, 0, m - 1)].insert(atom);
  std::vector<Cell> cells;
  for (auto& b : blocks) {
    if (!b.empty()) cells.emplace_back(std::move(b));
  }
  return Partition(base, std::move(cells));
}

Json triple_json(const MeasureTriple& t) {
  Json w = Json::array();
  for (const auto& x : t.weights()) w.push_back(to_fraction_string(x));
  return w;
}

Json partition_json(const Partition& p) {
  Json cells = Json::array();
  for (const auto& c : p.cells()) cells.push_back(cell_json(p.semiring(), c));
  return cells;
}

Json rationals_json(std::span<const Rational> xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_fraction_string(x));
  return out;
}

// Runs `cases` instances of `body`. The body returns nullopt when its instance
// is accepted, a serialized counterexample on failure, and sets `redraw` when
// the instance missed the case hypothesis.
using CaseFn = std::function<std::optional<Json>(Rng&, bool& redraw)>;

SuiteResult run_cases(const std::string& name, std::size_t cases, std::uint64_t seed, const CaseFn& body) {
  SuiteResult r;
  r.name = name;
  r.cases = cases;
  std::uint64_t tag = 0xcbf29ce484222325ULL;  // FNV-1a of the suite name
  for (unsigned char ch : name) tag = (tag ^ ch) * 0x100000001b3ULL;
  std::seed_seq seq{seed, tag};
  Rng rng(seq);
  constexpr std::size_t kMaxRedraws = 10000;
  for (std::size_t i = 0; i < cases; ++i) {
    std::optional<Json> failure;
    std::size_t redraws = 0;
    while (true) {
      bool redraw = false;
      try {
        failure = body(rng, redraw);
      } catch (const std::exception& e) {
        failure = Json{{"exception", e.what()}};
      }
      if (!redraw) break;
      ++r.redrawn;
      if (++redraws > kMaxRedraws) {
        failure = Json{{"exception", "could not draw an instance meeting the hypothesis"}};
        break;
      }
    }
    if (failure) {
      ++r.failed;
      if (r.counterexample.is_null()) {
        (*failure)["case"] = i;
        r.counterexample = std::move(*failure);
      }
    } else {
      ++r.passed;
    }
  }
  return r;
}

std::optional<Json> semiring_case(Rng& rng, bool&) {
  SemiRing s = random_semiring(rng);
  std::vector<std::pair<Cell, Cell>> pairs;
  for (int i = 0; i < 4; ++i) pairs.emplace_back(random_cell(rng, s), random_cell(rng, s));
  AxiomReport rep = verify_semiring_axioms(s, MeasureTriple::uniform(s.ground_size()), pairs);
  if (rep.all_pass) return std::nullopt;
  for (const auto& c : rep.checks) {
    if (!c.ok()) {
      const auto& [a, b] = pairs[c.pair_index];
      return Json{{"semiring", s.name()},
                  {"a", cell_json(s, a)},
                  {"b", cell_json(s, b)},
                  {"pieces", c.pieces},
                  {"declared_r", s.declared_r()}};
    }
  }
  return Json{{"semiring", s.name()}};
}

std::optional<Json> mxind_case(Rng& rng, bool&) {
  const std::size_t n = uniform(rng, 1, 12);
  MeasureTriple t = random_triple(rng, n);
  SemiRing base = SemiRing::power_set(n);
  Partition p = random_partition(rng, base, uniform(rng, 1, n));
  AtomSet a = random_subset(rng, n, false);
  Rational ind = index(t, a, p);
  Rational mu = measure(t, a);
  if (ind >= 0 && ind <= mu && mu <= 1) return std::nullopt;
  return Json{{"weights", triple_json(t)},
              {"a", a.indices()},
              {"partition", partition_json(p)},
              {"index", to_fraction_string(ind)},
              {"measure", to_fraction_string(mu)}};
}

std::optional<Json> defect_cs_case(Rng& rng, bool& redraw) {
  const std::size_t n = uniform(rng, 2, 8);
  std::vector<Rational> c, x;
  for (std::size_t i = 0; i < n; ++i) {
    c.push_back(random_positive(rng));
    x.push_back(random_positive(rng));
  }
  std::vector<std::size_t> j;
  while (j.empty() || j.size() == n) {
    j.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (coin(rng)) j.push_back(i);
    }
  }
  Rational sc = 0, sx = 0, jc = 0, jx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sc += c[i];
    sx += c[i] * x[i];
  }
  for (auto i : j) {
    jc += c[i];
    jx += c[i] * x[i];
  }
  Rational gamma = sc * jx - sx * jc;
  if (gamma == 0) {
    redraw = true;
    return std::nullopt;
  }
  if (gamma < 0) {
    std::vector<std::size_t> comp;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::binary_search(j.begin(), j.end(), i)) comp.push_back(i);
    }
    j = std::move(comp);
    gamma = -gamma;
  }
  DefectCsResult res = defect_cs_check(c, x, j, gamma);
  if (res.part1 && res.part2 == DefectCsResult::Part2::holds) return std::nullopt;
  return Json{{"c", rationals_json(c)}, {"x", rationals_json(x)}, {"j", j}, {"gamma", to_fraction_string(gamma)},
              {"part1", res.part1}, {"part2", static_cast<int>(res.part2)}};
}

std::optional<Json> clem2_case(Rng& rng, bool&) {
  const std::size_t n = uniform(rng, 1, 12);
  MeasureTriple t = random_triple(rng, n);
  SemiRing base = SemiRing::power_set(n);
  Partition p = random_partition(rng, base, uniform(rng, 1, n));
  Partition q = common_refinement(p, random_partition(rng, base, uniform(rng, 1, n)));
  AtomSet a = random_subset(rng, n, false);
  if (refines(q, p) && index(t, a, q) >= index(t, a, p)) return std::nullopt;
  return Json{{"weights", triple_json(t)},
              {"a", a.indices()},
              {"p", partition_json(p)},
              {"q", partition_json(q)},
              {"index_p", to_fraction_string(index(t, a, p))},
              {"index_q", to_fraction_string(index(t, a, q))}};
}

std::optional<Json> clem3_case(Rng& rng, bool& redraw) {
  const std::size_t n = uniform(rng, 2, 12);
  MeasureTriple t = random_triple(rng, n);
  AtomSet s = random_subset(rng, n, true);
  AtomSet tt = random_subset(rng, n, true) & s;
  AtomSet a = random_subset(rng, n, false);
  if (measure(t, tt) == 0) {
    redraw = true;
    return std::nullopt;
  }
  Rational dev = abs(density(t, a, tt) - density(t, a, s));
  if (dev == 0) {
    redraw = true;
    return std::nullopt;
  }
  // eps drawn from (0, dev].
  const long steps = static_cast<long>(uniform(rng, 1, 16));
  Rational eps = dev * Rational(steps, 16);

  SemiRing base = SemiRing::power_set(n);
  std::vector<Cell> pieces;
  for (const AtomSet& piece : {tt, s - tt, s.complement()}) {
    if (!piece.empty()) pieces.emplace_back(piece);
  }
  Partition u = common_refinement(Partition(base, pieces), random_partition(rng, base, uniform(rng, 1, n)));
  Rational lhs = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!u.points(i).is_subset_of(s)) continue;
    Rational d = density(t, a, u.points(i));
    lhs += measure(t, u.points(i)) * d * d;
  }
  Rational ds = density(t, a, s);
  Rational rhs = measure(t, s) * ds * ds + eps * eps * measure(t, tt);
  if (lhs >= rhs) return std::nullopt;
  return Json{{"weights", triple_json(t)}, {"a", a.indices()},       {"s", s.indices()},
              {"t", tt.indices()},         {"eps", to_fraction_string(eps)}, {"partition", partition_json(u)},
              {"lhs", to_fraction_string(lhs)}, {"rhs", to_fraction_string(rhs)}};
}

std::optional<Json> clem4_case(Rng& rng, bool& redraw) {
  static const Rational kEps[] = {Rational(1, 4), Rational(1, 3), Rational(1, 2)};
  EngineConfig cfg;
  cfg.eps = kEps[uniform(rng, 0, 2)];

  std::optional<SemiRing> s;
  std::optional<Partition> p;
  if (coin(rng)) {
    const std::size_t n1 = uniform(rng, 2, 8), n2 = uniform(rng, 2, 8);
    SemiRing b1 = SemiRing::power_set(n1), b2 = SemiRing::power_set(n2);
    s = SemiRing::boxes({b1, b2});
    p = product_partition({random_partition(rng, b1, uniform(rng, 1, 2)), random_partition(rng, b2, uniform(rng, 1, 2))});
  } else {
    const std::size_t n = uniform(rng, 2, 8);
    SemiRing b = SemiRing::power_set(n);
    s = SemiRing::product(b, 2);
    p = product_partition(random_partition(rng, b, uniform(rng, 1, 2)), 2);
  }
  MeasureTriple t = MeasureTriple::uniform(s->ground_size());
  AtomSet a = random_subset(rng, s->ground_size(), false);
  PartitionVerdict v = check_regular_in_partition(t, a, *p, cfg);
  if (v.regular) {
    redraw = true;
    return std::nullopt;
  }
  RefineResult res = refine_step(t, a, *p, cfg, &v);
  const bool ok = refines(res.refined, *p) && res.refined.size() <= (s->declared_r() + 1) * p->size() &&
                  index(t, a, res.refined) >= index(t, a, *p) + pow(cfg.eps, 4);
  if (ok) return std::nullopt;
  return Json{{"semiring", s->name()},
              {"eps", to_fraction_string(cfg.eps)},
              {"a", a.indices()},
              {"p", partition_json(*p)},
              {"q", partition_json(res.refined)}};
}

std::optional<Json> leref_case(Rng& rng, bool&) {
  static const Rational kEps[] = {Rational(1, 2), Rational(1, 4)};
  static const std::size_t kN[] = {10, 50};
  const Rational eps = kEps[uniform(rng, 0, 1)];
  const std::size_t n = kN[uniform(rng, 0, 1)];
  const std::size_t k = uniform(rng, 1, 2);
  const std::size_t p = uniform(rng, 1, 3);
  SemiRing base = SemiRing::power_set(n);

  std::vector<AtomSet> generators;
  for (std::size_t i = 0; i < p * k; ++i) generators.push_back(random_subset(rng, n, true));
  Partition r_parts = generated_partition(base, generators);
  MeasureTriple t = MeasureTriple::uniform(n);
  Partition q = equitable_refine(t, r_parts, eps);
  Partition qk = product_partition(q, k);

  const BigInt two_pk = BigInt(1) << static_cast<unsigned>(p * k);
  const BigInt two_pkk = BigInt(1) << static_cast<unsigned>(p * k * k);
  const bool ok = refines(q, r_parts) && is_equitable(t, q, eps) &&
                  Rational(q.size()) <= (Rational(2) / eps + 1) * Rational(two_pk) &&
                  BigInt(qk.size()) <= boost::multiprecision::pow(ceil_of(Rational(2) / eps) + 1, static_cast<unsigned>(k)) * two_pkk;
  if (ok) return std::nullopt;
  return Json{{"n", n}, {"eps", to_fraction_string(eps)}, {"k", k}, {"p", p},
              {"r_parts", partition_json(r_parts)}, {"q", partition_json(q)}};
}

const std::map<std::string, CaseFn>& suites() {
  static const std::map<std::string, CaseFn> table{
      {"semiring", semiring_case}, {"mxind", mxind_case}, {"defect-cs", defect_cs_case}, {"clem2", clem2_case},
      {"clem3", clem3_case},       {"clem4", clem4_case}, {"leref", leref_case},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"semiring", "mxind", "defect-cs", "clem2", "clem3", "clem4", "leref"};
  return names;
}

SuiteResult run_suite(const std::string& name, std::size_t cases, std::uint64_t seed) {
  auto it = suites().find(name);
  if (it == suites().end()) throw std::invalid_argument("unknown suite '" + name + "'");
  return run_cases(name, cases, seed, it->second);
}

ClaimReport run_claim_k_root(std::size_t cases, std::uint64_t seed) {
  ClaimReport r;
  std::seed_seq seq{seed, std::uint64_t{0xc1a1}};
  Rng rng(seq);
  static const Rational kRoot[] = {Rational(1, 2), Rational(2, 3), Rational(3, 4)};
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t k = 2;
    const std::size_t n1 = uniform(rng, 2, 6), n2 = uniform(rng, 2, 6);
    const Rational root = kRoot[uniform(rng, 0, 2)];
    const Rational eps = root * root;
    SemiRing s = SemiRing::boxes({SemiRing::power_set(n1), SemiRing::power_set(n2)});
    MeasureTriple t = MeasureTriple::uniform(s.ground_size());
    AtomSet g = random_subset(rng, s.ground_size(), false);
    Cell v = s.whole();
    ++r.instances;

    EngineConfig cfg;
    cfg.eps = root;
    if (!check_regular_in_cell(t, s, g, v, cfg).regular) continue;
    ++r.root_regular;

    const Rational dv = density(t, g, s.points(v));
    bool violated = false;
    for (std::size_t m1 = 1; m1 < (std::size_t{1} << n1) && !violated; ++m1) {
      if (!(Rational(static_cast<long>(__builtin_popcountll(m1))) > eps * n1)) continue;
      for (std::size_t m2 = 1; m2 < (std::size_t{1} << n2) && !violated; ++m2) {
        if (!(Rational(static_cast<long>(__builtin_popcountll(m2))) > eps * n2)) continue;
        AtomSet u1(n1), u2(n2);
        for (std::size_t i = 0; i < n1; ++i) {
          if ((m1 >> i) & 1U) u1.insert(i);
        }
        for (std::size_t i = 0; i < n2; ++i) {
          if ((m2 >> i) & 1U) u2.insert(i);
        }
        Cell u(std::vector<AtomSet>{u1, u2});
        const Rational du = density(t, g, s.points(u));
        if (abs(du - dv) >= eps) {
          violated = true;
          ++r.violations;
          if (r.first_violation.is_null()) {
            r.first_violation = Json{{"k", k},
                                     {"classes", {n1, n2}},
                                     {"root_eps", to_fraction_string(root)},
                                     {"eps", to_fraction_string(eps)},
                                     {"graph", g.indices()},
                                     {"u", cell_json(s, u)},
                                     {"d_u", to_fraction_string(du)},
                                     {"d_v", to_fraction_string(dv)}};
          }
        }
      }
    }
  }
  return r;
}

Json suite_json(const SuiteResult& r) {
  Json j;
  j["suite"] = r.name;
  j["cases"] = r.cases;
  j["passed"] = r.passed;
  j["failed"] = r.failed;
  j["redrawn"] = r.redrawn;
  j["counterexample"] = r.counterexample;
  return j;
}

Json claim_json(const ClaimReport& r) {
  Json j;
  j["check"] = "claim-k-root";
  j["instances"] = r.instances;
  j["root_regular"] = r.root_regular;
  j["violations"] = r.violations;
  j["first_violation"] = r.first_violation;
  j["note"] = "empirical only; never affects the exit status";
  return j;
}

}  // namespace regulens
