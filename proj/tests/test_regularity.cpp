#include "regulens/errors.hpp"
#include "regulens/regularity.hpp"

#include <doctest.h>

#include <random>

using namespace regulens;

namespace {

SemiRing bipartite(std::size_t n1, std::size_t n2) {
  return SemiRing::boxes({SemiRing::power_set(n1), SemiRing::power_set(n2)});
}

AtomSet half_graph(const SemiRing& s, std::size_t n) {
  AtomSet a(s.ground_size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i + j <= 3) a.insert(s.encode(std::vector<std::size_t>{i, j}));
    }
  }
  return a;
}

// Maximal deviation over all sub-boxes of an n1 x n2 bipartite cell, uniform
// measure, by bitmask enumeration. -1 when no sub-box is large enough.
Rational brute_max_deviation(const std::vector<std::vector<int>>& adj, const Rational& eps) {
  const std::size_t n1 = adj.size(), n2 = adj[0].size();
  long total = 0;
  for (const auto& row : adj) {
    for (int x : row) total += x;
  }
  const Rational dv(total, static_cast<long>(n1 * n2));
  Rational best = -1;
  for (std::size_t m1 = 1; m1 < (1U << n1); ++m1) {
    for (std::size_t m2 = 1; m2 < (1U << n2); ++m2) {
      const long s1 = __builtin_popcountll(m1), s2 = __builtin_popcountll(m2);
      if (!(Rational(s1 * s2) > eps * static_cast<long>(n1 * n2))) continue;
      long e = 0;
      for (std::size_t i = 0; i < n1; ++i) {
        if (!((m1 >> i) & 1U)) continue;
        for (std::size_t j = 0; j < n2; ++j) {
          if ((m2 >> j) & 1U) e += adj[i][j];
        }
      }
      Rational dev = abs(Rational(e, s1 * s2) - dv);
      if (dev > best) best = dev;
    }
  }
  return best;
}

Rational index_oracle(const MeasureTriple& t, const AtomSet& a, const Partition& p) {
  Rational total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto pts = p.points(i).indices();
    Rational mp = 0, ma = 0;
    for (auto x : pts) {
      mp += t.weights()[x];
      if (a.contains(x)) ma += t.weights()[x];
    }
    if (mp > 0) total += ma * ma / mp;
  }
  return total;
}

}  // namespace

TEST_CASE("engine configuration is validated") {
  EngineConfig cfg;
  cfg.eps = 0;
  CHECK_THROWS_AS(cfg.validate(), PreconditionError);
  cfg.eps = 1;
  CHECK_THROWS_AS(cfg.validate(), PreconditionError);
  cfg.eps = Rational(1, 3);
  cfg.sample_count = 0;
  CHECK_THROWS_AS(cfg.validate(), PreconditionError);
}

TEST_CASE("constant-density cells are regular") {
  SemiRing s = bipartite(4, 4);
  MeasureTriple t = MeasureTriple::uniform(16);
  EngineConfig cfg;
  for (auto eps : {Rational(1, 10), Rational(1, 4), Rational(3, 4)}) {
    cfg.eps = eps;
    CHECK(check_regular_in_cell(t, s, AtomSet::full(16), s.whole(), cfg).regular);
    CHECK(check_regular_in_cell(t, s, AtomSet(16), s.whole(), cfg).regular);
  }
}

TEST_CASE("half graph witness is pinned") {
  SemiRing s = bipartite(4, 4);
  MeasureTriple t = MeasureTriple::uniform(16);
  AtomSet a = half_graph(s, 4);
  EngineConfig cfg;
  cfg.eps = Rational(1, 4);
  CellVerdict v = check_regular_in_cell(t, s, a, s.whole(), cfg);
  REQUIRE_FALSE(v.regular);
  REQUIRE(v.witness);
  const Witness& w = *v.witness;
  // Frozen from an exhaustive enumeration over all 2^4 x 2^4 sub-boxes.
  CHECK(w.sub == Cell(std::vector<AtomSet>{AtomSet::of(4, {1, 2, 3}), AtomSet::of(4, {2, 3})}));
  CHECK(w.d_cell == Rational(5, 8));
  CHECK(w.d_sub == Rational(1, 6));
  CHECK(w.deviation == Rational(11, 24));
  CHECK(is_valid_witness(t, s, a, w, cfg.eps));

  std::vector<std::vector<int>> adj(4, std::vector<int>(4));
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) adj[i][j] = i + j <= 3;
  }
  CHECK(brute_max_deviation(adj, cfg.eps) == w.deviation);
}

TEST_CASE("exact verdicts agree with bitmask enumeration on random bipartite cells") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n1 = 2 + rng() % 4, n2 = 2 + rng() % 4;
    SemiRing s = bipartite(n1, n2);
    MeasureTriple t = MeasureTriple::uniform(n1 * n2);
    std::vector<std::vector<int>> adj(n1, std::vector<int>(n2));
    AtomSet a(n1 * n2);
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n2; ++j) {
        adj[i][j] = static_cast<int>(rng() & 1);
        if (adj[i][j]) a.insert(s.encode(std::vector<std::size_t>{i, j}));
      }
    }
    for (auto eps : {Rational(1, 5), Rational(1, 3)}) {
      EngineConfig cfg;
      cfg.eps = eps;
      CellVerdict v = check_regular_in_cell(t, s, a, s.whole(), cfg);
      Rational best = brute_max_deviation(adj, eps);
      CHECK(v.regular == (best < eps));
      if (!v.regular) CHECK(v.witness->deviation == best);
    }
  }
}

TEST_CASE("repeated coordinates use equal sub-coordinates") {
  SemiRing s = SemiRing::product(SemiRing::power_set(3), 2);
  MeasureTriple t = MeasureTriple::uniform(9);
  AtomSet a(9);
  a.insert(s.encode(std::vector<std::size_t>{0, 0}));
  EngineConfig cfg;
  cfg.eps = Rational(1, 10);
  CellVerdict v = check_regular_in_cell(t, s, a, s.whole(), cfg);
  REQUIRE_FALSE(v.regular);
  CHECK(v.witness->sub.coord(0) == v.witness->sub.coord(1));
  CHECK(s.is_member(v.witness->sub));
}

TEST_CASE("zero-measure cells and capacity limits") {
  SemiRing s = SemiRing::power_set(3);
  MeasureTriple t({Rational(0), Rational(1, 2), Rational(1, 2)});
  EngineConfig cfg;
  CHECK_THROWS_AS(check_regular_in_cell(t, s, AtomSet::of(3, {1}), Cell(AtomSet::of(3, {0})), cfg), PreconditionError);

  SemiRing big = bipartite(10, 10);
  MeasureTriple u = MeasureTriple::uniform(100);
  AtomSet a = AtomSet::of(100, {0, 55});
  cfg.coordinate_subset_cap = 1000;
  CHECK_THROWS_AS(check_regular_in_cell(u, big, a, big.whole(), cfg), CapacityError);
  cfg.mode = SearchMode::sample;
  CHECK_NOTHROW(check_regular_in_cell(u, big, a, big.whole(), cfg));
}

TEST_CASE("sample mode is sound and deterministic") {
  SemiRing s = bipartite(6, 6);
  MeasureTriple t = MeasureTriple::uniform(36);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    AtomSet a(36);
    for (std::size_t i = 0; i < 36; ++i) {
      if (rng() % 3 == 0) a.insert(i);
    }
    EngineConfig cfg;
    cfg.eps = Rational(1, 5);
    cfg.mode = SearchMode::sample;
    cfg.seed = rng();
    CellVerdict v1 = check_regular_in_cell(t, s, a, s.whole(), cfg, 17);
    CellVerdict v2 = check_regular_in_cell(t, s, a, s.whole(), cfg, 17);
    CHECK(v1.regular == v2.regular);
    CHECK_FALSE((v1.certified && v1.regular && !(a.empty() || a.count() == 36)));
    if (v1.witness) {
      CHECK(is_valid_witness(t, s, a, *v1.witness, cfg.eps));
      CHECK(v1.witness->sub == v2.witness->sub);
    }
  }
}

TEST_CASE("partition verdict compares irregular mass with eps") {
  // Cells {0,1} and {2,3,4,5} carry a set of density 1/2 concentrated on one
  // side; both are irregular at eps = 2/5 and 1/3.
  SemiRing s = SemiRing::power_set(16);
  MeasureTriple t = MeasureTriple::uniform(16);
  std::vector<Cell> cells{Cell(AtomSet::of(16, {0, 1})), Cell(AtomSet::of(16, {2, 3, 4, 5})),
                          Cell(AtomSet::range(16, 6, 16))};
  Partition p(s, cells);
  AtomSet a = AtomSet::of(16, {0, 2, 3});
  EngineConfig cfg;
  cfg.eps = Rational(2, 5);
  PartitionVerdict v = check_regular_in_partition(t, a, p, cfg);
  CHECK(v.irregular_cells == std::vector<std::size_t>{0, 1});
  CHECK(v.irregular_mass == Rational(3, 8));
  CHECK(v.regular);
  cfg.eps = Rational(1, 3);
  v = check_regular_in_partition(t, a, p, cfg);
  CHECK(v.irregular_mass == Rational(3, 8));
  CHECK_FALSE(v.regular);
}

TEST_CASE("no set is irregular at eps >= 1/2") {
  // d(V) = t d(U) + (1 - t) d(V \ U) with t > eps, so the deviation is below
  // 1 - t < 1 - eps <= eps.
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    SemiRing s = bipartite(4, 4);
    MeasureTriple t = MeasureTriple::uniform(16);
    AtomSet a(16);
    for (std::size_t i = 0; i < 16; ++i) {
      if (rng() & 1) a.insert(i);
    }
    EngineConfig cfg;
    cfg.eps = Rational(1, 2);
    CHECK(check_regular_in_cell(t, s, a, s.whole(), cfg).regular);
  }
}

TEST_CASE("refine_step on the half graph") {
  SemiRing s = bipartite(4, 4);
  MeasureTriple t = MeasureTriple::uniform(16);
  AtomSet a = half_graph(s, 4);
  EngineConfig cfg;
  cfg.eps = Rational(1, 4);
  Partition p = Partition::trivial(s);
  RefineResult r = refine_step(t, a, p, cfg);
  CHECK(r.refined.size() <= s.declared_r() + 1);
  CHECK(refines(r.refined, p));
  CHECK(index_oracle(t, a, r.refined) - index_oracle(t, a, p) >= Rational(1, 256));
  CHECK(r.index_before == index_oracle(t, a, p));
  CHECK(r.index_after == index_oracle(t, a, r.refined));
}

TEST_CASE("refine_step gain when the irregular mass is exactly eps") {
  // The half graph occupies the block {0..3} x {0..3} of an 8 x 8 box split
  // into four blocks; that block has measure 1/4 = eps.
  SemiRing s = bipartite(8, 8);
  MeasureTriple t = MeasureTriple::uniform(64);
  AtomSet a(64);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i + j <= 3) a.insert(s.encode(std::vector<std::size_t>{i, j}));
    }
  }
  std::vector<Cell> cells;
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      cells.emplace_back(std::vector<AtomSet>{AtomSet::range(8, 4 * x, 4 * x + 4), AtomSet::range(8, 4 * y, 4 * y + 4)});
    }
  }
  Partition p(s, cells);
  EngineConfig cfg;
  cfg.eps = Rational(1, 4);
  PartitionVerdict v = check_regular_in_partition(t, a, p, cfg);
  REQUIRE(v.irregular_mass == cfg.eps);
  REQUIRE_FALSE(v.regular);
  RefineResult r = refine_step(t, a, p, cfg, &v);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(measure(t, s.points(r.witnesses[0].sub)) > cfg.eps * measure(t, s.points(r.witnesses[0].cell)));
  CHECK(index_oracle(t, a, r.refined) - index_oracle(t, a, p) >= cfg.eps * cfg.eps * cfg.eps * cfg.eps);
}

TEST_CASE("regularize on constant sets does not refine") {
  SemiRing s = SemiRing::product(SemiRing::power_set(6), 2);
  MeasureTriple t = MeasureTriple::uniform(36);
  EngineConfig cfg;
  cfg.eps = Rational(1, 3);
  for (const AtomSet& a : {AtomSet(36), AtomSet::full(36)}) {
    std::vector<AtomSet> sets{a};
    auto rep = regularize(t, sets, Partition::trivial(s), cfg, Bounding{});
    CHECK(rep.trace.empty());
    CHECK(rep.partition == close_into_family(Partition::trivial(s), Bounding{}, cfg.eps));
    CHECK(rep.all_regular());
  }
}

TEST_CASE("regularize keeps its index and iteration guarantees") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 6 + rng() % 5;
    SemiRing s = SemiRing::product(SemiRing::power_set(n), 2);
    MeasureTriple t = MeasureTriple::uniform(n * n);
    AtomSet a(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
      if (rng() % 3 == 0) a.insert(i);
    }
    EngineConfig cfg;
    cfg.eps = Rational(1, 3);
    std::vector<AtomSet> sets{a};
    auto rep = regularize(t, sets, Partition::trivial(s), cfg, Bounding{});
    CHECK(rep.trace.size() <= 81);
    CHECK(rep.iteration_limit == 81);
    for (const auto& step : rep.trace) {
      CHECK(step.index_after >= step.index_before + Rational(1, 81));
      CHECK(step.index_after <= 1);
    }
    CHECK(rep.all_regular());
    CHECK(check_regular_in_partition(t, a, rep.partition, cfg).regular);
    CHECK(rep.bounds.conservative.admits(rep.partition.size()));
    CHECK(rep.refines_initial);
  }
}

TEST_CASE("iteration cap surfaces as a capacity error") {
  SemiRing s = bipartite(4, 4);
  MeasureTriple t = MeasureTriple::uniform(16);
  std::vector<AtomSet> sets{half_graph(s, 4)};
  EngineConfig cfg;
  cfg.eps = Rational(1, 4);
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(regularize(t, sets, Partition::trivial(s), cfg, Bounding{}), CapacityError);
}

TEST_CASE("defect Cauchy-Schwarz examples") {
  std::vector<Rational> c{1, 1};
  std::vector<Rational> same{Rational(2, 3), Rational(2, 3)};
  CHECK(defect_cs_check(c, same, {}, 0).part1);
  CHECK(defect_cs_check(c, same, {}, 0).part2 == DefectCsResult::Part2::not_requested);

  std::vector<Rational> x{1, 3};
  CHECK(defect_cs_check(c, x, {}, 0).part1);
  // sum c * sum_J cx - sum cx * sum_J c with J = {1}: 2 * 3 - 4 * 1 = 2.
  std::vector<std::size_t> j{1};
  CHECK(defect_cs_check(c, x, j, 2).part2 == DefectCsResult::Part2::holds);
  CHECK(defect_cs_check(c, x, j, 3).part2 == DefectCsResult::Part2::hypothesis_not_met);
  std::vector<std::size_t> j0{0};
  CHECK(defect_cs_check(c, x, j0, 1).part2 == DefectCsResult::Part2::hypothesis_not_met);
}
