#include "regulens/errors.hpp"
#include "regulens/partition.hpp"

#include <doctest.h>

#include <random>

using namespace regulens;

namespace {

Partition base_partition(std::size_t n, std::initializer_list<std::initializer_list<std::size_t>> blocks) {
  std::vector<Cell> cells;
  for (auto b : blocks) cells.emplace_back(AtomSet::of(n, b));
  return Partition(SemiRing::power_set(n), std::move(cells));
}

Cell box(std::size_t n, std::initializer_list<std::initializer_list<std::size_t>> coords) {
  std::vector<AtomSet> out;
  for (auto c : coords) out.push_back(AtomSet::of(n, c));
  return Cell(std::move(out));
}

// Independent index: sum over cells of mu(A & P)^2 / mu(P), straight from
// the atom weights.
Rational index_oracle(const std::vector<Rational>& w, const AtomSet& a, const Partition& p) {
  Rational total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    Rational mp = 0, ma = 0;
    for (auto atom : p.points(i).indices()) {
      mp += w[atom];
      if (a.contains(atom)) ma += w[atom];
    }
    if (mp > 0) total += ma * ma / mp;
  }
  return total;
}

}  // namespace

TEST_CASE("partition validation") {
  CHECK_THROWS_AS(base_partition(4, {{0, 1}, {1, 2, 3}}), StructuralError);
  CHECK_THROWS_AS(base_partition(4, {{0, 1}, {2}}), StructuralError);
  Partition p = base_partition(4, {{2, 3}, {0, 1}});
  CHECK(p.cell(0) == Cell(AtomSet::of(4, {0, 1})));
}

TEST_CASE("refines examples") {
  Partition p = base_partition(4, {{0, 1}, {2, 3}});
  Partition q = base_partition(4, {{0, 2}, {1, 3}});
  CHECK(refines(p, p));
  CHECK(refines(Partition::singletons(SemiRing::power_set(4)), q));
  CHECK_FALSE(refines(p, q));
  CHECK(refines(p, Partition::trivial(SemiRing::power_set(4))));
}

TEST_CASE("common refinement examples") {
  Partition p = base_partition(4, {{0, 1}, {2, 3}});
  Partition q = base_partition(4, {{0, 2}, {1, 3}});
  CHECK(common_refinement(p, p) == p);
  CHECK(common_refinement(Partition::trivial(SemiRing::power_set(4)), q) == q);
  Partition r = common_refinement(p, q);
  CHECK(r == Partition::singletons(SemiRing::power_set(4)));
  CHECK(refines(r, p));
  CHECK(refines(r, q));
}

TEST_CASE("product partition examples") {
  CHECK(product_partition(Partition::trivial(SemiRing::power_set(3)), 3).size() == 1);
  CHECK(product_partition(base_partition(3, {{0}, {1, 2}}), 2).size() == 4);
  Partition pk = product_partition(base_partition(3, {{0}, {1, 2}}), 2);
  CHECK(pk.cell(0) == box(3, {{0}, {0}}));
  CHECK(pk.cell(1) == box(3, {{0}, {1, 2}}));
  CHECK(pk.cell(2) == box(3, {{1, 2}, {0}}));
  CHECK(pk.cell(3) == box(3, {{1, 2}, {1, 2}}));
}

TEST_CASE("index examples") {
  MeasureTriple t = MeasureTriple::uniform(4);
  Partition p = base_partition(4, {{0, 1}, {2, 3}});
  CHECK(index(t, AtomSet::full(4), p) == 1);
  CHECK(index(t, AtomSet(4), p) == 0);
  CHECK(index(t, AtomSet::of(4, {0, 1}), p) == Rational(1, 2));
}

TEST_CASE("index matches the oracle and stays within [0, mu(A)]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    std::vector<long> raw(n);
    long total = 0;
    for (auto& x : raw) total += (x = static_cast<long>(rng() % 4));
    if (total == 0) raw[0] = total = 1;
    std::vector<Rational> w;
    for (auto x : raw) w.emplace_back(x, total);
    MeasureTriple t(w);
    std::vector<std::size_t> labels(n);
    for (auto& l : labels) l = rng() % 3;
    std::vector<Cell> cells;
    for (std::size_t b = 0; b < 3; ++b) {
      AtomSet s(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == b) s.insert(i);
      }
      if (!s.empty()) cells.emplace_back(s);
    }
    Partition p(SemiRing::power_set(n), cells);
    AtomSet a(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() & 1) a.insert(i);
    }
    Rational ind = index(t, a, p);
    CHECK(ind == index_oracle(w, a, p));
    CHECK(ind >= 0);
    CHECK(ind <= measure(t, a));
  }
}

TEST_CASE("product family closure") {
  // {1} x {0,1} is not a disjoint-or-equal product, so this one lives in boxes.
  SemiRing b = SemiRing::boxes({SemiRing::power_set(2), SemiRing::power_set(2)});
  Partition p(b, {box(2, {{0}, {0}}), box(2, {{0}, {1}}), box(2, {{1}, {0, 1}})});
  RateFunction rate;
  Partition q = bound_by_product_family(p, &rate);
  CHECK(q.size() == 4);
  CHECK(refines(q, p));
  CHECK(BigInt(q.size()) <= rate(p.size()));

  SemiRing s = SemiRing::product(SemiRing::power_set(3), 2);
  Partition split(s, {box(3, {{0}, {0}}), box(3, {{0}, {1}}), box(3, {{1}, {0}}), box(3, {{1}, {1}}),
                      box(3, {{0, 1}, {2}}), box(3, {{2}, {0, 1}}), box(3, {{2}, {2}})});
  Partition closed = bound_by_product_family(split, &rate);
  CHECK(closed == product_partition(Partition::singletons(SemiRing::power_set(3)), 2));
  CHECK(BigInt(closed.size()) <= rate(split.size()));

  Partition whole = bound_by_product_family(Partition::trivial(s));
  CHECK(whole.size() == 1);
}

TEST_CASE("psi recursion") {
  const RateFunction id = RateFunction::identity();
  CHECK(psi(1, 7, 3, id).plain.value == 7);
  CHECK(psi(2, 3, 1, id).plain.value == 6);
  // phi(x) = 2^x as the k = 1 power-set product rate.
  const RateFunction exp2(RateFunction::Formula::product_power_set, 1);
  CHECK(exp2(3) == 8);
  CHECK(psi(3, 1, 1, exp2).plain.value == 32);
  // psi'(1, p) = phi(p), psi'(2, p) = phi((r + 1) phi(p)).
  CHECK(psi(1, 1, 1, exp2).conservative.value == 2);
  CHECK(psi(2, 1, 1, exp2).conservative.value == 16);
  auto huge = psi(6, 1, 1, exp2);
  CHECK(huge.conservative.saturated);
  CHECK(huge.conservative.admits(1000000));
}

TEST_CASE("equitable refinement examples") {
  MeasureTriple t = MeasureTriple::uniform(10);
  SUBCASE("two parts, residuals flagged") {
    Partition r = base_partition(10, {{0, 1, 2, 3, 4, 5, 6}, {7, 8, 9}});
    Partition q = equitable_refine(t, r, Rational(1, 2));
    REQUIRE(q.size() == 6);
    CHECK(q.cell(0) == Cell(AtomSet::of(10, {0, 1})));
    CHECK(q.cell(1) == Cell(AtomSet::of(10, {2, 3})));
    CHECK(q.cell(2) == Cell(AtomSet::of(10, {4, 5})));
    CHECK(q.cell(3) == Cell(AtomSet::of(10, {6})));
    CHECK(q.cell(4) == Cell(AtomSet::of(10, {7, 8})));
    CHECK(q.cell(5) == Cell(AtomSet::of(10, {9})));
    CHECK(q.exceptional() == std::vector<bool>{false, false, false, true, false, true});
    CHECK(is_equitable(t, q, Rational(1, 2)));
    CHECK(refines(q, r));
  }
  SUBCASE("small n falls back to singletons") {
    MeasureTriple t4 = MeasureTriple::uniform(4);
    Partition q = equitable_refine(t4, Partition::singletons(SemiRing::power_set(4)), Rational(1, 2));
    CHECK(q == Partition::singletons(SemiRing::power_set(4)));
  }
  SUBCASE("exact division leaves no residual") {
    Partition q = equitable_refine(t, Partition::trivial(SemiRing::power_set(10)), Rational(1, 2));
    CHECK(q.size() == 2);
    CHECK_FALSE(q.has_exceptional());
    CHECK(q.points(0).count() == 5);
  }
  SUBCASE("strict blocks stay below eps") {
    Partition q = equitable_refine(t, Partition::trivial(SemiRing::power_set(10)), Rational(1, 2), true);
    CHECK(q.points(0).count() == 4);
    CHECK(is_equitable(t, q, Rational(1, 2), true));
  }
  CHECK_THROWS_AS(equitable_refine(t, Partition::trivial(SemiRing::power_set(10)), Rational(1, 10)), PreconditionError);
  CHECK_THROWS_AS(equitable_refine(t, Partition::trivial(SemiRing::power_set(10)), Rational(1)), PreconditionError);
}

TEST_CASE("equitable rates") {
  CHECK(equitable_rate(Rational(1, 2), 1, EquitableVariant::count)(1) == 10);
  CHECK(equitable_rate(Rational(1, 2), 1, EquitableVariant::cube)(1) == 6);
  for (auto variant : {EquitableVariant::count, EquitableVariant::cube}) {
    RateFunction f = equitable_rate(Rational(1, 3), 2, variant);
    for (std::size_t p = 1; p < 6; ++p) CHECK(f(p + 1) > f(p));
  }
}

TEST_CASE("generated partitions split interval runs") {
  SemiRing iv = SemiRing::intervals(6);
  Partition g = generated_partition(iv, {AtomSet::of(6, {0, 1, 4, 5})});
  CHECK(g.size() == 3);
  for (const auto& c : g.cells()) CHECK(iv.is_member(c));
}

TEST_CASE("equitable family closure over products") {
  SemiRing s = SemiRing::product(SemiRing::power_set(12), 2);
  RateFunction rate;
  Partition q = bound_by_equitable_family(Partition::trivial(s), Rational(1, 3), true, &rate);
  // blocks of 3 (largest size below 12/3), no residual
  CHECK(q.size() == 16);
  CHECK(rate.formula() == RateFunction::Formula::equitable_count);
}
