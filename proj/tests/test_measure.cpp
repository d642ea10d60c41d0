#include "regulens/errors.hpp"
#include "regulens/measure.hpp"

#include <doctest.h>

#include <random>

using namespace regulens;

TEST_CASE("rational literals parse exactly") {
  CHECK(parse_rational("1/4") == Rational(1, 4));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("-2/6") == Rational(-1, 3));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/"), std::invalid_argument);
  CHECK(to_fraction_string(Rational(2, 8)) == "1/4");
  CHECK(to_fraction_string(Rational(0)) == "0/1");
  CHECK(to_fraction_string(Rational(3)) == "3/1");
  CHECK(floor_of(Rational(7, 2)) == 3);
  CHECK(ceil_of(Rational(7, 2)) == 4);
  CHECK(ceil_of(Rational(4)) == 4);
}

TEST_CASE("atom sets") {
  AtomSet a = AtomSet::of(130, {0, 64, 129});
  CHECK(a.count() == 3);
  CHECK(a.contains(64));
  CHECK_FALSE(a.contains(65));
  CHECK(a.first() == 0);
  CHECK(a.next(0) == 64);
  CHECK(a.next(129) == 130);
  CHECK(a.complement().count() == 127);
  CHECK((a & a.complement()).empty());
  CHECK(AtomSet::range(10, 2, 5).indices() == std::vector<std::size_t>{2, 3, 4});
  CHECK_THROWS_AS(a.insert(130), StructuralError);
  CHECK_THROWS_AS(a |= AtomSet(5), StructuralError);

  // Lexicographic order of sorted atom lists.
  CHECK(AtomSet::of(4, {0, 3}) < AtomSet::of(4, {1}));
  CHECK(AtomSet::of(4, {0}) < AtomSet::of(4, {0, 1}));
  CHECK(AtomSet(4) < AtomSet::of(4, {3}));
}

TEST_CASE("measure examples") {
  MeasureTriple t = MeasureTriple::uniform(4);
  CHECK(measure(t, AtomSet::full(4)) == 1);
  CHECK(measure(t, AtomSet(4)) == 0);
  CHECK(measure(t, AtomSet::of(4, {0, 1})) == Rational(1, 2));
  CHECK(t.is_uniform());
}

TEST_CASE("density examples") {
  MeasureTriple t = MeasureTriple::uniform(4);
  AtomSet v = AtomSet::of(4, {1, 2});
  CHECK(density(t, v, v) == 1);
  CHECK(density(t, AtomSet::of(4, {0, 1}), v) == Rational(1, 2));

  MeasureTriple w({Rational(1, 2), Rational(1, 2), Rational(0)});
  CHECK(density(w, AtomSet::full(3), AtomSet::of(3, {2})) == 0);
  CHECK_FALSE(w.is_uniform());
}

TEST_CASE("triples reject bad weights") {
  CHECK_THROWS_AS(MeasureTriple({Rational(1, 2), Rational(1, 3)}), StructuralError);
  CHECK_THROWS_AS(MeasureTriple({Rational(3, 2), Rational(-1, 2)}), StructuralError);
  CHECK_THROWS_AS(MeasureTriple::uniform(16, 8), CapacityError);
  // A common denominator above the scaled-integer cap.
  const long big = (1L << 31) + 11;
  CHECK_THROWS_AS(MeasureTriple({Rational(1, big), Rational(big - 1, big)}), CapacityError);
}

TEST_CASE("scaled measures agree with rational measures") {
  MeasureTriple t({Rational(1, 6), Rational(1, 3), Rational(1, 2)});
  CHECK(t.scale() == 6);
  AtomSet a = AtomSet::of(3, {1, 2});
  CHECK(scaled_measure(t, a) == 5);
  CHECK(Rational(scaled_measure(t, a), t.scale()) == measure(t, a));
}

TEST_CASE("additivity, monotonicity and density range on random sets") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    std::vector<Rational> weights;
    long total = 0;
    std::vector<long> raw(n);
    for (auto& x : raw) total += (x = static_cast<long>(rng() % 5));
    if (total == 0) raw[0] = total = 1;
    for (auto x : raw) weights.emplace_back(x, total);
    MeasureTriple t(weights);

    AtomSet a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() & 1) a.insert(i);
      if (rng() & 1) b.insert(i);
    }
    AtomSet b_only = b - a;
    CHECK(measure(t, a | b_only) == measure(t, a) + measure(t, b_only));
    CHECK(measure(t, a & b) <= measure(t, a));
    Rational d = density(t, a, b);
    CHECK(d >= 0);
    CHECK(d <= 1);
  }
}
