#include "regulens/partition.hpp"

#include "regulens/errors.hpp"

#include <algorithm>
#include <numeric>

namespace regulens {

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(SemiRing semiring, std::vector<Cell> cells, std::vector<bool> exceptional)
    : semiring_(std::move(semiring)) {
  if (exceptional.empty()) exceptional.assign(cells.size(), false);
  if (exceptional.size() != cells.size()) throw StructuralError("exceptional flags do not match cell count");
  if (cells.empty()) throw StructuralError("a partition needs at least one cell");

  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return cells[x] < cells[y]; });
  cells_.reserve(cells.size());
  exceptional_.reserve(cells.size());
  for (auto i : order) {
    cells_.push_back(std::move(cells[i]));
    exceptional_.push_back(exceptional[i]);
  }

  AtomSet covered(semiring_.ground_size());
  points_.reserve(cells_.size());
  for (const auto& c : cells_) {
    semiring_.require_member(c);
    AtomSet pts = semiring_.points(c);
    if (covered.intersects(pts)) throw StructuralError("partition cells overlap");
    covered |= pts;
    points_.push_back(std::move(pts));
  }
  if (covered.count() != semiring_.ground_size()) throw StructuralError("partition cells do not cover the ground set");
}

Partition Partition::trivial(const SemiRing& s) { return Partition(s, {s.whole()}); }

Partition Partition::singletons(const SemiRing& s) {
  std::vector<Cell> cells;
  cells.reserve(s.ground_size());
  std::vector<std::size_t> coords(s.arity());
  for (std::size_t atom = 0; atom < s.ground_size(); ++atom) {
    s.decode(atom, coords);
    std::vector<AtomSet> factors;
    for (std::size_t i = 0; i < s.arity(); ++i) factors.push_back(AtomSet::of(s.factor(i).size, {coords[i]}));
    cells.emplace_back(std::move(factors));
  }
  return Partition(s, std::move(cells));
}

bool Partition::has_exceptional() const noexcept {
  return std::find(exceptional_.begin(), exceptional_.end(), true) != exceptional_.end();
}

std::vector<std::size_t> Partition::labels() const {
  std::vector<std::size_t> out(semiring_.ground_size(), 0);
  for (std::size_t i = 0; i < points_.size(); ++i) points_[i].for_each([&](std::size_t a) { out[a] = i; });
  return out;
}

bool refines(const Partition& p, const Partition& q) {
  if (p.semiring().ground_size() != q.semiring().ground_size()) {
    throw StructuralError("refinement check across different ground sets");
  }
  auto q_label = q.labels();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& pts = p.points(i);
    if (!pts.is_subset_of(q.points(q_label[pts.first()]))) return false;
  }
  return true;
}

Partition common_refinement(const Partition& p, const Partition& q) {
  if (!(p.semiring() == q.semiring())) throw StructuralError("common refinement across different semi-rings");
  std::vector<Cell> cells;
  for (const auto& a : p.cells()) {
    for (const auto& b : q.cells()) {
      if (auto c = cell_intersect(p.semiring(), a, b)) cells.push_back(std::move(*c));
    }
  }
  return Partition(p.semiring(), std::move(cells));
}

Partition product_partition(const Partition& p, std::size_t k) {
  if (p.semiring().kind() == SemiRing::Kind::product) {
    throw StructuralError("product_partition expects a partition of a base semi-ring");
  }
  SemiRing target = SemiRing::product(p.semiring(), k);
  std::vector<Cell> cells;
  std::vector<bool> flags;
  std::vector<std::size_t> pick(k, 0);
  while (true) {
    std::vector<AtomSet> coords;
    bool exc = false;
    for (std::size_t i = 0; i < k; ++i) {
      coords.push_back(p.cell(pick[i]).coord(0));
      exc = exc || p.is_exceptional(pick[i]);
    }
    cells.emplace_back(std::move(coords));
    flags.push_back(exc);
    std::size_t i = k;
    while (i-- > 0) {
      if (++pick[i] < p.size()) break;
      pick[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return Partition(target, std::move(cells), std::move(flags));
}

Partition product_partition(const std::vector<Partition>& factors) {
  if (factors.empty()) throw StructuralError("product of zero partitions");
  std::vector<SemiRing> bases;
  for (const auto& f : factors) {
    if (f.semiring().kind() == SemiRing::Kind::product) {
      throw StructuralError("product_partition expects partitions of base semi-rings");
    }
    bases.push_back(f.semiring());
  }
  SemiRing target = SemiRing::boxes(bases);
  const std::size_t k = factors.size();
  std::vector<Cell> cells;
  std::vector<bool> flags;
  std::vector<std::size_t> pick(k, 0);
  while (true) {
    std::vector<AtomSet> coords;
    bool exc = false;
    for (std::size_t i = 0; i < k; ++i) {
      coords.push_back(factors[i].cell(pick[i]).coord(0));
      exc = exc || factors[i].is_exceptional(pick[i]);
    }
    cells.emplace_back(std::move(coords));
    flags.push_back(exc);
    std::size_t i = k;
    while (i-- > 0) {
      if (++pick[i] < factors[i].size()) break;
      pick[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return Partition(target, std::move(cells), std::move(flags));
}

Rational index(const MeasureTriple& t, const AtomSet& a, const Partition& p) {
  if (t.size() != p.semiring().ground_size()) throw StructuralError("partition and triple over different ground sets");
  Rational sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::int64_t mp = scaled_measure(t, p.points(i));
    if (mp == 0) continue;
    BigInt ap = scaled_measure(t, a & p.points(i));
    sum += Rational(ap * ap, BigInt(mp));
  }
  return sum / t.scale();
}

// ---------------------------------------------------------------------------
// Rates and the size recursion

std::string BoundValue::str() const {
  if (saturated) return "astronomical (>2^" + std::to_string(max_bits) + ")";
  return value.str();
}

std::string RateFunction::describe() const {
  const std::string k = std::to_string(k_);
  const std::string e = "(" + to_fraction_string(eps_) + ")";
  switch (formula_) {
    case Formula::identity:
      return "p";
    case Formula::product_power_set:
      return "2^(p*" + k + "^2)";
    case Formula::product_interval:
      return "(2*p*" + k + "+1)^" + k;
    case Formula::boxes_power_set:
      return "2^(p*" + k + ")";
    case Formula::boxes_interval:
      return "(2*p+1)^" + k;
    case Formula::equitable_count:
      return "(ceil(2/" + e + ")+1)^" + k + " * 2^(p*" + k + "^2)";
    case Formula::equitable_cube:
      return "(ceil(1/" + e + ")+1)^" + k + " * 2^(p*" + k + "^2)";
    case Formula::equitable_interval:
      return "((ceil(2/" + e + ")+1)*(2*p*" + k + "+1))^" + k;
    case Formula::equitable_boxes:
      return "(ceil(2/" + e + ")+1)^" + k + " * 2^(p*" + k + ")";
  }
  return "?";
}

namespace {

std::size_t bit_length(const BigInt& v) { return v <= 0 ? 0 : boost::multiprecision::msb(v) + 1; }

std::optional<BigInt> checked_pow2(const BigInt& exponent, std::size_t max_bits) {
  if (exponent >= BigInt(max_bits)) return std::nullopt;
  BigInt one = 1;
  return BigInt(one << exponent.convert_to<unsigned>());
}

std::optional<BigInt> checked_pow(const BigInt& base, std::size_t exp, std::size_t max_bits) {
  if (bit_length(base) * exp > max_bits + exp) return std::nullopt;
  BigInt r = boost::multiprecision::pow(base, static_cast<unsigned>(exp));
  if (bit_length(r) > max_bits) return std::nullopt;
  return r;
}

}  // namespace

std::optional<BigInt> RateFunction::evaluate(const BigInt& p, std::size_t max_bits) const {
  const BigInt k = k_;
  const BigInt c2 = ceil_of(Rational(2) / (eps_ == 0 ? Rational(1) : eps_)) + 1;
  const BigInt c1 = ceil_of(Rational(1) / (eps_ == 0 ? Rational(1) : eps_)) + 1;
  std::optional<BigInt> out;
  auto times = [&](const std::optional<BigInt>& a, const std::optional<BigInt>& b) -> std::optional<BigInt> {
    if (!a || !b) return std::nullopt;
    return BigInt(*a * *b);
  };
  switch (formula_) {
    case Formula::identity:
      out = p;
      break;
    case Formula::product_power_set:
      out = checked_pow2(p * k * k, max_bits);
      break;
    case Formula::product_interval:
      out = checked_pow(2 * p * k + 1, k_, max_bits);
      break;
    case Formula::boxes_power_set:
      out = checked_pow2(p * k, max_bits);
      break;
    case Formula::boxes_interval:
      out = checked_pow(2 * p + 1, k_, max_bits);
      break;
    case Formula::equitable_count:
      out = times(checked_pow(c2, k_, max_bits), checked_pow2(p * k * k, max_bits));
      break;
    case Formula::equitable_cube:
      out = times(checked_pow(c1, k_, max_bits), checked_pow2(p * k * k, max_bits));
      break;
    case Formula::equitable_interval:
      out = checked_pow(c2 * (2 * p * k + 1), k_, max_bits);
      break;
    case Formula::equitable_boxes:
      out = times(checked_pow(c2, k_, max_bits), checked_pow2(p * k, max_bits));
      break;
  }
  if (out && bit_length(*out) > max_bits) return std::nullopt;
  return out;
}

BigInt RateFunction::operator()(std::size_t p) const {
  auto v = evaluate(BigInt(p), kDefaultBoundBits);
  if (!v) throw CapacityError("rate " + describe() + " at p=" + std::to_string(p) + " exceeds 2^" +
                              std::to_string(kDefaultBoundBits));
  return *v;
}

PsiBounds psi(std::size_t s, std::size_t p, std::size_t r, const RateFunction& phi, std::size_t max_bits) {
  if (s == 0 || p == 0) throw PreconditionError("psi is defined for positive s and p");
  auto saturated = [&] { return BoundValue{true, 0, max_bits}; };
  auto exact = [&](BigInt v) { return BoundValue{false, std::move(v), max_bits}; };
  const BigInt grow = BigInt(r) + 1;

  PsiBounds out;
  {
    std::optional<BigInt> v = BigInt(p);
    for (std::size_t i = 1; i < s && v; ++i) {
      auto f = phi.evaluate(*v, max_bits);
      if (!f) {
        v.reset();
        break;
      }
      BigInt next = grow * *f;
      if (bit_length(next) > max_bits) v.reset(); else v = next;
    }
    out.plain = v ? exact(*v) : saturated();
  }
  {
    std::optional<BigInt> v = phi.evaluate(BigInt(p), max_bits);
    for (std::size_t i = 1; i < s && v; ++i) v = phi.evaluate(grow * *v, max_bits);
    out.conservative = v ? exact(*v) : saturated();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bounding families

namespace {

std::vector<AtomSet> split_runs(const AtomSet& s) {
  std::vector<AtomSet> runs;
  const std::size_t n = s.universe();
  for (std::size_t i = s.first(); i < n;) {
    std::size_t j = i;
    while (j + 1 < n && s.contains(j + 1)) ++j;
    runs.push_back(AtomSet::range(n, i, j + 1));
    i = s.next(j);
  }
  return runs;
}

SemiRing base_of(const SemiRing& s, std::size_t coord) {
  const auto& f = s.factor(coord);
  return f.kind == BaseKind::power_set ? SemiRing::power_set(f.size) : SemiRing::intervals(f.size);
}

std::vector<AtomSet> coordinate_sets(const Partition& p, std::size_t coord) {
  std::vector<AtomSet> out;
  out.reserve(p.size());
  for (const auto& c : p.cells()) out.push_back(c.coord(coord));
  return out;
}

std::vector<AtomSet> all_coordinate_sets(const Partition& p) {
  std::vector<AtomSet> out;
  for (const auto& c : p.cells()) {
    for (const auto& s : c.coords()) out.push_back(s);
  }
  return out;
}

}  // namespace

Partition generated_partition(const SemiRing& base, const std::vector<AtomSet>& generators) {
  if (base.kind() == SemiRing::Kind::product) throw StructuralError("generated_partition expects a base semi-ring");
  const std::size_t n = base.ground_size();
  std::vector<std::uint32_t> label(n, 0);
  std::uint32_t labels = 1;
  std::vector<std::uint32_t> remap;
  for (const auto& g : generators) {
    if (g.universe() != n) throw StructuralError("generator over the wrong universe");
    remap.assign(2 * static_cast<std::size_t>(labels), UINT32_MAX);
    std::uint32_t next = 0;
    for (std::size_t x = 0; x < n; ++x) {
      std::size_t key = 2 * static_cast<std::size_t>(label[x]) + (g.contains(x) ? 1 : 0);
      if (remap[key] == UINT32_MAX) remap[key] = next++;
      label[x] = remap[key];
    }
    labels = next;
  }
  std::vector<AtomSet> atoms(labels, AtomSet(n));
  for (std::size_t x = 0; x < n; ++x) atoms[label[x]].insert(x);
  std::vector<Cell> cells;
  for (auto& a : atoms) {
    if (base.kind() == SemiRing::Kind::interval) {
      for (auto& r : split_runs(a)) cells.emplace_back(std::move(r));
    } else {
      cells.emplace_back(std::move(a));
    }
  }
  return Partition(base, std::move(cells));
}

Partition bound_by_product_family(const Partition& p, RateFunction* rate) {
  const SemiRing& s = p.semiring();
  const std::size_t k = s.arity();
  if (s.kind() != SemiRing::Kind::product) {
    if (rate) {
      *rate = s.kind() == SemiRing::Kind::power_set ? RateFunction(RateFunction::Formula::boxes_power_set, 1)
                                                    : RateFunction(RateFunction::Formula::boxes_interval, 1);
    }
    return generated_partition(s, coordinate_sets(p, 0));
  }
  Partition out = [&] {
    if (s.disjoint_or_equal()) {
      return product_partition(generated_partition(base_of(s, 0), all_coordinate_sets(p)), k);
    }
    std::vector<Partition> factors;
    for (std::size_t i = 0; i < k; ++i) factors.push_back(generated_partition(base_of(s, i), coordinate_sets(p, i)));
    return product_partition(factors);
  }();
  if (rate) {
    const bool interval = s.factor(0).kind == BaseKind::interval;
    using F = RateFunction::Formula;
    if (s.disjoint_or_equal()) {
      *rate = RateFunction(interval ? F::product_interval : F::product_power_set, k);
    } else {
      *rate = RateFunction(interval ? F::boxes_interval : F::boxes_power_set, k);
    }
  }
  if (!refines(out, p)) throw InvariantError("product-family closure does not refine its input");
  return out;
}

Partition equitable_refine(const MeasureTriple& t, const Partition& r_parts, const Rational& eps, bool strict_blocks) {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("eps must lie strictly between 0 and 1");
  const SemiRing& base = r_parts.semiring();
  if (base.kind() == SemiRing::Kind::product) throw PreconditionError("equitable_refine works on a partition of [n]");
  const std::size_t n = base.ground_size();
  if (t.size() != n) throw StructuralError("triple and partition over different ground sets");
  if (!t.is_uniform()) throw PreconditionError("equitable_refine needs the uniform measure");
  if (!(eps * n > 1)) throw PreconditionError("equitable_refine needs n > 1/eps");

  const std::size_t r = r_parts.size();
  if (eps * n < 2 * static_cast<long>(r)) return Partition::singletons(base);

  const Rational x = eps * n / r;
  const BigInt fl = floor_of(x);
  const BigInt block_big = strict_blocks && Rational(fl) == x ? BigInt(fl - 1) : fl;
  const auto block = block_big.convert_to<std::size_t>();

  std::vector<Cell> cells;
  std::vector<bool> flags;
  for (std::size_t i = 0; i < r; ++i) {
    auto atoms = r_parts.points(i).indices();
    std::size_t pos = 0;
    while (pos < atoms.size()) {
      std::size_t len = std::min(block, atoms.size() - pos);
      AtomSet piece(n);
      for (std::size_t j = pos; j < pos + len; ++j) piece.insert(atoms[j]);
      cells.emplace_back(std::move(piece));
      flags.push_back(len < block);
      pos += len;
    }
  }
  Partition out(base, std::move(cells), std::move(flags));
  if (!is_equitable(t, out, eps, strict_blocks) || !refines(out, r_parts) ||
      Rational(out.size()) > (Rational(2) / eps + 1) * r) {
    throw InvariantError("equitable construction violated its guarantees");
  }
  return out;
}

bool is_equitable(const MeasureTriple& t, const Partition& p, const Rational& eps, bool strict) {
  auto within = [&](const Rational& v) { return strict ? v < eps : v <= eps; };
  Rational exceptional = 0;
  std::optional<Rational> common;
  for (std::size_t i = 0; i < p.size(); ++i) {
    Rational m = measure(t, p.points(i));
    if (p.is_exceptional(i)) {
      exceptional += m;
      continue;
    }
    if (common && *common != m) return false;
    common = m;
  }
  return within(exceptional) && (!common || within(*common));
}

RateFunction equitable_rate(const Rational& eps, std::size_t k, EquitableVariant variant) {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("eps must lie strictly between 0 and 1");
  return {variant == EquitableVariant::count ? RateFunction::Formula::equitable_count
                                             : RateFunction::Formula::equitable_cube,
          k, eps};
}

Partition bound_by_equitable_family(const Partition& p, const Rational& eps, bool strict_blocks, RateFunction* rate) {
  const SemiRing& s = p.semiring();
  const std::size_t k = s.arity();
  using F = RateFunction::Formula;
  auto refine_coordinate = [&](const SemiRing& base, const std::vector<AtomSet>& gens) {
    Partition r_parts = generated_partition(base, gens);
    return equitable_refine(MeasureTriple::uniform(base.ground_size()), r_parts, eps, strict_blocks);
  };
  const bool interval = s.factor(0).kind == BaseKind::interval;
  Partition out = [&] {
    if (s.kind() != SemiRing::Kind::product) return refine_coordinate(s, coordinate_sets(p, 0));
    if (s.disjoint_or_equal()) return product_partition(refine_coordinate(base_of(s, 0), all_coordinate_sets(p)), k);
    std::vector<Partition> factors;
    for (std::size_t i = 0; i < k; ++i) {
      if (s.factor(i).kind == BaseKind::interval) {
        throw PreconditionError("equitable boxes are only supported over power-set factors");
      }
      factors.push_back(refine_coordinate(base_of(s, i), coordinate_sets(p, i)));
    }
    return product_partition(factors);
  }();
  if (rate) {
    if (s.kind() == SemiRing::Kind::product && !s.disjoint_or_equal()) {
      *rate = RateFunction(F::equitable_boxes, k, eps);
    } else {
      *rate = RateFunction(interval ? F::equitable_interval : F::equitable_count, k, eps);
    }
  }
  if (!refines(out, p)) throw InvariantError("equitable closure does not refine its input");
  return out;
}

}  // namespace regulens
