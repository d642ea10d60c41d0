#include "regulens/semiring.hpp"

#include "regulens/errors.hpp"

#include <algorithm>
#include <limits>

namespace regulens {

bool Cell::empty() const noexcept {
  if (coords_.empty()) return true;
  return std::any_of(coords_.begin(), coords_.end(), [](const AtomSet& s) { return s.empty(); });
}

std::strong_ordering Cell::operator<=>(const Cell& other) const {
  std::size_t n = std::min(coords_.size(), other.coords_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = coords_[i] <=> other.coords_[i]; c != 0) return c;
  }
  return coords_.size() <=> other.coords_.size();
}

bool is_contiguous(const AtomSet& s) {
  if (s.empty()) return false;
  std::size_t lo = s.first();
  return s.count() == 1 || AtomSet::range(s.universe(), lo, lo + s.count()) == s;
}

std::pair<std::size_t, std::size_t> interval_bounds(const AtomSet& s) {
  if (!is_contiguous(s)) throw StructuralError("atom set is not a nonempty interval");
  return {s.first(), s.first() + s.count()};
}

namespace {

// Pieces per coordinate group in the atom-box construction when the group
// holds `distinct` distinct subtrahend sets.
std::size_t family_bound(BaseKind kind, std::size_t distinct) {
  return kind == BaseKind::power_set ? distinct + 1 : 2 * distinct + 1;
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

std::string base_name(BaseKind k) { return k == BaseKind::power_set ? "power-set" : "interval"; }

// Maximal contiguous runs of s.
std::vector<AtomSet> contiguous_runs(const AtomSet& s) {
  std::vector<AtomSet> runs;
  std::size_t n = s.universe();
  std::size_t i = s.first();
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && s.contains(j + 1)) ++j;
    runs.push_back(AtomSet::range(n, i, j + 1));
    i = s.next(j);
  }
  return runs;
}

}  // namespace

SemiRing::SemiRing(Kind kind, std::vector<Factor> factors, bool constrained)
    : kind_(kind), factors_(std::move(factors)), constrained_(constrained) {
  ground_size_ = 1;
  for (const auto& f : factors_) {
    if (f.size == 0) throw StructuralError("semi-ring over an empty universe");
    if (ground_size_ > std::numeric_limits<std::size_t>::max() / f.size) {
      throw CapacityError("product ground set size overflows");
    }
    ground_size_ *= f.size;
  }
  switch (kind_) {
    case Kind::power_set:
      declared_r_ = 1;
      break;
    case Kind::interval:
      declared_r_ = 2;
      break;
    case Kind::product:
      if (constrained_) {
        declared_r_ = ipow(family_bound(factors_.front().kind, arity()), arity()) - 1;
      } else {
        std::size_t boxes = 1;
        for (const auto& f : factors_) boxes *= family_bound(f.kind, 1);
        declared_r_ = boxes - 1;
      }
      break;
  }
}

SemiRing SemiRing::power_set(std::size_t n) { return {Kind::power_set, {{BaseKind::power_set, n}}, false}; }

SemiRing SemiRing::intervals(std::size_t n) { return {Kind::interval, {{BaseKind::interval, n}}, false}; }

SemiRing SemiRing::product(const SemiRing& base, std::size_t k) {
  if (base.kind() == Kind::product) throw StructuralError("products of product semi-rings are not supported");
  if (k == 0) throw StructuralError("product arity must be positive");
  return {Kind::product, std::vector<Factor>(k, base.factor(0)), true};
}

SemiRing SemiRing::boxes(const std::vector<SemiRing>& bases) {
  if (bases.empty()) throw StructuralError("box semi-ring needs at least one factor");
  std::vector<Factor> f;
  for (const auto& b : bases) {
    if (b.kind() == Kind::product) throw StructuralError("box factors must be base semi-rings");
    f.push_back(b.factor(0));
  }
  return {Kind::product, std::move(f), false};
}

std::string SemiRing::name() const {
  switch (kind_) {
    case Kind::power_set:
      return "power-set";
    case Kind::interval:
      return "interval";
    case Kind::product:
      break;
  }
  if (constrained_) return "product<" + std::to_string(arity()) + ">(" + base_name(factors_.front().kind) + ")";
  std::string out = "boxes(";
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += ",";
    out += base_name(factors_[i].kind);
  }
  return out + ")";
}

std::size_t SemiRing::encode(std::span<const std::size_t> coords) const {
  if (coords.size() != arity()) throw StructuralError("coordinate tuple has wrong arity");
  std::size_t atom = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= factors_[i].size) throw StructuralError("coordinate out of range");
    atom = atom * factors_[i].size + coords[i];
  }
  return atom;
}

void SemiRing::decode(std::size_t atom, std::span<std::size_t> coords) const {
  if (coords.size() != arity() || atom >= ground_size_) throw StructuralError("atom out of range");
  for (std::size_t i = arity(); i-- > 0;) {
    coords[i] = atom % factors_[i].size;
    atom /= factors_[i].size;
  }
}

AtomSet SemiRing::points(const Cell& c) const {
  if (c.arity() != arity()) throw StructuralError("cell arity does not match semi-ring");
  for (std::size_t i = 0; i < arity(); ++i) {
    if (c.coord(i).universe() != factors_[i].size) throw StructuralError("cell coordinate over wrong universe");
  }
  if (arity() == 1) return c.coord(0);
  AtomSet out(ground_size_);
  if (c.empty()) return out;
  std::vector<std::vector<std::size_t>> lists;
  for (const auto& s : c.coords()) lists.push_back(s.indices());
  std::vector<std::size_t> pos(arity(), 0);
  while (true) {
    std::size_t atom = 0;
    for (std::size_t i = 0; i < arity(); ++i) atom = atom * factors_[i].size + lists[i][pos[i]];
    out.insert(atom);
    std::size_t i = arity();
    while (i-- > 0) {
      if (++pos[i] < lists[i].size()) break;
      pos[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

bool SemiRing::is_member(const Cell& c) const {
  if (c.arity() != arity()) return false;
  for (std::size_t i = 0; i < arity(); ++i) {
    const auto& s = c.coord(i);
    if (s.universe() != factors_[i].size || s.empty()) return false;
    if (factors_[i].kind == BaseKind::interval && !is_contiguous(s)) return false;
  }
  if (constrained_) {
    for (std::size_t i = 0; i < arity(); ++i) {
      for (std::size_t j = i + 1; j < arity(); ++j) {
        if (c.coord(i) != c.coord(j) && c.coord(i).intersects(c.coord(j))) return false;
      }
    }
  }
  return true;
}

void SemiRing::require_member(const Cell& c) const {
  if (!is_member(c)) throw StructuralError("cell is not a member of the " + name() + " semi-ring");
}

Cell SemiRing::whole() const {
  std::vector<AtomSet> coords;
  for (const auto& f : factors_) coords.push_back(AtomSet::full(f.size));
  return Cell(std::move(coords));
}

std::optional<Cell> cell_intersect(const SemiRing& s, const Cell& a, const Cell& b) {
  s.require_member(a);
  s.require_member(b);
  std::vector<AtomSet> coords;
  coords.reserve(a.arity());
  for (std::size_t i = 0; i < a.arity(); ++i) {
    coords.push_back(a.coord(i) & b.coord(i));
    if (coords.back().empty()) return std::nullopt;
  }
  return Cell(std::move(coords));
}

namespace {

struct GroupFamily {
  std::vector<AtomSet> pieces;
};

std::vector<Cell> decompose_base(BaseKind kind, const AtomSet& a, const AtomSet& b) {
  std::vector<Cell> out;
  AtomSet diff = a - b;
  if (diff.empty()) return out;
  if (kind == BaseKind::power_set) {
    out.emplace_back(std::move(diff));
  } else {
    for (auto& run : contiguous_runs(diff)) out.emplace_back(std::move(run));
  }
  return out;
}

}  // namespace

std::vector<Cell> decompose_difference(const SemiRing& s, const Cell& a, const Cell& b) {
  s.require_member(a);
  s.require_member(b);
  if (s.kind() != SemiRing::Kind::product) {
    auto out = decompose_base(s.factor(0).kind, a.coord(0), b.coord(0));
    std::sort(out.begin(), out.end());
    return out;
  }

  const std::size_t k = s.arity();
  if (!cell_intersect(s, a, b)) return {a};

  // Group coordinates that carry the same factor set of a. Under the
  // disjoint-or-equal constraint distinct groups are disjoint; for boxes each
  // coordinate lives in its own universe and is its own group.
  std::vector<std::size_t> group_of(k);
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t g = groups.size();
    if (s.disjoint_or_equal()) {
      for (std::size_t h = 0; h < groups.size(); ++h) {
        if (a.coord(groups[h].front()) == a.coord(i)) {
          g = h;
          break;
        }
      }
    }
    if (g == groups.size()) groups.emplace_back();
    groups[g].push_back(i);
    group_of[i] = g;
  }

  // Common atom family per group: a's factor cut by every subtrahend factor of
  // the group, then split into base cells.
  std::vector<GroupFamily> families(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::size_t lead = groups[g].front();
    std::vector<AtomSet> pieces{a.coord(lead)};
    for (std::size_t i : groups[g]) {
      std::vector<AtomSet> next;
      for (const auto& p : pieces) {
        AtomSet in = p & b.coord(i);
        AtomSet out = p - b.coord(i);
        if (!in.empty()) next.push_back(std::move(in));
        if (!out.empty()) next.push_back(std::move(out));
      }
      pieces = std::move(next);
    }
    if (s.factor(lead).kind == BaseKind::interval) {
      std::vector<AtomSet> runs;
      for (const auto& p : pieces) {
        for (auto& r : contiguous_runs(p)) runs.push_back(std::move(r));
      }
      pieces = std::move(runs);
    }
    std::sort(pieces.begin(), pieces.end());
    families[g].pieces = std::move(pieces);
  }

  std::vector<Cell> out;
  std::vector<std::size_t> choice(k, 0);
  while (true) {
    bool inside_b = true;
    std::vector<AtomSet> coords;
    coords.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& piece = families[group_of[i]].pieces[choice[i]];
      if (!piece.is_subset_of(b.coord(i))) inside_b = false;
      coords.push_back(piece);
    }
    if (!inside_b) out.emplace_back(std::move(coords));
    std::size_t i = k;
    while (i-- > 0) {
      if (++choice[i] < families[group_of[i]].pieces.size()) break;
      choice[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  std::sort(out.begin(), out.end());
  if (out.size() > s.declared_r()) {
    throw InvariantError("difference decomposition produced " + std::to_string(out.size()) +
                         " pieces, above the declared bound " + std::to_string(s.declared_r()));
  }
  return out;
}

AxiomReport verify_semiring_axioms(const SemiRing& s, const MeasureTriple& universe,
                                   std::span<const std::pair<Cell, Cell>> samples) {
  if (universe.size() != s.ground_size()) throw StructuralError("universe does not match the semi-ring ground set");
  AxiomReport report;
  for (std::size_t idx = 0; idx < samples.size(); ++idx) {
    const auto& [a, b] = samples[idx];
    AxiomCheck check;
    check.pair_index = idx;
    AtomSet pa = s.points(a);
    AtomSet pb = s.points(b);

    auto meet = cell_intersect(s, a, b);
    AtomSet expected_meet = pa & pb;
    check.intersection_closed =
        meet ? (s.is_member(*meet) && s.points(*meet) == expected_meet) : expected_meet.empty();

    auto pieces = decompose_difference(s, a, b);
    check.pieces = pieces.size();
    check.within_r = pieces.size() <= s.declared_r();
    check.members = std::all_of(pieces.begin(), pieces.end(), [&](const Cell& c) { return s.is_member(c); });
    AtomSet covered(s.ground_size());
    check.pieces_disjoint = true;
    for (const auto& p : pieces) {
      AtomSet pp = s.points(p);
      if (covered.intersects(pp)) check.pieces_disjoint = false;
      covered |= pp;
    }
    check.exact_cover = covered == (pa - pb);

    report.max_pieces = std::max(report.max_pieces, check.pieces);
    report.all_pass = report.all_pass && check.ok();
    report.checks.push_back(check);
  }
  return report;
}

}  // namespace regulens
