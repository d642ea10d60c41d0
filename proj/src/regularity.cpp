#include "regulens/regularity.hpp"

#include "regulens/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

namespace regulens {

std::string to_string(SearchMode m) { return m == SearchMode::exact ? "exact" : "sample"; }

std::string to_string(BoundingKind b) {
  switch (b) {
    case BoundingKind::product_family:
      return "product-family";
    case BoundingKind::equitable:
      return "equitable";
    case BoundingKind::none:
      return "none";
  }
  return "?";
}

void EngineConfig::validate() const {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("eps must lie strictly between 0 and 1");
  const BigInt limit = BigInt(1) << 62;
  if (numerator_of(eps) >= limit || denominator_of(eps) >= limit) {
    throw PreconditionError("eps numerator and denominator must stay below 2^62");
  }
  if (sample_count == 0) throw PreconditionError("sample_count must be at least 1");
  if (coordinate_subset_cap == 0) throw PreconditionError("coordinate_subset_cap must be positive");
}

namespace {

using i128 = __int128;

struct EpsParts {
  std::int64_t num;
  std::int64_t den;
};

EpsParts eps_parts(const Rational& eps) {
  return {numerator_of(eps).convert_to<std::int64_t>(), denominator_of(eps).convert_to<std::int64_t>()};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t sub_stream(std::uint64_t stream, std::uint64_t index) { return splitmix64(stream ^ splitmix64(index + 1)); }

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

// Coordinates of a cell that must receive the same sub-cell factor.
struct Group {
  std::vector<std::size_t> coords;
  std::vector<std::size_t> atoms;  // sorted atoms of the shared factor
  BaseKind kind = BaseKind::power_set;
  std::size_t universe = 0;
};

std::vector<Group> group_coordinates(const SemiRing& s, const Cell& v) {
  std::vector<Group> groups;
  for (std::size_t i = 0; i < v.arity(); ++i) {
    bool placed = false;
    if (s.disjoint_or_equal()) {
      for (auto& g : groups) {
        if (v.coord(g.coords.front()) == v.coord(i)) {
          g.coords.push_back(i);
          placed = true;
          break;
        }
      }
    }
    if (!placed) {
      Group g;
      g.coords.push_back(i);
      g.atoms = v.coord(i).indices();
      g.kind = s.factor(i).kind;
      g.universe = s.factor(i).size;
      groups.push_back(std::move(g));
    }
  }
  return groups;
}

BigInt candidate_count(const Group& g) {
  const BigInt len = g.atoms.size();
  if (g.kind == BaseKind::interval) return len * (len + 1) / 2;
  return (BigInt(1) << static_cast<unsigned>(g.atoms.size())) - 1;
}

// Dense weight tensors over the cell, axes ordered group by group, and the
// contraction of the leading group against a chosen member list.
class CellTensor {
 public:
  CellTensor(const MeasureTriple& t, const SemiRing& s, const AtomSet& a, std::vector<Group> groups)
      : groups_(std::move(groups)) {
    std::vector<std::size_t> dims;
    for (const auto& g : groups_) {
      for (std::size_t c = 0; c < g.coords.size(); ++c) dims.push_back(g.atoms.size());
    }
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    weight_.assign(total, 0);
    hits_.assign(total, 0);
    auto w = t.scaled_weights();
    std::vector<std::size_t> local(dims.size(), 0);
    std::vector<std::size_t> coord(s.arity(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t axis = 0;
      for (const auto& g : groups_) {
        for (std::size_t c : g.coords) coord[c] = g.atoms[local[axis++]];
      }
      std::size_t atom = s.encode(coord);
      weight_[flat] = w[atom];
      hits_[flat] = a.contains(atom) ? w[atom] : 0;
      for (std::size_t d = dims.size(); d-- > 0;) {
        if (++local[d] < dims[d]) break;
        local[d] = 0;
      }
    }
  }

  const std::vector<Group>& groups() const noexcept { return groups_; }
  const std::vector<std::int64_t>& weight() const noexcept { return weight_; }
  const std::vector<std::int64_t>& hits() const noexcept { return hits_; }

  // Sums the leading lead_axes axes (each of dimension dim) over members^lead_axes.
  static void contract(const std::vector<std::int64_t>& in_w, const std::vector<std::int64_t>& in_a, std::size_t dim,
                       std::size_t lead_axes, const std::vector<std::size_t>& members, std::vector<std::int64_t>& out_w,
                       std::vector<std::int64_t>& out_a) {
    std::size_t lead_size = 1;
    for (std::size_t i = 0; i < lead_axes; ++i) lead_size *= dim;
    const std::size_t rest = in_w.size() / lead_size;
    out_w.assign(rest, 0);
    out_a.assign(rest, 0);
    std::vector<std::size_t> pos(lead_axes, 0);
    while (true) {
      std::size_t lead = 0;
      for (std::size_t i = 0; i < lead_axes; ++i) lead = lead * dim + members[pos[i]];
      const std::int64_t* wp = in_w.data() + lead * rest;
      const std::int64_t* ap = in_a.data() + lead * rest;
      for (std::size_t r = 0; r < rest; ++r) {
        out_w[r] += wp[r];
        out_a[r] += ap[r];
      }
      std::size_t i = lead_axes;
      while (i-- > 0) {
        if (++pos[i] < members.size()) break;
        pos[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }

 private:
  std::vector<Group> groups_;
  std::vector<std::int64_t> weight_;
  std::vector<std::int64_t> hits_;
};

Cell build_sub_cell(const SemiRing& s, const std::vector<Group>& groups,
                    const std::vector<std::vector<std::size_t>>& chosen) {
  std::vector<AtomSet> coords(s.arity());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    AtomSet set(groups[g].universe);
    for (auto local : chosen[g]) set.insert(groups[g].atoms[local]);
    for (auto c : groups[g].coords) coords[c] = set;
  }
  return Cell(std::move(coords));
}

// Running best witness for one cell.
class BestWitness {
 public:
  BestWitness(std::int64_t m_cell, std::int64_t a_cell, EpsParts eps) : m_cell_(m_cell), a_cell_(a_cell), eps_(eps) {}

  bool large_enough(std::int64_t m_sub) const {
    return static_cast<i128>(m_sub) * eps_.den > static_cast<i128>(eps_.num) * m_cell_;
  }

  // Returns true if (m_sub, a_sub) should replace or tie the current best;
  // `tie` is set when the deviation equals the current best.
  bool consider(std::int64_t m_sub, std::int64_t a_sub, bool& tie) const {
    tie = false;
    i128 dev = static_cast<i128>(a_sub) * m_cell_ - static_cast<i128>(a_cell_) * m_sub;
    if (dev < 0) dev = -dev;
    if (dev * eps_.den < static_cast<i128>(eps_.num) * m_sub * m_cell_) return false;
    if (!found_) return true;
    i128 lhs = dev * m_best_;
    i128 rhs = dev_best_ * m_sub;
    if (lhs < rhs) return false;
    tie = lhs == rhs;
    return true;
  }

  void accept(std::int64_t m_sub, std::int64_t a_sub, Cell sub) {
    i128 dev = static_cast<i128>(a_sub) * m_cell_ - static_cast<i128>(a_cell_) * m_sub;
    dev_best_ = dev < 0 ? -dev : dev;
    m_best_ = m_sub;
    a_best_ = a_sub;
    sub_ = std::move(sub);
    found_ = true;
  }

  bool found() const noexcept { return found_; }
  const Cell& sub() const noexcept { return sub_; }

  Witness make(const Cell& cell) const {
    Witness w;
    w.cell = cell;
    w.sub = sub_;
    w.d_cell = Rational(a_cell_, m_cell_);
    w.d_sub = Rational(a_best_, m_best_);
    w.deviation = abs(Rational(w.d_sub - w.d_cell));
    return w;
  }

 private:
  std::int64_t m_cell_;
  std::int64_t a_cell_;
  EpsParts eps_;
  bool found_ = false;
  i128 dev_best_ = 0;
  std::int64_t m_best_ = 1;
  std::int64_t a_best_ = 0;
  Cell sub_;
};

template <class Fn>
void for_each_candidate(const Group& g, std::vector<std::size_t>& members, Fn&& fn) {
  const std::size_t len = g.atoms.size();
  members.clear();
  if (g.kind == BaseKind::interval) {
    for (std::size_t lo = 0; lo < len; ++lo) {
      for (std::size_t hi = lo + 1; hi <= len; ++hi) {
        members.clear();
        for (std::size_t i = lo; i < hi; ++i) members.push_back(i);
        fn(members);
      }
    }
    return;
  }
  const std::uint64_t limit = len >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << len);
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    members.clear();
    for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
      members.push_back(static_cast<std::size_t>(__builtin_ctzll(bits)));
    }
    fn(members);
  }
}

class ExactSearch {
 public:
  ExactSearch(const SemiRing& s, const CellTensor& tensor, BestWitness& best)
      : s_(s), tensor_(tensor), best_(best), chosen_(tensor.groups().size()),
        level_w_(tensor.groups().size() + 1), level_a_(tensor.groups().size() + 1),
        members_(tensor.groups().size()) {}

  void run() {
    level_w_[0] = tensor_.weight();
    level_a_[0] = tensor_.hits();
    descend(0);
  }

 private:
  void descend(std::size_t g) {
    const auto& groups = tensor_.groups();
    if (g == groups.size()) {
      const std::int64_t m = level_w_[g][0];
      const std::int64_t a = level_a_[g][0];
      if (!best_.large_enough(m)) return;
      bool tie = false;
      if (!best_.consider(m, a, tie)) return;
      Cell sub = build_sub_cell(s_, groups, chosen_);
      if (tie && !(sub < best_.sub())) return;
      best_.accept(m, a, std::move(sub));
      return;
    }
    const Group& group = groups[g];
    for_each_candidate(group, members_[g], [&](const std::vector<std::size_t>& members) {
      CellTensor::contract(level_w_[g], level_a_[g], group.atoms.size(), group.coords.size(), members, level_w_[g + 1],
                           level_a_[g + 1]);
      std::int64_t reach = 0;
      for (auto w : level_w_[g + 1]) reach += w;
      // mu(U) can only shrink as later groups are fixed.
      if (!best_.large_enough(reach)) return;
      chosen_[g] = members;
      descend(g + 1);
    });
  }

  const SemiRing& s_;
  const CellTensor& tensor_;
  BestWitness& best_;
  std::vector<std::vector<std::size_t>> chosen_;
  std::vector<std::vector<std::int64_t>> level_w_;
  std::vector<std::vector<std::int64_t>> level_a_;
  std::vector<std::vector<std::size_t>> members_;
};

void sample_search(const SemiRing& s, const CellTensor& tensor, BestWitness& best, const EngineConfig& cfg,
                   std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  const auto& groups = tensor.groups();
  std::vector<std::vector<std::size_t>> chosen(groups.size());
  std::vector<std::int64_t> w_cur, a_cur, w_next, a_next;
  for (std::size_t draw = 0; draw < cfg.sample_count; ++draw) {
    bool empty = false;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const std::size_t len = groups[g].atoms.size();
      auto& members = chosen[g];
      members.clear();
      if (groups[g].kind == BaseKind::interval) {
        std::size_t lo = rng() % len;
        std::size_t hi = lo + 1 + rng() % (len - lo);
        for (std::size_t i = lo; i < hi; ++i) members.push_back(i);
      } else {
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < len; ++i) {
          if (i % 64 == 0) bits = rng();
          if (bits & 1U) members.push_back(i);
          bits >>= 1;
        }
      }
      if (members.empty()) empty = true;
    }
    if (empty) continue;
    w_cur = tensor.weight();
    a_cur = tensor.hits();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      CellTensor::contract(w_cur, a_cur, groups[g].atoms.size(), groups[g].coords.size(), chosen[g], w_next, a_next);
      std::swap(w_cur, w_next);
      std::swap(a_cur, a_next);
    }
    const std::int64_t m = w_cur[0];
    const std::int64_t a = a_cur[0];
    if (!best.large_enough(m)) continue;
    bool tie = false;
    if (!best.consider(m, a, tie)) continue;
    Cell sub = build_sub_cell(s, groups, chosen);
    if (tie && !(sub < best.sub())) continue;
    best.accept(m, a, std::move(sub));
  }
}

}  // namespace

BigInt witness_space_size(const SemiRing& s, const Cell& v) {
  BigInt total = 1;
  for (const auto& g : group_coordinates(s, v)) total *= candidate_count(g);
  return total;
}

bool is_valid_witness(const MeasureTriple& t, const SemiRing& s, const AtomSet& a, const Witness& w,
                      const Rational& eps) {
  if (!s.is_member(w.sub) || !s.is_member(w.cell)) return false;
  AtomSet cell = s.points(w.cell);
  AtomSet sub = s.points(w.sub);
  if (!sub.is_subset_of(cell)) return false;
  if (!(measure(t, sub) > eps * measure(t, cell))) return false;
  Rational d_cell = density(t, a, cell);
  Rational d_sub = density(t, a, sub);
  Rational dev = abs(Rational(d_sub - d_cell));
  return d_cell == w.d_cell && d_sub == w.d_sub && dev == w.deviation && dev >= eps;
}

CellVerdict check_regular_in_cell(const MeasureTriple& t, const SemiRing& s, const AtomSet& a, const Cell& v,
                                  const EngineConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  s.require_member(v);
  if (t.size() != s.ground_size() || a.universe() != t.size()) {
    throw StructuralError("set, cell and triple over different ground sets");
  }
  AtomSet pts = s.points(v);
  const std::int64_t m_cell = scaled_measure(t, pts);
  if (m_cell == 0) throw PreconditionError("eps-regularity is defined only for cells of positive measure");
  const std::int64_t a_cell = scaled_measure(t, a & pts);

  CellVerdict verdict;
  // Constant density on v: every sub-cell has the same density.
  if (a_cell == 0 || a_cell == m_cell) return verdict;

  auto groups = group_coordinates(s, v);
  if (cfg.mode == SearchMode::exact) {
    BigInt space = 1;
    for (const auto& g : groups) space *= candidate_count(g);
    if (space > BigInt(cfg.coordinate_subset_cap)) {
      throw CapacityError("exact witness search over " + space.str() + " candidate sub-cells exceeds the cap of " +
                          std::to_string(cfg.coordinate_subset_cap) + "; use sample mode");
    }
  }

  BestWitness best(m_cell, a_cell, eps_parts(cfg.eps));
  CellTensor tensor(t, s, a, std::move(groups));
  if (cfg.mode == SearchMode::exact) {
    ExactSearch(s, tensor, best).run();
  } else {
    sample_search(s, tensor, best, cfg, stream);
  }
  if (best.found()) {
    verdict.regular = false;
    verdict.certified = true;
    verdict.witness = best.make(v);
  } else {
    verdict.certified = cfg.mode == SearchMode::exact;
  }
  return verdict;
}

PartitionVerdict check_regular_in_partition(const MeasureTriple& t, const AtomSet& a, const Partition& p,
                                            const EngineConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  const SemiRing& s = p.semiring();
  PartitionVerdict out;
  out.cells.resize(p.size());
  std::vector<bool> skipped(p.size(), false);
  parallel_for(p.size(), cfg.threads, [&](std::size_t i) {
    if (scaled_measure(t, p.points(i)) == 0) {
      skipped[i] = true;
      return;
    }
    out.cells[i] = check_regular_in_cell(t, s, a, p.cell(i), cfg, sub_stream(stream, i));
  });
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (skipped[i]) continue;
    const auto& v = out.cells[i];
    out.certified = out.certified && v.certified;
    if (!v.regular) {
      out.irregular_cells.push_back(i);
      out.irregular_mass += measure(t, p.points(i));
    }
  }
  out.regular = out.irregular_mass < cfg.eps;
  return out;
}

RefineResult refine_step(const MeasureTriple& t, const AtomSet& a, const Partition& p, const EngineConfig& cfg,
                         const PartitionVerdict* known) {
  PartitionVerdict computed;
  if (!known) {
    computed = check_regular_in_partition(t, a, p, cfg);
    known = &computed;
  }
  if (known->regular) throw PreconditionError("refine_step needs a set that is not eps-regular in the partition");
  const SemiRing& s = p.semiring();

  std::vector<Cell> cells;
  std::vector<Witness> witnesses;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& v = known->cells.at(i);
    if (v.regular || !v.witness) {
      cells.push_back(p.cell(i));
      continue;
    }
    const Witness& w = *v.witness;
    if (!(w.cell == p.cell(i))) throw InvariantError("witness recorded for the wrong cell");
    cells.push_back(w.sub);
    for (auto& piece : decompose_difference(s, p.cell(i), w.sub)) cells.push_back(std::move(piece));
    witnesses.push_back(w);
  }
  Partition q(s, std::move(cells));

  RefineResult out{q, std::move(witnesses), index(t, a, p), index(t, a, q)};
  if (!refines(q, p)) throw InvariantError("refinement step output does not refine its input");
  if (q.size() > (s.declared_r() + 1) * p.size()) throw InvariantError("refinement step grew beyond (r+1)|P|");
  if (out.index_after < out.index_before + pow(cfg.eps, 4)) {
    throw InvariantError("refinement step gained less than eps^4 in index: " + to_fraction_string(out.index_before) +
                         " -> " + to_fraction_string(out.index_after));
  }
  return out;
}

std::size_t rounds_per_set(const Rational& eps) {
  return floor_of(Rational(1) / pow(eps, 4)).convert_to<std::size_t>();
}

Partition close_into_family(const Partition& p, const Bounding& bounding, const Rational& eps, RateFunction* rate) {
  switch (bounding.kind) {
    case BoundingKind::product_family:
      return bound_by_product_family(p, rate);
    case BoundingKind::equitable:
      return bound_by_equitable_family(p, eps, bounding.strict_blocks, rate);
    case BoundingKind::none:
      if (rate) *rate = RateFunction::identity();
      return p;
  }
  return p;
}

bool DecompositionReport::all_regular() const {
  return std::all_of(per_set.begin(), per_set.end(), [](const SetResult& r) { return r.regular; });
}

bool DecompositionReport::certified() const {
  return std::all_of(per_set.begin(), per_set.end(), [](const SetResult& r) { return r.certified; });
}

DecompositionReport regularize(const MeasureTriple& t, std::span<const AtomSet> sets, const Partition& p0,
                               const EngineConfig& cfg, const Bounding& bounding) {
  cfg.validate();
  const SemiRing& s = p0.semiring();
  if (t.size() != s.ground_size()) throw StructuralError("initial partition and triple over different ground sets");
  for (const auto& a : sets) {
    if (a.universe() != t.size()) throw StructuralError("input set over a different ground set");
  }
  if (bounding.kind == BoundingKind::equitable && !t.is_uniform()) {
    throw PreconditionError("the equitable family needs the uniform measure");
  }

  const std::size_t r = s.declared_r();
  const std::size_t limit = sets.size() * rounds_per_set(cfg.eps);
  const Rational gain = pow(cfg.eps, 4);

  RateFunction rate;
  Partition current = close_into_family(p0, bounding, cfg.eps, &rate);
  if (auto cap = rate.evaluate(BigInt(p0.size()), kDefaultBoundBits); cap && BigInt(current.size()) > *cap) {
    throw InvariantError("initial closure exceeds the family rate");
  }

  std::vector<SetResult> per_set(sets.size());
  for (std::size_t j = 0; j < sets.size(); ++j) per_set[j].id = j;
  std::vector<IterationTrace> trace;
  std::vector<PartitionVerdict> verdicts(sets.size());

  while (true) {
    std::optional<std::size_t> offending;
    for (std::size_t j = 0; j < sets.size(); ++j) {
      const std::uint64_t stream = splitmix64((static_cast<std::uint64_t>(trace.size()) << 20) ^ j);
      verdicts[j] = check_regular_in_partition(t, sets[j], current, cfg, stream);
      if (!verdicts[j].regular) {
        offending = j;
        break;
      }
    }
    if (!offending) break;
    if (trace.size() >= limit) {
      throw InvariantError("more than |L| floor(eps^-4) = " + std::to_string(limit) +
                           " refinement rounds; a witness or the arithmetic is wrong");
    }
    if (cfg.max_iterations && trace.size() >= *cfg.max_iterations) {
      throw CapacityError("iteration cap of " + std::to_string(*cfg.max_iterations) + " reached");
    }
    const std::size_t j = *offending;
    const AtomSet& a = sets[j];
    RefineResult step = refine_step(t, a, current, cfg, &verdicts[j]);
    Partition next = close_into_family(step.refined, bounding, cfg.eps);

    IterationTrace rec;
    rec.step = trace.size();
    rec.offending_set = j;
    rec.index_before = step.index_before;
    rec.index_refined = step.index_after;
    rec.index_after = index(t, a, next);
    rec.irregular_mass = verdicts[j].irregular_mass;
    rec.refined_size = step.refined.size();
    rec.partition_size = next.size();
    if (rec.index_after < rec.index_before + gain || rec.index_after > measure(t, a)) {
      throw InvariantError("index sequence left [previous + eps^4, mu(A)]");
    }
    auto cap = rate.evaluate(BigInt(r + 1) * current.size(), kDefaultBoundBits);
    if (cap && BigInt(next.size()) > *cap) throw InvariantError("closure exceeds phi((r+1)|P_i|)");
    if (!refines(next, current)) throw InvariantError("partition sequence is not a refinement chain");

    for (auto& w : step.witnesses) per_set[j].witness_log.push_back(std::move(w));
    trace.push_back(std::move(rec));
    current = std::move(next);
  }

  for (std::size_t j = 0; j < sets.size(); ++j) {
    auto& res = per_set[j];
    const auto& v = verdicts[j];
    res.regular = v.regular;
    res.certified = v.certified;
    res.irregular_mass = v.irregular_mass;
    res.cell_regular.assign(current.size(), true);
    for (auto i : v.irregular_cells) res.cell_regular[i] = false;
    res.regular_cell_count = current.size() - v.irregular_cells.size();
  }

  PsiBounds bounds;
  bounds.plain = psi(std::max<std::size_t>(limit, 1), p0.size(), r, rate).plain;
  bounds.conservative = psi(limit + 1, p0.size(), r, rate).conservative;
  BoundValue achieved = psi(trace.size() + 1, p0.size(), r, rate).conservative;
  if (!achieved.admits(current.size()) || !bounds.conservative.admits(current.size())) {
    throw InvariantError("final partition exceeds the psi' size bound");
  }
  const bool refines_initial = refines(current, p0);
  if (!refines_initial) throw InvariantError("final partition does not refine the initial partition");

  return DecompositionReport{
      .config = cfg,
      .bounding = bounding,
      .semiring = s.name(),
      .declared_r = r,
      .rate = rate,
      .initial_size = p0.size(),
      .iteration_limit = limit,
      .partition = std::move(current),
      .per_set = std::move(per_set),
      .trace = std::move(trace),
      .bounds = std::move(bounds),
      .achieved_bound = std::move(achieved),
      .refines_initial = refines_initial,
  };
}

DefectCsResult defect_cs_check(std::span<const Rational> c, std::span<const Rational> x,
                               std::span<const std::size_t> j_set, const Rational& gamma) {
  if (c.size() != x.size() || c.empty()) throw PreconditionError("c and x must be nonempty and of equal length");
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] > 0) || !(x[i] > 0)) throw PreconditionError("c and x must be positive");
  }
  Rational sc = 0, scx = 0, scx2 = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    sc += c[i];
    scx += c[i] * x[i];
    scx2 += c[i] * x[i] * x[i];
  }
  DefectCsResult out;
  out.part1 = sc * scx2 >= scx * scx;
  if (j_set.empty()) return out;

  std::vector<bool> in_j(c.size(), false);
  for (auto j : j_set) {
    if (j >= c.size()) throw PreconditionError("index set out of range");
    in_j[j] = true;
  }
  Rational jc = 0, jcx = 0;
  std::size_t members = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!in_j[i]) continue;
    ++members;
    jc += c[i];
    jcx += c[i] * x[i];
  }
  if (members == c.size() || !(gamma > 0) || !(sc * jcx >= scx * jc + gamma)) {
    out.part2 = DefectCsResult::Part2::hypothesis_not_met;
    return out;
  }
  const Rational rest = sc - jc;
  out.part2 = sc * scx2 >= scx * scx + gamma * gamma / (jc * rest) ? DefectCsResult::Part2::holds
                                                                    : DefectCsResult::Part2::fails;
  return out;
}

}  // namespace regulens
