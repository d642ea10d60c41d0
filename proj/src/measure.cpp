#include "regulens/measure.hpp"

#include "regulens/errors.hpp"

#include <bit>
#include <numeric>
#include <string>

namespace regulens {

namespace {

std::size_t word_count(std::size_t universe) { return (universe + 63) / 64; }

std::uint64_t tail_mask(std::size_t universe) {
  std::size_t rem = universe % 64;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

}  // namespace

AtomSet::AtomSet(std::size_t universe) : universe_(universe), words_(word_count(universe), 0) {}

AtomSet AtomSet::full(std::size_t universe) {
  AtomSet s(universe);
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  if (!s.words_.empty()) s.words_.back() &= tail_mask(universe);
  return s;
}

AtomSet AtomSet::range(std::size_t universe, std::size_t lo, std::size_t hi) {
  if (lo > hi || hi > universe) {
    throw StructuralError("range [" + std::to_string(lo) + "," + std::to_string(hi) +
                          ") outside universe of size " + std::to_string(universe));
  }
  AtomSet s(universe);
  for (std::size_t i = lo; i < hi; ++i) s.insert(i);
  return s;
}

AtomSet AtomSet::of(std::size_t universe, std::span<const std::size_t> atoms) {
  AtomSet s(universe);
  for (auto a : atoms) s.insert(a);
  return s;
}

AtomSet AtomSet::of(std::size_t universe, std::initializer_list<std::size_t> atoms) {
  return of(universe, std::span<const std::size_t>(atoms.begin(), atoms.size()));
}

std::size_t AtomSet::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool AtomSet::empty() const noexcept {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

void AtomSet::check_index(std::size_t atom) const {
  if (atom >= universe_) {
    throw StructuralError("atom index " + std::to_string(atom) + " out of range for ground set of size " +
                          std::to_string(universe_));
  }
}

bool AtomSet::contains(std::size_t atom) const {
  check_index(atom);
  return (words_[atom / 64] >> (atom % 64)) & 1U;
}

void AtomSet::insert(std::size_t atom) {
  check_index(atom);
  words_[atom / 64] |= std::uint64_t{1} << (atom % 64);
}

void AtomSet::erase(std::size_t atom) {
  check_index(atom);
  words_[atom / 64] &= ~(std::uint64_t{1} << (atom % 64));
}

void AtomSet::check_same_universe(const AtomSet& other) const {
  if (universe_ != other.universe_) {
    throw StructuralError("set operation across ground sets of size " + std::to_string(universe_) + " and " +
                          std::to_string(other.universe_));
  }
}

AtomSet& AtomSet::operator|=(const AtomSet& other) {
  check_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

AtomSet& AtomSet::operator&=(const AtomSet& other) {
  check_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

AtomSet& AtomSet::operator-=(const AtomSet& other) {
  check_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

AtomSet AtomSet::complement() const { return full(universe_) - *this; }

bool AtomSet::is_subset_of(const AtomSet& other) const {
  check_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

bool AtomSet::intersects(const AtomSet& other) const {
  check_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

std::size_t AtomSet::first() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return universe_;
}

std::size_t AtomSet::next(std::size_t atom) const noexcept {
  std::size_t from = atom + 1;
  if (from >= universe_) return universe_;
  std::size_t w = from / 64;
  std::uint64_t bits = words_[w] & (~std::uint64_t{0} << (from % 64));
  while (true) {
    if (bits != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
    if (++w >= words_.size()) return universe_;
    bits = words_[w];
  }
}

std::vector<std::size_t> AtomSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each([&](std::size_t a) { out.push_back(a); });
  return out;
}

std::strong_ordering AtomSet::operator<=>(const AtomSet& other) const {
  if (universe_ != other.universe_) return universe_ <=> other.universe_;
  // The first differing position of the two sorted lists is the least element d
  // of the symmetric difference; the set holding d is smaller unless the other
  // list has already ended.
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t diff = words_[w] ^ other.words_[w];
    if (diff == 0) continue;
    std::size_t d = w * 64 + static_cast<std::size_t>(std::countr_zero(diff));
    bool mine = contains(d);
    const AtomSet& without = mine ? other : *this;
    bool without_continues = without.next(d) < universe_;
    if (mine) return without_continues ? std::strong_ordering::less : std::strong_ordering::greater;
    return without_continues ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return std::strong_ordering::equal;
}

MeasureTriple::MeasureTriple(std::vector<Rational> weights, std::size_t max_atoms) : weights_(std::move(weights)) {
  if (weights_.empty()) throw StructuralError("measure triple needs at least one atom");
  if (weights_.size() > max_atoms) {
    throw CapacityError("ground set of " + std::to_string(weights_.size()) + " atoms exceeds the cap of " +
                        std::to_string(max_atoms));
  }
  Rational total = 0;
  BigInt lcm = 1;
  for (const auto& w : weights_) {
    if (w < 0) throw StructuralError("negative atom weight " + to_fraction_string(w));
    total += w;
    lcm = boost::multiprecision::lcm(lcm, denominator_of(w));
    if (lcm > kMaxWeightScale) {
      throw CapacityError("common denominator of atom weights exceeds 2^31");
    }
  }
  if (total != 1) throw StructuralError("atom weights sum to " + to_fraction_string(total) + ", not 1");
  scale_ = lcm.convert_to<std::int64_t>();
  scaled_.reserve(weights_.size());
  for (const auto& w : weights_) {
    scaled_.push_back((numerator_of(w) * (lcm / denominator_of(w))).convert_to<std::int64_t>());
  }
  uniform_ = true;
  for (const auto& w : weights_) {
    if (w != weights_.front()) {
      uniform_ = false;
      break;
    }
  }
}

MeasureTriple MeasureTriple::uniform(std::size_t size, std::size_t max_atoms) {
  if (size == 0) throw StructuralError("measure triple needs at least one atom");
  if (size > max_atoms) {
    throw CapacityError("ground set of " + std::to_string(size) + " atoms exceeds the cap of " +
                        std::to_string(max_atoms));
  }
  return MeasureTriple(std::vector<Rational>(size, Rational(1, static_cast<long>(size))), max_atoms);
}

std::int64_t scaled_measure(const MeasureTriple& t, const AtomSet& a) {
  if (a.universe() != t.size()) {
    throw StructuralError("set over " + std::to_string(a.universe()) + " atoms measured in a triple of size " +
                          std::to_string(t.size()));
  }
  auto w = t.scaled_weights();
  std::int64_t sum = 0;
  a.for_each([&](std::size_t i) { sum += w[i]; });
  return sum;
}

Rational measure(const MeasureTriple& t, const AtomSet& a) { return Rational(scaled_measure(t, a), t.scale()); }

Rational density(const MeasureTriple& t, const AtomSet& a, const AtomSet& v) {
  std::int64_t mv = scaled_measure(t, v);
  if (mv == 0) return 0;
  return Rational(scaled_measure(t, a & v), mv);
}

}  // namespace regulens
