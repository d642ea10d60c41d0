#pragma once

// Finite measure triples: a ground set of atoms 0..size-1, the full power set
// as the algebra, and exact rational atom weights summing to one.

#include "regulens/rational.hpp"

#include <boost/container/small_vector.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace regulens {

/// Default cap on the number of atoms of a ground set.
inline constexpr std::size_t kDefaultMaxAtoms = std::size_t{1} << 20;

/// Largest common denominator of atom weights. Keeping scaled measures below
/// 2^31 lets every comparison in the witness search run in 128-bit integers.
inline constexpr std::int64_t kMaxWeightScale = std::int64_t{1} << 31;

/// A measurable set: a subset of the atoms of a ground set of fixed size.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::size_t universe);

  static AtomSet full(std::size_t universe);
  static AtomSet range(std::size_t universe, std::size_t lo, std::size_t hi);
  static AtomSet of(std::size_t universe, std::span<const std::size_t> atoms);
  static AtomSet of(std::size_t universe, std::initializer_list<std::size_t> atoms);

  std::size_t universe() const noexcept { return universe_; }
  std::size_t count() const noexcept;
  bool empty() const noexcept;
  bool contains(std::size_t atom) const;

  void insert(std::size_t atom);
  void erase(std::size_t atom);

  AtomSet& operator|=(const AtomSet& other);
  AtomSet& operator&=(const AtomSet& other);
  AtomSet& operator-=(const AtomSet& other);
  friend AtomSet operator|(AtomSet a, const AtomSet& b) { return a |= b; }
  friend AtomSet operator&(AtomSet a, const AtomSet& b) { return a &= b; }
  friend AtomSet operator-(AtomSet a, const AtomSet& b) { return a -= b; }
  AtomSet complement() const;

  bool is_subset_of(const AtomSet& other) const;
  bool intersects(const AtomSet& other) const;

  /// Smallest atom, or universe() when empty.
  std::size_t first() const noexcept;
  /// Smallest atom strictly greater than `atom`, or universe() if none.
  std::size_t next(std::size_t atom) const noexcept;

  std::vector<std::size_t> indices() const;

  template <class F>
  void for_each(F&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        fn(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
        bits &= bits - 1;
      }
    }
  }

  bool operator==(const AtomSet& other) const = default;
  /// Lexicographic order of the sorted atom lists.
  std::strong_ordering operator<=>(const AtomSet& other) const;

 private:
  void check_same_universe(const AtomSet& other) const;
  void check_index(std::size_t atom) const;

  std::size_t universe_ = 0;
  boost::container::small_vector<std::uint64_t, 2> words_;
};

/// (X, 2^X, mu) over a finite ground set with exact rational atom weights.
class MeasureTriple {
 public:
  /// Weights must be nonnegative and sum to exactly one.
  explicit MeasureTriple(std::vector<Rational> weights, std::size_t max_atoms = kDefaultMaxAtoms);

  static MeasureTriple uniform(std::size_t size, std::size_t max_atoms = kDefaultMaxAtoms);

  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  bool is_uniform() const noexcept { return uniform_; }

  /// Atom weights times scale(), as integers.
  std::span<const std::int64_t> scaled_weights() const noexcept { return scaled_; }
  std::int64_t scale() const noexcept { return scale_; }

 private:
  std::vector<Rational> weights_;
  std::vector<std::int64_t> scaled_;
  std::int64_t scale_ = 1;
  bool uniform_ = false;
};

Rational measure(const MeasureTriple& t, const AtomSet& a);

/// measure(t, a) * t.scale().
std::int64_t scaled_measure(const MeasureTriple& t, const AtomSet& a);

/// mu(a & v) / mu(v), or 0 when mu(v) = 0.
Rational density(const MeasureTriple& t, const AtomSet& a, const AtomSet& v);

}  // namespace regulens
