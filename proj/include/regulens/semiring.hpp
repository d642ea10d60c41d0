#pragma once

// Boundedly built semi-rings of cells over a finite ground set.
//
// Three constructions are supported:
//   power_set(n)      every nonempty subset of [n]; differences are one set (r = 1)
//   intervals(n)      half-open atom ranges [lo, hi); differences are <= 2 ranges
//   product(base, k)  k-fold products whose factors are pairwise disjoint or equal
// plus boxes(f1..fk), the unconstrained product of bases over distinct
// universes used for k-partite systems.
//
// Product ground sets are encoded mixed-radix with coordinate 0 most
// significant: (c0, ..., c_{k-1}) -> ((c0 * n1 + c1) * n2 + ...) .

#include "regulens/measure.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace regulens {

enum class BaseKind { power_set, interval };

struct Factor {
  BaseKind kind;
  std::size_t size;
  bool operator==(const Factor&) const = default;
};

/// A member of a semi-ring: one coordinate set for base kinds, k for products.
class Cell {
 public:
  Cell() = default;
  explicit Cell(AtomSet base) { coords_.push_back(std::move(base)); }
  explicit Cell(std::vector<AtomSet> coords) : coords_(std::move(coords)) {}

  std::size_t arity() const noexcept { return coords_.size(); }
  const AtomSet& coord(std::size_t i) const { return coords_.at(i); }
  const std::vector<AtomSet>& coords() const noexcept { return coords_; }

  /// True if any coordinate is empty, i.e. the point set is empty.
  bool empty() const noexcept;

  bool operator==(const Cell&) const = default;
  std::strong_ordering operator<=>(const Cell& other) const;

 private:
  std::vector<AtomSet> coords_;
};

/// [lo, hi) of a contiguous nonempty atom set.
std::pair<std::size_t, std::size_t> interval_bounds(const AtomSet& s);
bool is_contiguous(const AtomSet& s);

class SemiRing {
 public:
  enum class Kind { power_set, interval, product };

  static SemiRing power_set(std::size_t n);
  static SemiRing intervals(std::size_t n);
  static SemiRing product(const SemiRing& base, std::size_t k);
  static SemiRing boxes(const std::vector<SemiRing>& bases);

  Kind kind() const noexcept { return kind_; }
  std::size_t arity() const noexcept { return factors_.size(); }
  const std::vector<Factor>& factors() const noexcept { return factors_; }
  const Factor& factor(std::size_t i) const { return factors_.at(i); }
  /// Product kind built by product(): coordinates share one universe and must
  /// be pairwise disjoint or equal. False for boxes() and base kinds.
  bool disjoint_or_equal() const noexcept { return constrained_; }
  std::size_t declared_r() const noexcept { return declared_r_; }
  std::size_t ground_size() const noexcept { return ground_size_; }
  std::string name() const;

  std::size_t encode(std::span<const std::size_t> coords) const;
  void decode(std::size_t atom, std::span<std::size_t> coords) const;

  /// The cell's point set in the ground set.
  AtomSet points(const Cell& c) const;

  /// A nonempty cell satisfying every structural constraint of this semi-ring.
  bool is_member(const Cell& c) const;
  void require_member(const Cell& c) const;

  /// The whole ground set as a single cell.
  Cell whole() const;

  bool operator==(const SemiRing&) const = default;

 private:
  SemiRing(Kind kind, std::vector<Factor> factors, bool constrained);

  Kind kind_ = Kind::power_set;
  std::vector<Factor> factors_;
  bool constrained_ = false;
  std::size_t declared_r_ = 1;
  std::size_t ground_size_ = 0;
};

/// a & b as a cell, or nullopt when the intersection is empty.
std::optional<Cell> cell_intersect(const SemiRing& s, const Cell& a, const Cell& b);

/// Pairwise disjoint cells of s whose union is a \ b, at most s.declared_r()
/// of them, in canonical order. Empty pieces are never returned.
std::vector<Cell> decompose_difference(const SemiRing& s, const Cell& a, const Cell& b);

struct AxiomCheck {
  std::size_t pair_index = 0;
  bool intersection_closed = false;
  bool pieces_disjoint = false;
  bool exact_cover = false;
  bool within_r = false;
  bool members = false;
  std::size_t pieces = 0;

  bool ok() const noexcept { return intersection_closed && pieces_disjoint && exact_cover && within_r && members; }
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  std::size_t max_pieces = 0;
  bool all_pass = true;
};

/// Checks closure under intersection and the difference decomposition
/// contract pointwise for each sample pair.
AxiomReport verify_semiring_axioms(const SemiRing& s, const MeasureTriple& universe,
                                   std::span<const std::pair<Cell, Cell>> samples);

}  // namespace regulens
