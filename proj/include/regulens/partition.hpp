#pragma once

// Partitions of a ground set into semi-ring cells, the index functional,
// bounding families with their rates, and the size recursion that bounds the
// final partition of a decomposition run.

#include "regulens/measure.hpp"
#include "regulens/rational.hpp"
#include "regulens/semiring.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace regulens {

/// A finite partition of the ground set into nonempty cells of one semi-ring,
/// stored in canonical (lexicographic) cell order. Cells may be flagged as
/// belonging to the exceptional class of an equitable partition.
class Partition {
 public:
  Partition(SemiRing semiring, std::vector<Cell> cells, std::vector<bool> exceptional = {});

  static Partition trivial(const SemiRing& s);
  static Partition singletons(const SemiRing& s);

  const SemiRing& semiring() const noexcept { return semiring_; }
  std::size_t size() const noexcept { return cells_.size(); }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const Cell& cell(std::size_t i) const { return cells_.at(i); }
  bool is_exceptional(std::size_t i) const { return exceptional_.at(i); }
  const std::vector<bool>& exceptional() const noexcept { return exceptional_; }
  bool has_exceptional() const noexcept;

  /// Point set of cell i in the ground set.
  const AtomSet& points(std::size_t i) const { return points_.at(i); }
  /// atom -> index of the cell containing it.
  std::vector<std::size_t> labels() const;

  bool operator==(const Partition& other) const {
    return semiring_ == other.semiring_ && cells_ == other.cells_ && exceptional_ == other.exceptional_;
  }

 private:
  SemiRing semiring_;
  std::vector<Cell> cells_;
  std::vector<bool> exceptional_;
  std::vector<AtomSet> points_;
};

/// True iff every cell of q is a union of cells of p.
bool refines(const Partition& p, const Partition& q);

/// All nonempty intersections of a cell of p with a cell of q.
Partition common_refinement(const Partition& p, const Partition& q);

/// p^k over the k-fold disjoint-or-equal product of p's base semi-ring.
Partition product_partition(const Partition& p, std::size_t k);

/// P_1 x ... x P_k over the box semi-ring of the factors' base semi-rings.
Partition product_partition(const std::vector<Partition>& factors);

/// Sum over cells of mu(P) d(A, P)^2.
Rational index(const MeasureTriple& t, const AtomSet& a, const Partition& p);

/// A saturating big-integer bound. Values above 2^max_bits are not
/// materialized; `saturated` then records only that the bound is astronomical.
struct BoundValue {
  bool saturated = false;
  BigInt value = 0;
  std::size_t max_bits = 0;

  bool admits(std::size_t size) const { return saturated || BigInt(size) <= value; }
  std::string str() const;
};

/// Closed-form increasing size rate of a bounding family.
class RateFunction {
 public:
  enum class Formula {
    identity,             // p
    product_power_set,    // 2^(p k^2)
    product_interval,     // (2pk + 1)^k
    boxes_power_set,      // 2^(p k)
    boxes_interval,       // (2p + 1)^k
    equitable_count,      // (ceil(2/eps) + 1)^k 2^(p k^2)
    equitable_cube,       // (ceil(1/eps) + 1)^k 2^(p k^2)
    equitable_interval,   // ((ceil(2/eps) + 1)(2pk + 1))^k
    equitable_boxes,      // (ceil(2/eps) + 1)^k 2^(p k)
  };

  RateFunction() = default;
  RateFunction(Formula f, std::size_t k, Rational eps = 0) : formula_(f), k_(k), eps_(std::move(eps)) {}

  static RateFunction identity() { return {Formula::identity, 1}; }

  Formula formula() const noexcept { return formula_; }
  std::size_t arity() const noexcept { return k_; }
  const Rational& eps() const noexcept { return eps_; }
  std::string describe() const;

  /// phi(p), or nullopt when the value would exceed 2^max_bits.
  std::optional<BigInt> evaluate(const BigInt& p, std::size_t max_bits) const;
  BigInt operator()(std::size_t p) const;

 private:
  Formula formula_ = Formula::identity;
  std::size_t k_ = 1;
  Rational eps_ = 0;
};

inline constexpr std::size_t kDefaultBoundBits = 1U << 16;

struct PsiBounds {
  /// psi(1,p) = p, psi(s+1,p) = (r+1) phi(psi(s,p)).
  BoundValue plain;
  /// psi'(1,p) = phi(p), psi'(s+1,p) = phi((r+1) psi'(s,p)); the size bound
  /// the decomposition loop actually maintains.
  BoundValue conservative;
};

PsiBounds psi(std::size_t s, std::size_t p, std::size_t r, const RateFunction& phi,
              std::size_t max_bits = kDefaultBoundBits);

/// Refines p into Phi^k, the family of partitions F^k with F a partition of the
/// base semi-ring: F is the atom family generated by every coordinate set of
/// p's cells. For box semi-rings each coordinate gets its own family.
/// Writes the rate of the family to `rate` when given.
Partition bound_by_product_family(const Partition& p, RateFunction* rate = nullptr);

/// The partition of a base universe generated by a family of subsets (atoms
/// of the Boolean algebra they generate), split into contiguous runs for
/// interval bases.
Partition generated_partition(const SemiRing& base, const std::vector<AtomSet>& generators);

/// Refines r_parts (a partition of [n], uniform t) into an eps-equitable
/// partition: each part is cut into blocks of a common size and a smaller
/// residual; residuals are flagged exceptional. With n < 2|R|/eps the result is
/// the singleton partition instead.
///
/// The block size is floor(eps n / |R|). With `strict_blocks` it is the largest
/// integer strictly below eps n / |R|, so that every block has measure < eps.
Partition equitable_refine(const MeasureTriple& t, const Partition& r_parts, const Rational& eps,
                           bool strict_blocks = false);

/// Every non-exceptional cell has the same measure <= eps (< eps when strict),
/// and the exceptional cells together have measure <= eps (< eps when strict).
bool is_equitable(const MeasureTriple& t, const Partition& p, const Rational& eps, bool strict = false);

enum class EquitableVariant { count, cube };

RateFunction equitable_rate(const Rational& eps, std::size_t k, EquitableVariant variant);

/// Refines p into the equitable family: the equitable refinement of p's
/// coordinate atom family, raised back to the product (per coordinate for
/// boxes). Coordinate universes must carry uniform measure.
Partition bound_by_equitable_family(const Partition& p, const Rational& eps, bool strict_blocks = false,
                                    RateFunction* rate = nullptr);

}  // namespace regulens
