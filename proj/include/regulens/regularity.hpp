#pragma once

// eps-regularity of measurable sets in semi-ring cells and partitions, the
// index-boosting refinement step, and the decomposition loop that drives every
// input set to eps-regularity inside a bounding family.

#include "regulens/measure.hpp"
#include "regulens/partition.hpp"
#include "regulens/rational.hpp"
#include "regulens/semiring.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace regulens {

enum class SearchMode { exact, sample };

std::string to_string(SearchMode m);

struct EngineConfig {
  Rational eps = Rational(1, 4);
  SearchMode mode = SearchMode::exact;
  std::size_t sample_count = 256;
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_iterations;
  /// Exact mode refuses cells whose candidate sub-cell count exceeds this.
  std::size_t coordinate_subset_cap = std::size_t{1} << 22;
  /// Worker threads for per-cell searches; 0 means hardware concurrency.
  unsigned threads = 1;

  void validate() const;
};

/// A sub-cell certifying that a set is not eps-regular in a cell.
struct Witness {
  Cell cell;
  Cell sub;
  Rational d_cell;
  Rational d_sub;
  Rational deviation;
};

/// Recomputes every witness condition with exact rationals: sub is a member of
/// s inside cell, mu(sub) > eps mu(cell), and |d(a,sub) - d(a,cell)| >= eps
/// with the recorded densities.
bool is_valid_witness(const MeasureTriple& t, const SemiRing& s, const AtomSet& a, const Witness& w,
                      const Rational& eps);

struct CellVerdict {
  bool regular = true;
  /// Exact mode: the verdict is a certificate. Sample mode: "regular" only
  /// means no witness was drawn.
  bool certified = true;
  std::optional<Witness> witness;
};

/// Decides whether `a` is eps-regular in the cell v. In exact mode every
/// candidate U in s with U inside v and mu(U) > eps mu(v) is examined and the
/// maximal-deviation witness (least sub-cell on ties) is returned. For product
/// cells, U ranges over U_1 x ... x U_k with U_i inside v_i and U_i = U_j
/// whenever v_i = v_j.
///
/// `stream` seeds sample mode together with cfg.seed.
CellVerdict check_regular_in_cell(const MeasureTriple& t, const SemiRing& s, const AtomSet& a, const Cell& v,
                                  const EngineConfig& cfg, std::uint64_t stream = 0);

/// Number of candidate sub-cells the exact search enumerates for v.
BigInt witness_space_size(const SemiRing& s, const Cell& v);

struct PartitionVerdict {
  bool regular = true;
  bool certified = true;
  Rational irregular_mass = 0;
  std::vector<std::size_t> irregular_cells;
  std::vector<CellVerdict> cells;
};

/// Regular iff the cells where `a` is not eps-regular carry total measure
/// < eps. Cells of measure zero are skipped and count as regular.
PartitionVerdict check_regular_in_partition(const MeasureTriple& t, const AtomSet& a, const Partition& p,
                                            const EngineConfig& cfg, std::uint64_t stream = 0);

struct RefineResult {
  Partition refined;
  std::vector<Witness> witnesses;
  Rational index_before;
  Rational index_after;
};

/// Splits every irregular cell P into its witness T and the pieces of P \ T.
/// Verifies that the result refines p, has at most (r+1)|p| cells, and gains
/// at least eps^4 in index for `a`; throws InvariantError otherwise.
RefineResult refine_step(const MeasureTriple& t, const AtomSet& a, const Partition& p, const EngineConfig& cfg,
                         const PartitionVerdict* known = nullptr);

enum class BoundingKind { product_family, equitable, none };

std::string to_string(BoundingKind b);

struct Bounding {
  BoundingKind kind = BoundingKind::product_family;
  /// Equitable family only: blocks of measure strictly below eps.
  bool strict_blocks = false;
};

struct IterationTrace {
  std::size_t step = 0;
  std::size_t offending_set = 0;
  Rational index_before;
  /// Index right after the refinement step, before re-closing into the family.
  Rational index_refined;
  Rational index_after;
  Rational irregular_mass;
  std::size_t refined_size = 0;
  std::size_t partition_size = 0;
};

struct SetResult {
  std::size_t id = 0;
  bool regular = false;
  bool certified = true;
  Rational irregular_mass;
  std::size_t regular_cell_count = 0;
  /// Verdict per cell of the final partition, canonical order.
  std::vector<bool> cell_regular;
  std::vector<Witness> witness_log;
};

struct DecompositionReport {
  EngineConfig config;
  Bounding bounding;
  std::string semiring;
  std::size_t declared_r = 0;
  RateFunction rate;
  std::size_t initial_size = 0;
  std::size_t iteration_limit = 0;
  Partition partition;
  std::vector<SetResult> per_set;
  std::vector<IterationTrace> trace;
  /// psi and psi' at the theoretical number of rounds.
  PsiBounds bounds;
  /// psi' at the number of rounds actually taken.
  BoundValue achieved_bound;
  bool refines_initial = false;

  bool all_regular() const;
  bool certified() const;
};

/// floor(eps^-4).
std::size_t rounds_per_set(const Rational& eps);

/// Applies the bounding family's closure to p.
Partition close_into_family(const Partition& p, const Bounding& bounding, const Rational& eps,
                            RateFunction* rate = nullptr);

/// Runs the energy-increment loop from p0 until every set is eps-regular.
DecompositionReport regularize(const MeasureTriple& t, std::span<const AtomSet> sets, const Partition& p0,
                               const EngineConfig& cfg, const Bounding& bounding);

struct DefectCsResult {
  enum class Part2 { holds, fails, hypothesis_not_met, not_requested };
  bool part1 = false;
  Part2 part2 = Part2::not_requested;
};

/// Sum c * Sum c x^2 >= (Sum c x)^2, and, when j_set is a proper nonempty
/// subset with Sum c * Sum_J c x >= Sum c x * Sum_J c + gamma, the strengthened
/// bound (Sum c x)^2 + gamma^2 / (Sum_J c * Sum_{not J} c). Empty j_set skips
/// the second part.
DefectCsResult defect_cs_check(std::span<const Rational> c, std::span<const Rational> x,
                               std::span<const std::size_t> j_set, const Rational& gamma);

}  // namespace regulens
