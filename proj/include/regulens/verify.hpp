#pragma once

// Seeded property suites that exercise the inequalities the decomposition
// relies on, against randomized exact-arithmetic instances.
//
//   semiring   intersection closure and the difference decomposition
//   mxind      0 <= index <= mu(A) <= 1
//   defect-cs  both parts of the defect Cauchy-Schwarz inequality
//   clem2      refining never lowers the index
//   clem3      a deviating subset T lifts the index on S by eps^2 mu(T)
//   clem4      refine_step: refinement, size factor r+1, gain eps^4
//   leref      the equitable block construction and its size bounds

#include "regulens/report.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace regulens {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  /// Instances that did not meet a case's hypothesis and were drawn again.
  std::size_t redrawn = 0;
  /// Fully serialized first failing instance, or null.
  Json counterexample;

  bool ok() const noexcept { return failed == 0 && passed == cases; }
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteResult run_suite(const std::string& name, std::size_t cases, std::uint64_t seed);

/// Empirical check of the k-th root claim for directed k-graphs: among cells
/// in which a graph is eps^(1/k)-regular, how often some U with
/// |U_i| > eps |V_i| deviates in density by at least eps. Reports only.
struct ClaimReport {
  std::size_t instances = 0;
  std::size_t root_regular = 0;
  std::size_t violations = 0;
  Json first_violation;
};

ClaimReport run_claim_k_root(std::size_t cases, std::uint64_t seed);

Json suite_json(const SuiteResult& r);
Json claim_json(const ClaimReport& r);

}  // namespace regulens
