#pragma once

// Concrete SR-systems and the decomposition drivers built on them: directed
// and undirected k-graphs on [n], k-partite k-graphs, and grid-discretized
// subsets of the unit cube with set or interval cells.

#include "regulens/measure.hpp"
#include "regulens/partition.hpp"
#include "regulens/regularity.hpp"
#include "regulens/semiring.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace regulens {

using Tuple = std::vector<std::size_t>;

/// Labelled directed k-graph with loops on [n]; edges are kept sorted and unique.
struct DirectedKGraph {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<Tuple> edges;

  void normalize();
};

struct KPartiteKGraph {
  std::vector<std::size_t> class_sizes;
  std::vector<Tuple> edges;

  std::size_t k() const noexcept { return class_sizes.size(); }
  void normalize();
};

/// Union of grid cubes of side 1/m in [0,1]^k.
struct GridSubset {
  std::size_t k = 0;
  std::size_t m = 0;
  std::vector<Tuple> cells;

  void normalize();
  /// The same set at resolution 2m.
  GridSubset refined() const;
};

enum class CubeCells { sets, intervals };

struct SrSystem {
  MeasureTriple triple;
  SemiRing semiring;
  AtomSet set;
};

SrSystem digraph_sr_system(const DirectedKGraph& g, std::size_t max_atoms = kDefaultMaxAtoms);
SrSystem kpartite_sr_system(const KPartiteKGraph& g, std::size_t max_atoms = kDefaultMaxAtoms);
SrSystem grid_sr_system(const GridSubset& g, CubeCells cells, std::size_t max_atoms = kDefaultMaxAtoms);

/// Number of edges (v1..vk) with v_i in V_i.
std::size_t edge_count(const DirectedKGraph& g, const std::vector<AtomSet>& parts);

/// Every edge has k distinct entries and all its permutations are edges.
bool is_permutation_closed(const DirectedKGraph& g);
/// Adds every permutation of every edge; rejects edges with repeated entries.
DirectedKGraph symmetrize(const DirectedKGraph& g);

DirectedKGraph parse_digraph(std::istream& in, const std::string& source);
KPartiteKGraph parse_kpartite(std::istream& in, const std::string& source);
GridSubset parse_grid(std::istream& in, const std::string& source);

/// Smallest admissible vertex count threshold: n must exceed ceil(1/eps).
std::size_t min_vertices(const Rational& eps);

/// One coordinate's equitable vertex partition {Q0, Q1..Qq}.
struct CoordinatePartition {
  std::vector<AtomSet> parts;  // Q1..Qq, canonical order
  AtomSet exceptional;         // Q0, possibly empty
  std::size_t universe = 0;
};

struct CellCount {
  std::size_t set_id = 0;
  std::size_t good = 0;
  std::size_t candidates = 0;
  Rational required;
  bool holds = false;
  /// Every checked index tuple and whether the set is eps-regular in its cell.
  std::vector<Tuple> cells;
  std::vector<bool> regular;
};

struct Condition {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct DriverReport {
  std::string theorem;
  Rational eps;
  /// Engine parameters tried, in order; the last one produced `engine`.
  std::vector<Rational> eps_schedule;
  DecompositionReport engine;
  std::vector<CoordinatePartition> coordinates;
  std::vector<CellCount> counts;
  std::vector<Condition> conditions;
  /// Measures of the input sets.
  std::vector<Rational> set_measures;

  bool holds() const;
};

/// Directed k-graphs on a shared [n]: an equitable vertex partition in which
/// every graph is eps-regular in at least (1-eps) q^k cells with distinct
/// indices.
DriverReport decompose_digraph(const std::vector<DirectedKGraph>& graphs, const Rational& eps, const EngineConfig& cfg);

/// Undirected k-graphs: the directed driver run at eps/k!, counting unordered
/// index sets all of whose ordered cells are regular against (1-eps) C(q,k).
DriverReport decompose_undirected(const std::vector<DirectedKGraph>& graphs, const Rational& eps,
                                  const EngineConfig& cfg);

/// k-partite k-graphs with equal class sizes: per-class equitable partitions
/// and a count of regular boxes against (1-eps) q_1 ... q_k.
DriverReport decompose_kpartite(const std::vector<KPartiteKGraph>& graphs, const Rational& eps,
                                const EngineConfig& cfg);

/// Grid subsets of the cube, with set cells or interval (brick) cells.
DriverReport decompose_cube(const std::vector<GridSubset>& sets, const Rational& eps, const EngineConfig& cfg,
                            CubeCells cells);

/// Plain decomposition run over any SR-system with an explicit bounding family.
DriverReport decompose_generic(const SrSystem& system, const std::vector<AtomSet>& sets, const EngineConfig& cfg,
                               const Bounding& bounding);

}  // namespace regulens
