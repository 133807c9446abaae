#pragma once

#include <vector>

#include "griffith/geometry.hpp"
#include "griffith/laws.hpp"

namespace griffith {

struct GeometryConfig;

enum class NodeLabel { Interior, Dirichlet, Neumann };

// A bond is either an interior segment between two nodes or a Dirichlet
// anchor tying one node to its prescribed boundary value. Anchors are
// breakable (debonding from the grip) and carry crack area like interior
// bonds; Neumann boundary nodes never get anchors and their bonds never
// carry crack measure.
struct Bond {
  enum class Kind { Interior, Anchor };

  Kind kind = Kind::Interior;
  int a = -1;        // node id
  int b = -1;        // node id; -1 for anchors
  Point mid;         // midpoint (anchors: the node position)
  Vec dir;           // unit direction; anchors: outward boundary normal
  double cross = 1;  // (n-1)-dimensional cross-section / segment area
  double h = 1;      // axial length (anchors: 0, no bulk volume)

  double volume() const { return cross * h; }
};

struct Lattice {
  int dim = 1;
  double lx = 1.0, ly = 1.0;
  int nx = 1, ny = 1;  // cell counts
  double hx = 1.0, hy = 1.0;

  std::vector<Point> nodes;
  std::vector<NodeLabel> labels;
  std::vector<Bond> bonds;            // interior bonds first, then anchors
  int interior_bond_count = 0;        // bonds[0 .. count) are interior
  std::vector<int> anchor_of_node;    // bond id or -1
  std::vector<double> node_volume;    // dual-cell quadrature weights

  int node_count() const { return static_cast<int>(nodes.size()); }
  int bond_count() const { return static_cast<int>(bonds.size()); }
  bool is_anchor(int bond_id) const { return bond_id >= interior_bond_count; }
  double spacing() const { return dim == 1 ? hx : (hx > hy ? hx : hy); }
  double domain_measure() const { return dim == 1 ? lx : lx * ly; }
};

// Sorted set of broken bond ids. Value-like; all set operations are exact.
class CrackSet {
 public:
  CrackSet() = default;
  explicit CrackSet(std::vector<int> ids);

  static CrackSet empty() { return CrackSet{}; }

  bool contains(int bond_id) const;
  bool contains_all(const CrackSet& other) const;
  CrackSet unite(const CrackSet& other) const;
  CrackSet unite(int bond_id) const;
  CrackSet minus(const CrackSet& other) const;

  std::size_t size() const { return ids_.size(); }
  bool is_empty() const { return ids_.empty(); }
  const std::vector<int>& ids() const { return ids_; }

  friend bool operator==(const CrackSet& a, const CrackSet& b) {
    return a.ids_ == b.ids_;
  }
  // Tie-break order: fewer bonds first, then lexicographic on the sorted ids.
  friend bool tie_before(const CrackSet& a, const CrackSet& b);

 private:
  std::vector<int> ids_;  // sorted, unique
};

struct CrackSegment {
  int bond_id = -1;
  Point mid;
  Vec normal;
  double area = 0.0;
};

// One scalar (antiplane) displacement value per node.
using DisplacementField = std::vector<double>;

// ---------------------------------------------------------------------------

// Builds a 1-d chain (both endpoints Dirichlet) or a 2-d tensor grid with
// per-edge Dirichlet/Neumann labels. Refuses an empty Dirichlet set.
Lattice build_lattice(const GeometryConfig& geometry);

// One segment per broken bond: (midpoint, unit normal = bond direction,
// area = bond cross-section). Throws on unknown bond ids.
std::vector<CrackSegment> crack_segments(const CrackSet& crack,
                                         const Lattice& lat);

// Gamma1 subset of Gamma2, as exact id sets.
bool crack_contains(const CrackSet& gamma1, const CrackSet& gamma2);

// Assigns w(t, x) to every node whose anchor is intact; nodes with broken
// anchors are left untouched (debonded from the grip).
void apply_boundary(DisplacementField& u, double t, const CrackSet& crack,
                    const BoundaryProgram& program, const Lattice& lat);

// Evaluates the interior extension of x -> program.rate_value(x) at every
// node (the closed-form / linear-blend extension of the boundary velocity).
DisplacementField boundary_rate_extension(const BoundaryProgram& program,
                                          const Lattice& lat);

// Checks the admissibility constraint u = w(t, .) on unbroken anchors
// exactly; returns the violating node id or -1.
int admissibility_violation(const DisplacementField& u, double t,
                            const CrackSet& crack,
                            const BoundaryProgram& program, const Lattice& lat);

}  // namespace griffith
