#include "griffith/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "griffith/config.hpp"

namespace griffith {

// ===========================================================================
// CrackSet
// ===========================================================================

CrackSet::CrackSet(std::vector<int> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool CrackSet::contains(int bond_id) const {
  return std::binary_search(ids_.begin(), ids_.end(), bond_id);
}

bool CrackSet::contains_all(const CrackSet& other) const {
  return std::includes(ids_.begin(), ids_.end(), other.ids_.begin(),
                       other.ids_.end());
}

CrackSet CrackSet::unite(const CrackSet& other) const {
  std::vector<int> out;
  out.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(),
                 other.ids_.end(), std::back_inserter(out));
  CrackSet r;
  r.ids_ = std::move(out);
  return r;
}

CrackSet CrackSet::unite(int bond_id) const {
  if (contains(bond_id)) return *this;
  CrackSet r = *this;
  r.ids_.insert(std::upper_bound(r.ids_.begin(), r.ids_.end(), bond_id),
                bond_id);
  return r;
}

CrackSet CrackSet::minus(const CrackSet& other) const {
  std::vector<int> out;
  std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(),
                      other.ids_.end(), std::back_inserter(out));
  CrackSet r;
  r.ids_ = std::move(out);
  return r;
}

bool tie_before(const CrackSet& a, const CrackSet& b) {
  if (a.ids_.size() != b.ids_.size()) return a.ids_.size() < b.ids_.size();
  return std::lexicographical_compare(a.ids_.begin(), a.ids_.end(),
                                      b.ids_.begin(), b.ids_.end());
}

// ===========================================================================
// build_lattice
// ===========================================================================

Lattice build_lattice(const GeometryConfig& g) {
  if (g.dimension != 1 && g.dimension != 2)
    throw ConfigError("geometry.dimension must be 1 or 2");
  if (g.cells_x < 1 || (g.dimension == 2 && g.cells_y < 1))
    throw ConfigError("geometry cell counts must be >= 1");

  Lattice lat;
  lat.dim = g.dimension;
  lat.lx = g.length_x;
  lat.nx = g.cells_x;
  lat.hx = g.length_x / g.cells_x;

  if (g.dimension == 1) {
    const int n = g.cells_x + 1;
    lat.ly = 1.0;
    lat.ny = 1;
    lat.hy = 1.0;
    lat.nodes.resize(n);
    lat.labels.assign(n, NodeLabel::Interior);
    for (int i = 0; i < n; ++i) lat.nodes[i] = {i * lat.hx, 0.0};
    lat.labels.front() = NodeLabel::Dirichlet;
    lat.labels.back() = NodeLabel::Dirichlet;

    for (int i = 0; i < g.cells_x; ++i) {
      Bond b;
      b.kind = Bond::Kind::Interior;
      b.a = i;
      b.b = i + 1;
      b.mid = {0.5 * (lat.nodes[i].x + lat.nodes[i + 1].x), 0.0};
      b.dir = {1.0, 0.0};
      b.cross = 1.0;  // 0-dimensional cut carries counting measure 1
      b.h = lat.hx;
      lat.bonds.push_back(b);
    }
    lat.interior_bond_count = static_cast<int>(lat.bonds.size());

    lat.anchor_of_node.assign(n, -1);
    for (int i : {0, n - 1}) {
      Bond a;
      a.kind = Bond::Kind::Anchor;
      a.a = i;
      a.mid = lat.nodes[i];
      a.dir = (i == 0) ? Vec{-1.0, 0.0} : Vec{1.0, 0.0};
      a.cross = 1.0;
      a.h = 0.0;
      lat.anchor_of_node[i] = static_cast<int>(lat.bonds.size());
      lat.bonds.push_back(a);
    }

    lat.node_volume.assign(n, lat.hx);
    lat.node_volume.front() = 0.5 * lat.hx;
    lat.node_volume.back() = 0.5 * lat.hx;
    return lat;
  }

  // --- 2-d tensor grid -----------------------------------------------------
  if (!(g.dirichlet_left || g.dirichlet_right || g.dirichlet_bottom ||
        g.dirichlet_top))
    throw ConfigError("empty Dirichlet set: boundary program undefined");

  lat.ly = g.length_y;
  lat.ny = g.cells_y;
  lat.hy = g.length_y / g.cells_y;
  const int nxn = g.cells_x + 1;
  const int nyn = g.cells_y + 1;
  const auto id = [nxn](int i, int j) { return j * nxn + i; };

  lat.nodes.resize(static_cast<std::size_t>(nxn) * nyn);
  lat.labels.assign(lat.nodes.size(), NodeLabel::Interior);
  for (int j = 0; j < nyn; ++j)
    for (int i = 0; i < nxn; ++i)
      lat.nodes[id(i, j)] = {i * lat.hx, j * lat.hy};

  for (int j = 0; j < nyn; ++j)
    for (int i = 0; i < nxn; ++i) {
      const bool on_left = (i == 0), on_right = (i == nxn - 1);
      const bool on_bottom = (j == 0), on_top = (j == nyn - 1);
      if (!(on_left || on_right || on_bottom || on_top)) continue;
      const bool dir = (on_left && g.dirichlet_left) ||
                       (on_right && g.dirichlet_right) ||
                       (on_bottom && g.dirichlet_bottom) ||
                       (on_top && g.dirichlet_top);
      lat.labels[id(i, j)] = dir ? NodeLabel::Dirichlet : NodeLabel::Neumann;
    }

  // Horizontal bonds: cross-section is the transverse spacing, halved on the
  // boundary rows so lattice-aligned cuts reproduce the continuum measure.
  for (int j = 0; j < nyn; ++j)
    for (int i = 0; i < g.cells_x; ++i) {
      Bond b;
      b.kind = Bond::Kind::Interior;
      b.a = id(i, j);
      b.b = id(i + 1, j);
      b.mid = {0.5 * (lat.nodes[b.a].x + lat.nodes[b.b].x), lat.nodes[b.a].y};
      b.dir = {1.0, 0.0};
      b.cross = (j == 0 || j == nyn - 1) ? 0.5 * lat.hy : lat.hy;
      b.h = lat.hx;
      lat.bonds.push_back(b);
    }
  // Vertical bonds.
  for (int j = 0; j < g.cells_y; ++j)
    for (int i = 0; i < nxn; ++i) {
      Bond b;
      b.kind = Bond::Kind::Interior;
      b.a = id(i, j);
      b.b = id(i, j + 1);
      b.mid = {lat.nodes[b.a].x, 0.5 * (lat.nodes[b.a].y + lat.nodes[b.b].y)};
      b.dir = {0.0, 1.0};
      b.cross = (i == 0 || i == nxn - 1) ? 0.5 * lat.hx : lat.hx;
      b.h = lat.hy;
      lat.bonds.push_back(b);
    }
  lat.interior_bond_count = static_cast<int>(lat.bonds.size());

  // Anchors: one per Dirichlet node, area = sum of its adjacent Dirichlet
  // half-edges, direction the (area-weighted) outward normal.
  lat.anchor_of_node.assign(lat.nodes.size(), -1);
  for (int j = 0; j < nyn; ++j)
    for (int i = 0; i < nxn; ++i) {
      if (lat.labels[id(i, j)] != NodeLabel::Dirichlet) continue;
      double area = 0.0;
      Vec normal{0.0, 0.0};
      const auto add_edge = [&](bool on_edge, bool edge_dirichlet, double half,
                                Vec n) {
        if (on_edge && edge_dirichlet) {
          area += half;
          normal = normal + half * n;
        }
      };
      const double half_y = (j == 0 || j == nyn - 1) ? 0.5 * lat.hy : lat.hy;
      const double half_x = (i == 0 || i == nxn - 1) ? 0.5 * lat.hx : lat.hx;
      add_edge(i == 0, g.dirichlet_left, half_y, {-1.0, 0.0});
      add_edge(i == nxn - 1, g.dirichlet_right, half_y, {1.0, 0.0});
      add_edge(j == 0, g.dirichlet_bottom, half_x, {0.0, -1.0});
      add_edge(j == nyn - 1, g.dirichlet_top, half_x, {0.0, 1.0});
      Bond a;
      a.kind = Bond::Kind::Anchor;
      a.a = id(i, j);
      a.mid = lat.nodes[a.a];
      a.dir = normalized(normal);
      a.cross = area;
      a.h = 0.0;
      lat.anchor_of_node[a.a] = static_cast<int>(lat.bonds.size());
      lat.bonds.push_back(a);
    }

  // Dual-cell quadrature weights (tensor product of 1-d trapezoid weights).
  lat.node_volume.assign(lat.nodes.size(), 0.0);
  for (int j = 0; j < nyn; ++j)
    for (int i = 0; i < nxn; ++i) {
      const double wx = (i == 0 || i == nxn - 1) ? 0.5 * lat.hx : lat.hx;
      const double wy = (j == 0 || j == nyn - 1) ? 0.5 * lat.hy : lat.hy;
      lat.node_volume[id(i, j)] = wx * wy;
    }
  return lat;
}

// ===========================================================================
// Crack geometry and admissibility
// ===========================================================================

std::vector<CrackSegment> crack_segments(const CrackSet& crack,
                                         const Lattice& lat) {
  std::vector<CrackSegment> segments;
  segments.reserve(crack.size());
  for (int id : crack.ids()) {
    if (id < 0 || id >= lat.bond_count())
      throw std::out_of_range("crack_segments: unknown bond id " +
                              std::to_string(id));
    const Bond& b = lat.bonds[static_cast<std::size_t>(id)];
    segments.push_back({id, b.mid, b.dir, b.cross});
  }
  return segments;
}

bool crack_contains(const CrackSet& gamma1, const CrackSet& gamma2) {
  return gamma2.contains_all(gamma1);
}

void apply_boundary(DisplacementField& u, double t, const CrackSet& crack,
                    const BoundaryProgram& program, const Lattice& lat) {
  for (int n = 0; n < lat.node_count(); ++n) {
    const int anchor = lat.anchor_of_node[n];
    if (anchor < 0 || crack.contains(anchor)) continue;
    u[static_cast<std::size_t>(n)] = program.value(t, lat.nodes[n]);
  }
}

DisplacementField boundary_rate_extension(const BoundaryProgram& program,
                                          const Lattice& lat) {
  DisplacementField v(lat.nodes.size());
  for (int n = 0; n < lat.node_count(); ++n)
    v[static_cast<std::size_t>(n)] = program.rate_value(lat.nodes[n]);
  return v;
}

int admissibility_violation(const DisplacementField& u, double t,
                            const CrackSet& crack,
                            const BoundaryProgram& program,
                            const Lattice& lat) {
  for (int n = 0; n < lat.node_count(); ++n) {
    const int anchor = lat.anchor_of_node[n];
    if (anchor < 0 || crack.contains(anchor)) continue;
    if (u[static_cast<std::size_t>(n)] != program.value(t, lat.nodes[n]))
      return n;
  }
  return -1;
}

}  // namespace griffith
