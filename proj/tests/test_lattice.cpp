#include <random>

#include "doctest.h"
#include "support/common.hpp"

using namespace griffith;
using testsupport::canonical_1d;

TEST_CASE("1-d chain: nodes, bonds, anchors") {
  GeometryConfig g;
  g.dimension = 1;
  g.length_x = 1.0;
  g.cells_x = 4;
  const Lattice lat = build_lattice(g);
  CHECK(lat.node_count() == 5);
  CHECK(lat.interior_bond_count == 4);
  CHECK(lat.bond_count() == 6);  // + 2 anchors
  for (int i = 0; i < lat.interior_bond_count; ++i)
    CHECK(lat.bonds[static_cast<std::size_t>(i)].cross == 1.0);
  CHECK(lat.labels.front() == NodeLabel::Dirichlet);
  CHECK(lat.labels.back() == NodeLabel::Dirichlet);
  CHECK(lat.anchor_of_node[0] >= 0);
  CHECK(lat.anchor_of_node[2] == -1);
}

TEST_CASE("2-d 3x3 grid with left/right grips: 16 nodes, 24 bonds, 8 anchors") {
  GeometryConfig g;
  g.dimension = 2;
  g.length_x = g.length_y = 1.0;
  g.cells_x = g.cells_y = 3;
  g.dirichlet_left = g.dirichlet_right = true;
  g.dirichlet_bottom = g.dirichlet_top = false;
  const Lattice lat = build_lattice(g);
  CHECK(lat.node_count() == 16);
  CHECK(lat.interior_bond_count == 24);  // 3*4 horizontal + 4*3 vertical
  CHECK(lat.bond_count() == 32);         // + 8 anchors
}

TEST_CASE("all-Neumann boundary is refused") {
  GeometryConfig g;
  g.dimension = 2;
  g.cells_x = g.cells_y = 3;
  g.dirichlet_left = g.dirichlet_right = false;
  g.dirichlet_bottom = g.dirichlet_top = false;
  CHECK_THROWS_AS(build_lattice(g), ConfigError);
}

TEST_CASE("bond cross-sections across lattice-aligned cuts match the continuum measure") {
  GeometryConfig g;
  g.dimension = 2;
  g.length_x = 2.0;
  g.length_y = 0.75;
  g.cells_x = 8;
  g.cells_y = 3;
  const Lattice lat = build_lattice(g);
  // A vertical cut between node columns crosses every horizontal bond whose
  // midpoint sits at that column gap; the cross-sections must sum to Ly.
  const double cut_x = 0.5 * (lat.hx) + 2 * lat.hx;  // between columns 2 and 3
  double total = 0.0;
  for (int i = 0; i < lat.interior_bond_count; ++i) {
    const Bond& b = lat.bonds[static_cast<std::size_t>(i)];
    if (b.dir.x == 1.0 && std::fabs(b.mid.x - cut_x) < 1e-12) total += b.cross;
  }
  CHECK(total == doctest::Approx(g.length_y).epsilon(1e-12));
  // And a horizontal cut sums to Lx.
  const double cut_y = 0.5 * lat.hy;
  total = 0.0;
  for (int i = 0; i < lat.interior_bond_count; ++i) {
    const Bond& b = lat.bonds[static_cast<std::size_t>(i)];
    if (b.dir.y == 1.0 && std::fabs(b.mid.y - cut_y) < 1e-12) total += b.cross;
  }
  CHECK(total == doctest::Approx(g.length_x).epsilon(1e-12));
}

TEST_CASE("built lattices are connected and anchor exactly the gripped nodes") {
  const auto verify = [](const Lattice& lat) {
    std::vector<int> root(static_cast<std::size_t>(lat.node_count()));
    for (int i = 0; i < lat.node_count(); ++i)
      root[static_cast<std::size_t>(i)] = i;
    const auto find = [&](int a) {
      while (root[static_cast<std::size_t>(a)] != a)
        a = root[static_cast<std::size_t>(a)];
      return a;
    };
    for (int i = 0; i < lat.interior_bond_count; ++i) {
      const Bond& b = lat.bonds[static_cast<std::size_t>(i)];
      root[static_cast<std::size_t>(find(b.a))] = find(b.b);
    }
    for (int i = 1; i < lat.node_count(); ++i) CHECK(find(i) == find(0));
    for (int i = 0; i < lat.node_count(); ++i) {
      const bool gripped = lat.labels[static_cast<std::size_t>(i)] ==
                           NodeLabel::Dirichlet;
      CHECK((lat.anchor_of_node[static_cast<std::size_t>(i)] >= 0) == gripped);
    }
  };
  GeometryConfig chain;
  chain.dimension = 1;
  chain.cells_x = 7;
  verify(build_lattice(chain));
  GeometryConfig grid;
  grid.dimension = 2;
  grid.cells_x = 5;
  grid.cells_y = 3;
  grid.dirichlet_left = grid.dirichlet_bottom = true;
  grid.dirichlet_right = grid.dirichlet_top = false;
  verify(build_lattice(grid));
}

TEST_CASE("corner anchors adjacent to two gripped edges") {
  GeometryConfig g;
  g.dimension = 2;
  g.length_x = g.length_y = 1.0;
  g.cells_x = g.cells_y = 2;  // h = 0.5
  g.dirichlet_left = g.dirichlet_bottom = true;
  g.dirichlet_right = g.dirichlet_top = false;
  const Lattice lat = build_lattice(g);
  const int corner_anchor = lat.anchor_of_node[0];  // node at (0, 0)
  REQUIRE(corner_anchor >= 0);
  const Bond& a = lat.bonds[static_cast<std::size_t>(corner_anchor)];
  // Half of each adjacent gripped edge, diagonal outward normal.
  CHECK(a.cross == doctest::Approx(0.5));
  CHECK(a.dir.x == doctest::Approx(-std::sqrt(0.5)));
  CHECK(a.dir.y == doctest::Approx(-std::sqrt(0.5)));
  // A single-edge corner keeps the plain half-edge area and edge normal.
  const int top_left = lat.anchor_of_node[static_cast<std::size_t>(
      2 * 3)];  // node (0, 1): left edge only
  REQUIRE(top_left >= 0);
  const Bond& b = lat.bonds[static_cast<std::size_t>(top_left)];
  CHECK(b.cross == doctest::Approx(0.25));
  CHECK(b.dir.x == doctest::Approx(-1.0));
  CHECK(b.dir.y == doctest::Approx(0.0));
  // Gripped edge areas still sum to the gripped boundary measure.
  double total = 0.0;
  for (int i = lat.interior_bond_count; i < lat.bond_count(); ++i)
    total += lat.bonds[static_cast<std::size_t>(i)].cross;
  CHECK(total == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("crack segments: geometry and totals") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);

  CHECK(crack_segments(CrackSet{}, lat).empty());

  // The bond spanning (0.25, 0.5) is interior bond 1.
  const auto segs = crack_segments(CrackSet{{1}}, lat);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].mid.x == doctest::Approx(0.375));
  CHECK(segs[0].area == 1.0);

  CHECK_THROWS(crack_segments(CrackSet{{99}}, lat));
}

TEST_CASE("2-d collinear vertical bonds: normals and the total area") {
  GeometryConfig g;
  g.dimension = 2;
  g.length_x = g.length_y = 1.0;
  g.cells_x = g.cells_y = 4;  // h = 0.25
  const Lattice lat = build_lattice(g);
  // Three vertical bonds in an interior column.
  std::vector<int> ids;
  for (int i = 0; i < lat.interior_bond_count && ids.size() < 3; ++i) {
    const Bond& b = lat.bonds[static_cast<std::size_t>(i)];
    if (b.dir.y == 1.0 && std::fabs(b.mid.x - 0.5) < 1e-12) ids.push_back(i);
  }
  REQUIRE(ids.size() == 3);
  const auto segs = crack_segments(CrackSet{ids}, lat);
  double area = 0.0;
  for (const auto& s : segs) {
    CHECK(s.normal.x == 0.0);
    CHECK(s.normal.y == 1.0);
    area += s.area;
  }
  CHECK(area == doctest::Approx(0.75));
}

TEST_CASE("crack_contains is a partial order") {
  CHECK(crack_contains(CrackSet{}, CrackSet{{3, 7}}));
  CHECK(crack_contains(CrackSet{{3}}, CrackSet{{3, 7}}));
  CHECK(!crack_contains(CrackSet{{1, 3}}, CrackSet{{3, 7}}));
  CHECK(crack_contains(CrackSet{{2, 4}}, CrackSet{{2, 4}}));

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto random_set = [&] {
      std::vector<int> ids;
      for (int b = 0; b < 10; ++b)
        if (rng() & 1) ids.push_back(b);
      return CrackSet{ids};
    };
    const CrackSet a = random_set(), b = random_set(), c = random_set();
    CHECK(crack_contains(a, a));
    if (crack_contains(a, b) && crack_contains(b, a)) CHECK(a == b);
    if (crack_contains(a, b) && crack_contains(b, c))
      CHECK(crack_contains(a, c));
  }
}

TEST_CASE("segment areas are additive over disjoint unions") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  const CrackSet a{{0, 2}};
  const CrackSet b{{1, 5}};
  const auto area = [&](const CrackSet& c) {
    double total = 0.0;
    for (const auto& s : crack_segments(c, lat)) total += s.area;
    return total;
  };
  CHECK(area(a.unite(b)) == doctest::Approx(area(a) + area(b)).epsilon(1e-15));
}

TEST_CASE("apply_boundary assigns grips and respects debonded anchors") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);

  DisplacementField u(static_cast<std::size_t>(lat.node_count()), 0.0);
  apply_boundary(u, 0.5, CrackSet{}, spec.boundary, lat);
  CHECK(u.front() == 0.0);
  CHECK(u.back() == 0.5);

  // Break the right anchor: the node keeps its previous value.
  const int right_anchor = lat.anchor_of_node[static_cast<std::size_t>(
      lat.node_count() - 1)];
  DisplacementField v(static_cast<std::size_t>(lat.node_count()), 7.0);
  apply_boundary(v, 0.5, CrackSet{{right_anchor}}, spec.boundary, lat);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 7.0);
}

TEST_CASE("2-d shear program assigns only the gripped edges") {
  ProblemSpec spec = testsupport::small_2d();
  spec.boundary.prof_a = -0.5;  // w = t (x - 1/2): -t/2 left, +t/2 right
  const Lattice lat = build_lattice(spec.geometry);
  DisplacementField u(static_cast<std::size_t>(lat.node_count()), 99.0);
  apply_boundary(u, 1.0, CrackSet{}, spec.boundary, lat);
  for (int n = 0; n < lat.node_count(); ++n) {
    const Point p = lat.nodes[static_cast<std::size_t>(n)];
    if (p.x == 0.0)
      CHECK(u[static_cast<std::size_t>(n)] == doctest::Approx(-0.5));
    else if (p.x == 1.0)
      CHECK(u[static_cast<std::size_t>(n)] == doctest::Approx(0.5));
    else
      CHECK(u[static_cast<std::size_t>(n)] == 99.0);
  }
}

TEST_CASE("breaking an anchor never changes interior connectivity") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  const int anchor = lat.anchor_of_node[0];
  REQUIRE(anchor >= lat.interior_bond_count);
  int dirichlet_constraints = 0;
  const CrackSet crack{{anchor}};
  for (int n = 0; n < lat.node_count(); ++n) {
    const int a = lat.anchor_of_node[static_cast<std::size_t>(n)];
    if (a >= 0 && !crack.contains(a)) ++dirichlet_constraints;
  }
  CHECK(dirichlet_constraints == 1);  // exactly one constraint removed
}
