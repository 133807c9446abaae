#include <cmath>
#include <random>

#include "doctest.h"
#include "support/common.hpp"

using namespace griffith;
using testsupport::canonical_1d;

TEST_CASE("uncracked chain at t = 1 relaxes to the linear field") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  const auto [u, report] = minimize_displacement(1.0, CrackSet{}, spec, lat);
  CHECK(report.quadratic_path);
  for (int n = 0; n < lat.node_count(); ++n)
    CHECK(u[static_cast<std::size_t>(n)] ==
          doctest::Approx(lat.nodes[static_cast<std::size_t>(n)].x)
              .epsilon(1e-10));
  CHECK(report.energy == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.pinned_nodes.empty());
}

TEST_CASE("a broken interior bond splits the chain into rigid fragments") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  const auto [u, report] = minimize_displacement(1.0, CrackSet{{1}}, spec, lat);
  for (int n = 0; n < lat.node_count(); ++n) {
    const double expect =
        lat.nodes[static_cast<std::size_t>(n)].x < 0.375 ? 0.0 : 1.0;
    CHECK(u[static_cast<std::size_t>(n)] ==
          doctest::Approx(expect).epsilon(1e-10));
  }
  CHECK(report.energy == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("p-power law: the constant-strain field is the minimizer") {
  ProblemSpec spec = canonical_1d();
  spec.bulk.family = BulkLaw::Family::PPower;
  spec.bulk.p = 4.0;
  const Lattice lat = build_lattice(spec.geometry);
  const auto [u, report] = minimize_displacement(1.0, CrackSet{}, spec, lat);
  CHECK(!report.quadratic_path);
  for (int n = 0; n < lat.node_count(); ++n)
    CHECK(u[static_cast<std::size_t>(n)] ==
          doctest::Approx(lat.nodes[static_cast<std::size_t>(n)].x)
              .epsilon(1e-6));
  CHECK(report.energy == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("elastic energy of crack: closed-form cases") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  CHECK(elastic_energy_of_crack(1.0, CrackSet{}, spec, lat) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // Full debond of one anchor releases the whole elastic energy.
  const int right_anchor =
      lat.anchor_of_node[static_cast<std::size_t>(lat.node_count() - 1)];
  CHECK(elastic_energy_of_crack(1.0, CrackSet{{right_anchor}}, spec, lat) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Zero boundary data: zero energy whatever the crack.
  CHECK(elastic_energy_of_crack(0.0, CrackSet{{0, 2}}, spec, lat) ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("elastic energy is monotone in the crack") {
  const ProblemSpec spec = canonical_1d(1.0, 0.01, 2.0, 6);
  const Lattice lat = build_lattice(spec.geometry);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> small_ids, extra;
    for (int b = 0; b < lat.bond_count(); ++b) {
      if ((rng() & 3) == 0) small_ids.push_back(b);
      if ((rng() & 3) == 0) extra.push_back(b);
    }
    const CrackSet small{small_ids};
    const CrackSet big = small.unite(CrackSet{extra});
    const double t = 0.5 + 0.1 * static_cast<double>(rng() % 10);
    CHECK(elastic_energy_of_crack(t, big, spec, lat) <=
          elastic_energy_of_crack(t, small, spec, lat) + 1e-10);
  }
}

TEST_CASE("quadratic minimizer is warm-start independent") {
  const ProblemSpec spec = canonical_1d(1.0, 0.01, 2.0, 9);
  const Lattice lat = build_lattice(spec.geometry);
  const CrackSet crack{{3}};
  DisplacementField warm_a(static_cast<std::size_t>(lat.node_count()), 0.0);
  DisplacementField warm_b(static_cast<std::size_t>(lat.node_count()));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (auto& x : warm_b) x = dist(rng);
  const auto [ua, ra] = minimize_displacement(1.3, crack, spec, lat, &warm_a);
  const auto [ub, rb] = minimize_displacement(1.3, crack, spec, lat, &warm_b);
  for (std::size_t n = 0; n < ua.size(); ++n)
    CHECK(std::fabs(ua[n] - ub[n]) <= 1e-9);
}

TEST_CASE("elastic energy scales quadratically with the boundary data") {
  ProblemSpec spec = canonical_1d(1.0, 0.01, 2.0, 5);
  const Lattice lat = build_lattice(spec.geometry);
  const double e1 = elastic_energy_of_crack(1.0, CrackSet{{2}}, spec, lat);
  spec.boundary.rate = 3.0;
  const double e3 = elastic_energy_of_crack(1.0, CrackSet{{2}}, spec, lat);
  CHECK(e3 == doctest::Approx(9.0 * e1).epsilon(1e-9));
}

TEST_CASE("floating fragments are pinned at the warm start and reported") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  // Break bond 1 and the right anchor: nodes {2, 3, 4} float.
  const int right_anchor =
      lat.anchor_of_node[static_cast<std::size_t>(lat.node_count() - 1)];
  const CrackSet crack{{1, right_anchor}};
  DisplacementField warm(static_cast<std::size_t>(lat.node_count()), 0.7);
  const auto [u, report] = minimize_displacement(1.0, crack, spec, lat, &warm);
  REQUIRE(report.pinned_nodes.size() == 1);
  CHECK(report.pinned_nodes[0] == 2);
  CHECK(u[2] == doctest::Approx(0.7));
  CHECK(u[3] == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(u[4] == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(report.energy == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a floating fragment under a dead load is unbounded") {
  ProblemSpec spec = canonical_1d();
  spec.load.family = LoadLaw::Family::DeadLoad;
  spec.load.dead = 2.0;
  spec.load.coercivity_waiver = true;
  const Lattice lat = build_lattice(spec.geometry);
  const int right_anchor =
      lat.anchor_of_node[static_cast<std::size_t>(lat.node_count() - 1)];
  CHECK_THROWS_AS(
      minimize_displacement(1.0, CrackSet{{1, right_anchor}}, spec, lat),
      EnergyUnboundedError);
  // Anchored configurations still solve fine.
  CHECK_NOTHROW(minimize_displacement(1.0, CrackSet{}, spec, lat));
}

TEST_CASE("quadratic well keeps detached fragments well-posed") {
  ProblemSpec spec = canonical_1d();
  spec.load.family = LoadLaw::Family::QuadraticWell;
  spec.load.gt = 1.0;
  spec.load.alpha = 0.25;
  spec.load.beta = 4.0;
  spec.load.coercivity_waiver = false;
  const Lattice lat = build_lattice(spec.geometry);
  const int right_anchor =
      lat.anchor_of_node[static_cast<std::size_t>(lat.node_count() - 1)];
  const auto [u, report] =
      minimize_displacement(1.0, CrackSet{{1, right_anchor}}, spec, lat);
  CHECK(report.pinned_nodes.empty());
  // The detached fragment settles into the well at u = t.
  CHECK(u[3] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("dead load bulges the gripped chain like the continuum parabola") {
  // -u'' = g with zero grips: u = g x (1 - x) / 2, grid-exact for the
  // second-difference operator.
  ProblemSpec spec = canonical_1d();
  spec.load.family = LoadLaw::Family::DeadLoad;
  spec.load.dead = 8.0;
  spec.load.coercivity_waiver = true;
  const Lattice lat = build_lattice(spec.geometry);
  const auto [u, report] = minimize_displacement(0.0, CrackSet{}, spec, lat);
  for (int n = 0; n < lat.node_count(); ++n) {
    const double x = lat.nodes[static_cast<std::size_t>(n)].x;
    CHECK(u[static_cast<std::size_t>(n)] ==
          doctest::Approx(4.0 * x * (1.0 - x)).epsilon(1e-10));
  }
}

TEST_CASE("flat well: strains spread evenly past the well edge") {
  ProblemSpec spec = canonical_1d();
  spec.bulk.family = BulkLaw::Family::FlatWell;
  const Lattice lat = build_lattice(spec.geometry);
  // Below unit mean strain everything is stress free.
  CHECK(elastic_energy_of_crack(0.5, CrackSet{}, spec, lat) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // At w(2) = 2x the convex minimizer stretches every bond equally: each
  // carries (2 - 1)^2 per unit volume.
  DisplacementField cold(static_cast<std::size_t>(lat.node_count()), 0.0);
  const auto [u, report] =
      minimize_displacement(2.0, CrackSet{}, spec, lat, &cold);
  CHECK(report.energy == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("memoized evaluator returns identical entries for repeated cracks") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  CrackEnergyEvaluator eval(spec, lat);
  const CrackSet crack{{2}};
  const auto a = eval.elastic_at(5, 0.05, crack);
  const auto solves_after_first = eval.solves_performed();
  const auto b = eval.elastic_at(5, 0.05, crack);
  CHECK(eval.solves_performed() == solves_after_first);
  CHECK(a.elastic == b.elastic);
  CHECK(a.bulk == b.bulk);
}
