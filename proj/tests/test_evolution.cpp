#include <cmath>

#include "doctest.h"
#include "griffith/audit.hpp"
#include "support/common.hpp"

using namespace griffith;
using testsupport::brute_force_step;
using testsupport::canonical_1d;

namespace {

int first_crack_step(const EvolutionTrace& trace) {
  for (const auto& s : trace.steps)
    if (!s.crack.is_empty()) return s.index;
  return -1;
}

}  // namespace

TEST_CASE("time grids: uniform rows and explicit validation") {
  CHECK(TimeGrid::uniform(0.01, 2.0).step_count() == 201);
  CHECK(TimeGrid::uniform(0.005, 2.0).step_count() == 401);
  CHECK(TimeGrid::uniform(0.01, 2.0).max_step() == doctest::Approx(0.01));
  CHECK_THROWS_AS(TimeGrid::explicit_times({0.5, 1.0}), ConfigError);
  CHECK_THROWS_AS(TimeGrid::explicit_times({0.0, 1.0, 1.0}), ConfigError);
}

TEST_CASE("incremental step below the threshold keeps the body uncracked") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  CrackEnergyEvaluator eval(spec, lat);
  const StepOutcome out =
      incremental_step(100, 1.0, CrackSet{}, spec, lat, eval);
  CHECK(out.crack.is_empty());
  CHECK(out.energy.total == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(!out.heuristic);
}

TEST_CASE("incremental step past the threshold breaks one bond, lexicographic pick") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  CrackEnergyEvaluator eval(spec, lat);
  const StepOutcome out =
      incremental_step(142, 1.42, CrackSet{}, spec, lat, eval);
  REQUIRE(out.crack.size() == 1);
  CHECK(out.crack.ids()[0] == 0);  // all single-bond cracks tie at E = 1
  CHECK(out.energy.total == doctest::Approx(1.0).epsilon(1e-12));

  // Independent oracle: enumerate all 2^6 supersets without pruning.
  const auto oracle = brute_force_step(142, 1.42, CrackSet{}, spec, lat);
  CHECK(oracle.evaluated == 64);
  CHECK(oracle.crack == out.crack);
  CHECK(std::fabs(oracle.energy - out.energy.total) <= 1e-12);
}

TEST_CASE("heterogeneous toughness: ties keep the body uncracked, then break right") {
  // kappa = 1 on the left half, 0.5 on the right: threshold at t = 1 exactly.
  ProblemSpec spec = canonical_1d();
  spec.toughness.spatial.family = SpatialField::Family::Step;
  spec.toughness.spatial.axis = 0;
  spec.toughness.spatial.threshold = 0.5;
  spec.toughness.spatial.low = 1.0;
  spec.toughness.spatial.high = 0.5;
  const Lattice lat = build_lattice(spec.geometry);
  CrackEnergyEvaluator eval(spec, lat);

  const StepOutcome at_tie = incremental_step(100, 1.0, CrackSet{}, spec, lat, eval);
  CHECK(at_tie.crack.is_empty());
  CHECK(at_tie.energy.total == doctest::Approx(0.5).epsilon(1e-12));

  const StepOutcome past = incremental_step(101, 1.01, CrackSet{}, spec, lat, eval);
  REQUIRE(past.crack.size() == 1);
  CHECK(past.crack.ids()[0] == 2);  // cheapest right-half bond, smallest id
  CHECK(past.energy.total == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("canonical run: single crack event at t = 1.42") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  const EvolutionTrace trace = run_evolution(spec, lat);
  REQUIRE(trace.complete);
  REQUIRE(trace.steps.size() == 201);

  const int crack_step = first_crack_step(trace);
  CHECK(trace.grid.times[static_cast<std::size_t>(crack_step)] ==
        doctest::Approx(1.42).epsilon(1e-12));
  for (const auto& s : trace.steps) {
    if (s.index < crack_step)
      CHECK(s.crack.is_empty());
    else
      CHECK(s.crack.size() == 1);
  }
  CHECK(check_irreversibility(trace));
}

TEST_CASE("doubling the toughness scales the crack time by sqrt(2)") {
  const ProblemSpec spec_1 = canonical_1d(1.0);
  const ProblemSpec spec_2 = canonical_1d(2.0, 0.01, 2.5);
  const Lattice lat = build_lattice(spec_1.geometry);
  const EvolutionTrace tr1 = run_evolution(spec_1, lat);
  const EvolutionTrace tr2 = run_evolution(spec_2, build_lattice(spec_2.geometry));
  const double t1 = tr1.grid.times[static_cast<std::size_t>(first_crack_step(tr1))];
  const double t2 = tr2.grid.times[static_cast<std::size_t>(first_crack_step(tr2))];
  CHECK(std::fabs(t2 / t1 - std::sqrt(2.0)) <= 0.01 / t1 + 1e-12);
}

TEST_CASE("short run stays uncracked with the elastic parabola") {
  const ProblemSpec spec = canonical_1d(1.0, 0.01, 0.5);
  const Lattice lat = build_lattice(spec.geometry);
  const EvolutionTrace trace = run_evolution(spec, lat);
  REQUIRE(trace.complete);
  for (const auto& s : trace.steps) {
    CHECK(s.crack.is_empty());
    CHECK(std::fabs(s.energy.total - 0.5 * s.t * s.t) <= 1e-12);
  }
}

TEST_CASE("interpolation follows the left-closed right-open convention") {
  const ProblemSpec spec = canonical_1d(1.0, 0.25, 1.0);
  const Lattice lat = build_lattice(spec.geometry);
  const EvolutionTrace trace = run_evolution(spec, lat);
  CHECK(interpolate(trace, 0.25).index == 1);   // exactly on the grid
  CHECK(interpolate(trace, 0.80).index == 3);   // between t3 and t4
  CHECK(interpolate(trace, 1.0).index == 4);    // right endpoint closes
  CHECK_THROWS_AS(interpolate(trace, -0.1), std::out_of_range);
  CHECK_THROWS_AS(interpolate(trace, 1.5), std::out_of_range);
}

TEST_CASE("greedy never beats exhaustive and matches on the canonical family") {
  ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  for (double t : {0.5, 1.0, 1.42, 1.9}) {
    CrackEnergyEvaluator eval_ex(spec, lat);
    const StepOutcome ex = incremental_step(0, t, CrackSet{}, spec, lat, eval_ex);

    ProblemSpec greedy_spec = spec;
    greedy_spec.strategy.mode = StrategyConfig::Mode::Greedy;
    CrackEnergyEvaluator eval_gr(greedy_spec, lat);
    const StepOutcome gr =
        incremental_step(0, t, CrackSet{}, greedy_spec, lat, eval_gr);
    CHECK(gr.heuristic);
    CHECK(gr.energy.total >= ex.energy.total - 1e-12);
    CHECK(gr.energy.total == doctest::Approx(ex.energy.total).epsilon(1e-12));
  }
}

TEST_CASE("halving the step moves the first crack time by at most the old step") {
  const double t_coarse = [&] {
    const ProblemSpec spec = canonical_1d(1.0, 0.02);
    const Lattice lat = build_lattice(spec.geometry);
    const EvolutionTrace tr = run_evolution(spec, lat);
    return tr.grid.times[static_cast<std::size_t>(first_crack_step(tr))];
  }();
  const double t_fine = [&] {
    const ProblemSpec spec = canonical_1d(1.0, 0.01);
    const Lattice lat = build_lattice(spec.geometry);
    const EvolutionTrace tr = run_evolution(spec, lat);
    return tr.grid.times[static_cast<std::size_t>(first_crack_step(tr))];
  }();
  CHECK(std::fabs(t_coarse - t_fine) <= 0.02 + 1e-12);
}

TEST_CASE("2-d corridor steps match the enumeration oracle at several loads") {
  const ProblemSpec spec = testsupport::small_2d();
  const Lattice lat = build_lattice(spec.geometry);
  const auto corridor = resolve_candidate_bonds(spec.strategy.candidates, lat);
  REQUIRE(corridor.size() >= 4);
  REQUIRE(corridor.size() <= 12);

  CrackEnergyEvaluator eval(spec, lat);
  CrackSet prev;
  int idx = 0;
  for (double t : {0.6, 1.2, 1.8}) {
    const StepOutcome out = incremental_step(idx, t, prev, spec, lat, eval);
    const auto oracle = brute_force_step(idx, t, prev, spec, lat);
    CHECK(out.crack == oracle.crack);
    CHECK(std::fabs(out.energy.total - oracle.energy) <= 1e-12);
    prev = out.crack;
    ++idx;
  }
  CHECK(!prev.is_empty());  // the corridor does crack within this program
}

TEST_CASE("per-step energies never exceed the elastic continuation") {
  const ProblemSpec spec = canonical_1d();
  const Lattice lat = build_lattice(spec.geometry);
  const EvolutionTrace trace = run_evolution(spec, lat);
  for (const auto& s : trace.steps)
    CHECK(s.energy.total <= s.continuation.total + 1e-12);
}

TEST_CASE("an unbounded competitor aborts the run with a partial trace") {
  // Dead load with the coercivity waiver: debonding an anchor floats a
  // fragment the load then drags to infinity. The candidate sweep hits that
  // competitor, the step errors, and the trace is flagged incomplete.
  ProblemSpec spec = canonical_1d(100.0, 0.5, 1.0);  // tough: nothing breaks
  spec.load.family = LoadLaw::Family::DeadLoad;
  spec.load.dead = 2.0;
  spec.load.coercivity_waiver = true;
  const Lattice lat = build_lattice(spec.geometry);
  const EvolutionTrace trace = run_evolution(spec, lat);
  CHECK(!trace.complete);
  CHECK(trace.abort_reason.find("unbounded") != std::string::npos);
}

TEST_CASE("oversized candidate sets refuse without the greedy fallback") {
  ProblemSpec spec = canonical_1d(1.0, 0.5, 1.0, 30);  // 32 bonds
  spec.strategy.exhaustive_limit = 1u << 10;
  const Lattice lat = build_lattice(spec.geometry);
  CrackEnergyEvaluator eval(spec, lat);
  CHECK_THROWS_AS(incremental_step(0, 1.0, CrackSet{}, spec, lat, eval),
                  ConfigError);

  spec.strategy.greedy_fallback = true;
  CrackEnergyEvaluator eval2(spec, lat);
  const StepOutcome out = incremental_step(0, 1.0, CrackSet{}, spec, lat, eval2);
  CHECK(out.heuristic);
}

TEST_CASE("cooperative cuts trap the greedy strategy but not the exhaustive one") {
  // Corridor = one column of horizontal bonds. At t = 0.8 the full cut costs
  // kappa * Ly = 0.15 against the uncracked 0.25 t^2 = 0.16, yet no single
  // bond lowers the energy, so greedy stalls while exhaustive certifies the
  // three-bond cut.
  ProblemSpec spec = testsupport::small_2d(0.3);
  spec.strategy.candidates.box_min_x = 0.35;
  spec.strategy.candidates.box_max_x = 0.40;
  const Lattice lat = build_lattice(spec.geometry);
  REQUIRE(resolve_candidate_bonds(spec.strategy.candidates, lat).size() == 3);

  CrackEnergyEvaluator eval_ex(spec, lat);
  const StepOutcome ex = incremental_step(0, 0.8, CrackSet{}, spec, lat, eval_ex);
  CHECK(ex.crack.size() == 3);
  CHECK(ex.energy.total == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(ex.energy.bulk == doctest::Approx(0.0).epsilon(1e-12));

  const auto oracle = brute_force_step(0, 0.8, CrackSet{}, spec, lat);
  CHECK(oracle.crack == ex.crack);
  CHECK(std::fabs(oracle.energy - ex.energy.total) <= 1e-12);

  ProblemSpec gspec = spec;
  gspec.strategy.mode = StrategyConfig::Mode::Greedy;
  CrackEnergyEvaluator eval_gr(gspec, lat);
  const StepOutcome gr = incremental_step(0, 0.8, CrackSet{}, gspec, lat, eval_gr);
  CHECK(gr.heuristic);
  CHECK(gr.crack.is_empty());
  CHECK(gr.energy.total == doctest::Approx(0.16).epsilon(1e-12));
  CHECK(gr.energy.total > ex.energy.total);
}

TEST_CASE("a run may start from a preexisting stable crack") {
  ProblemSpec spec = canonical_1d(1.0, 0.1, 1.0);
  spec.initial_crack = {1};
  const Lattice lat = build_lattice(spec.geometry);
  const EvolutionTrace trace = run_evolution(spec, lat);
  REQUIRE(trace.complete);
  // The split chain carries no strain, so the crack never grows and the
  // energy stays at the surface cost.
  for (const auto& s : trace.steps) {
    CHECK(s.crack == CrackSet{{1}});
    CHECK(s.energy.total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("non-uniform explicit grids drive the same physics") {
  ProblemSpec spec = canonical_1d();
  spec.time.explicit_times = {0.0, 0.5, 1.0, 1.3, 1.39, 1.41, 1.5, 2.0};
  const Lattice lat = build_lattice(spec.geometry);
  const EvolutionTrace trace = run_evolution(spec, lat);
  REQUIRE(trace.complete);
  REQUIRE(trace.steps.size() == 8);
  // First grid point past t* = sqrt(2) is 1.5.
  CHECK(trace.steps[5].crack.is_empty());   // t = 1.41
  CHECK(trace.steps[6].crack.size() == 1);  // t = 1.5
  CHECK(check_irreversibility(trace));
  CHECK(interpolate(trace, 1.45).index == 5);  // within [1.41, 1.5)
}

TEST_CASE("a zero-length program is a single audited step") {
  const ProblemSpec spec = canonical_1d(1.0, 0.01, 0.0);
  const Lattice lat = build_lattice(spec.geometry);
  const EvolutionTrace trace = run_evolution(spec, lat);
  REQUIRE(trace.complete);
  REQUIRE(trace.steps.size() == 1);
  CHECK(trace.steps[0].energy.total == 0.0);
  CHECK(run_audit(trace, spec, lat).all_pass);
}

TEST_CASE("grips on top and bottom stretch along y") {
  ProblemSpec spec = testsupport::small_2d(0.2);
  spec.geometry.dirichlet_left = spec.geometry.dirichlet_right = false;
  spec.geometry.dirichlet_bottom = spec.geometry.dirichlet_top = true;
  spec.boundary.prof_b = 0.0;
  spec.boundary.prof_c = 1.0;  // w(t, x) = t * y
  // One row of vertical bonds: the transverse cut for a y-stretch.
  spec.strategy.candidates.kind = CandidateFilter::Kind::Box;
  spec.strategy.candidates.box_min_x = -1.0;
  spec.strategy.candidates.box_max_x = 2.0;
  spec.strategy.candidates.box_min_y = 0.1;
  spec.strategy.candidates.box_max_y = 0.15;
  spec.time.dt = 0.25;
  spec.time.t_end = 1.5;
  const Lattice lat = build_lattice(spec.geometry);
  const EvolutionTrace trace = run_evolution(spec, lat);
  REQUIRE(trace.complete);
  // Uncracked elastic energy is 1/2 t^2 |Omega| = 0.25 t^2; a full cut across
  // a row of vertical bonds costs kappa * Lx = 0.2.
  CHECK(trace.steps[2].energy.total ==
        doctest::Approx(0.25 * 0.25).epsilon(1e-12));  // t = 0.5, uncracked
  const auto& final_crack = trace.steps.back().crack;
  CHECK(!final_crack.is_empty());
  for (int id : final_crack.ids())
    CHECK(lat.bonds[static_cast<std::size_t>(id)].dir.y == 1.0);
  CHECK(run_audit(trace, spec, lat).all_pass);
}

TEST_CASE("anisotropic toughness steers 2-d runs and still audits clean") {
  ProblemSpec spec = testsupport::small_2d(0.25);
  spec.toughness.aniso = ToughnessLaw::Aniso::QuadraticAxis;
  spec.toughness.aniso_strength = 2.0;  // cuts with normal e1 cost 3x
  spec.time.dt = 0.3;
  const Lattice lat = build_lattice(spec.geometry);
  const EvolutionTrace trace = run_evolution(spec, lat);
  REQUIRE(trace.complete);
  const AuditResult audit = run_audit(trace, spec, lat);
  CHECK(audit.all_pass);

  // Same specimen, isotropic: the transverse cut appears no later, since the
  // anisotropy only penalizes it.
  ProblemSpec iso = testsupport::small_2d(0.25);
  iso.time.dt = 0.3;
  const EvolutionTrace iso_trace = run_evolution(iso, build_lattice(iso.geometry));
  CHECK(iso_trace.steps.back().crack.size() >=
        trace.steps.back().crack.size());
}

TEST_CASE("a globally unstable initial pair is refused") {
  // A strong well at u = 10 fights the zero grips from t = 0 on; debonding
  // both anchors (surface cost 2 kappa) lets the body sit in the well, so the
  // default initial pair is not globally stable and the run must refuse.
  ProblemSpec spec = canonical_1d();
  spec.load.family = LoadLaw::Family::QuadraticWell;
  spec.load.g0 = 10.0;
  spec.load.alpha = 0.25;
  spec.load.beta = 400.0;
  spec.load.coercivity_waiver = false;
  const Lattice lat = build_lattice(spec.geometry);
  CHECK_THROWS_WITH_AS(run_evolution(spec, lat),
                       doctest::Contains("not globally stable"), ConfigError);

  // The plain canonical initial pair is stable and runs fine.
  const ProblemSpec ok = canonical_1d(1.0, 0.25, 0.5);
  CHECK_NOTHROW(run_evolution(ok, build_lattice(ok.geometry)));
}
