#pragma once

// Shared fixtures and the independent enumeration oracle used by the unit
// and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "griffith/config.hpp"
#include "griffith/energy.hpp"
#include "griffith/equilibrium.hpp"
#include "griffith/evolution.hpp"
#include "griffith/lattice.hpp"

namespace testsupport {

using namespace griffith;

// Uniaxial stretching of a unit chain: quadratic bulk, homogeneous toughness,
// no body forces (coercivity waived), w(t, x) = t * x. The crack threshold is
// t* = sqrt(2 kappa L / mu).
inline ProblemSpec canonical_1d(double kappa = 1.0, double dt = 0.01,
                                double t_end = 2.0, int cells = 4) {
  ProblemSpec spec;
  spec.geometry.dimension = 1;
  spec.geometry.length_x = 1.0;
  spec.geometry.cells_x = cells;
  spec.bulk.family = BulkLaw::Family::Quadratic;
  spec.bulk.mu = 1.0;
  spec.bulk.p = 2.0;
  spec.toughness.kappa0 = kappa;
  spec.load.family = LoadLaw::Family::None;
  spec.load.coercivity_waiver = true;
  spec.boundary.rate = 1.0;
  spec.boundary.prof_a = 0.0;
  spec.boundary.prof_b = 1.0;
  spec.time.dt = dt;
  spec.time.t_end = t_end;
  spec.strategy.mode = StrategyConfig::Mode::Exhaustive;
  spec.strategy.candidates.kind = CandidateFilter::Kind::All;
  spec.output.dir = "test_out";
  return spec;
}

// Small 2-d stretching specimen with a candidate corridor across the middle.
inline ProblemSpec small_2d(double kappa = 0.3) {
  ProblemSpec spec;
  spec.geometry.dimension = 2;
  spec.geometry.length_x = 1.0;
  spec.geometry.length_y = 0.5;
  spec.geometry.cells_x = 4;
  spec.geometry.cells_y = 2;
  spec.geometry.dirichlet_left = true;
  spec.geometry.dirichlet_right = true;
  spec.geometry.dirichlet_bottom = false;
  spec.geometry.dirichlet_top = false;
  spec.bulk.family = BulkLaw::Family::Quadratic;
  spec.toughness.kappa0 = kappa;
  spec.load.family = LoadLaw::Family::None;
  spec.load.coercivity_waiver = true;
  spec.boundary.rate = 1.0;
  spec.boundary.prof_b = 1.0;
  spec.time.dt = 0.6;
  spec.time.t_end = 1.8;
  spec.strategy.candidates.kind = CandidateFilter::Kind::Box;
  spec.strategy.candidates.box_min_x = 0.3;
  spec.strategy.candidates.box_min_y = -1.0;
  spec.strategy.candidates.box_max_x = 0.7;
  spec.strategy.candidates.box_max_y = 2.0;
  spec.output.dir = "test_out_2d";
  return spec;
}

// Independent oracle for the incremental problem: enumerate every admissible
// superset within the candidate set, no pruning, no memoization, fresh solves.
// The selection rule is the same strict-improvement tie rule (fewer bonds,
// then lexicographically smaller id set) so results are comparable exactly.
struct BruteForceResult {
  CrackSet crack;
  double energy = 0.0;
  std::int64_t evaluated = 0;
};

inline BruteForceResult brute_force_step(int /*time_index*/, double t,
                                         const CrackSet& previous,
                                         const ProblemSpec& spec,
                                         const Lattice& lat) {
  std::vector<int> candidates;
  for (int id : resolve_candidate_bonds(spec.strategy.candidates, lat))
    if (!previous.contains(id)) candidates.push_back(id);
  const int m = static_cast<int>(candidates.size());

  // All masks ordered by the tie rule: cardinality, then lexicographic order
  // of the sorted bond-id lists.
  std::vector<std::uint64_t> masks;
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) masks.push_back(mask);
  const auto ids_of = [&](std::uint64_t mask) {
    std::vector<int> ids;
    for (int j = 0; j < m; ++j)
      if (mask & (1ull << j)) ids.push_back(candidates[static_cast<std::size_t>(j)]);
    return ids;
  };
  std::sort(masks.begin(), masks.end(),
            [&](std::uint64_t a, std::uint64_t b) {
              const auto ia = ids_of(a), ib = ids_of(b);
              if (ia.size() != ib.size()) return ia.size() < ib.size();
              return std::lexicographical_compare(ia.begin(), ia.end(),
                                                  ib.begin(), ib.end());
            });

  BruteForceResult best;
  bool first = true;
  double min_energy = 0.0;
  for (std::uint64_t mask : masks) {
    std::vector<int> ids = previous.ids();
    for (int j : ids_of(mask)) ids.push_back(j);
    const CrackSet crack{std::move(ids)};
    const auto solved = minimize_displacement(t, crack, spec, lat);
    const double energy =
        solved.second.energy + surface_energy(lat, spec.toughness, crack);
    ++best.evaluated;
    const double tau =
        spec.strategy.tie_tolerance * std::max(1.0, std::fabs(min_energy));
    if (first || energy < min_energy - tau) {
      best.crack = crack;
      best.energy = energy;
      min_energy = first ? energy : std::min(min_energy, energy);
      first = false;
    } else if (energy < min_energy) {
      min_energy = energy;
    }
  }
  return best;
}

}  // namespace testsupport
