#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "griffith/energy.hpp"
#include "griffith/equilibrium.hpp"
#include "griffith/lattice.hpp"

namespace griffith {

struct ProblemSpec;

struct TimeGrid {
  std::vector<double> times;  // strictly increasing, times[0] == 0

  static TimeGrid uniform(double dt, double t_end);
  static TimeGrid explicit_times(std::vector<double> times);

  int step_count() const { return static_cast<int>(times.size()); }
  double max_step() const;
  double t_end() const { return times.empty() ? 0.0 : times.back(); }
};

struct StepRecord {
  int index = 0;
  double t = 0.0;
  CrackSet crack;
  DisplacementField u;
  EnergyBreakdown energy;
  bool heuristic = false;  // greedy strategy produced this step
  std::int64_t candidates_evaluated = 0;
  double cum_work = 0.0;  // accumulated external work up to this time
  // The elastic minimizer with the previous crack at this time: the state the
  // evolution would continue in if nothing broke. Equals `energy` whenever the
  // crack did not grow.
  EnergyBreakdown continuation;
};

struct EvolutionTrace {
  TimeGrid grid;
  std::vector<StepRecord> steps;
  bool complete = false;
  std::string abort_reason;
};

struct CandidateFilter;

// Bond ids the strategy allows to break, sorted ascending.
std::vector<int> resolve_candidate_bonds(const CandidateFilter& filter,
                                         const Lattice& lat);

struct StepOutcome {
  DisplacementField u;
  CrackSet crack;
  EnergyBreakdown energy;
  EnergyBreakdown continuation;
  bool heuristic = false;
  std::int64_t candidates_evaluated = 0;
};

// One incremental minimum problem: minimize E(t)(u, Gamma) over pairs with
// Gamma containing `previous`, searched over the configured candidate bonds.
// Exhaustive strategy enumerates supersets in tie-preference order (fewer
// bonds first, then lexicographic) with branch-and-bound pruning and returns
// a certified global minimum over the candidate set; greedy adds one bond at
// a time and is flagged heuristic.
StepOutcome incremental_step(int time_index, double t,
                             const CrackSet& previous, const ProblemSpec& spec,
                             const Lattice& lat, CrackEnergyEvaluator& eval,
                             const DisplacementField* warm_start = nullptr);

// Runs the full time grid: validates the problem, checks global stability of
// the initial pair, then iterates incremental steps. The trace is flagged
// incomplete if a step fails.
EvolutionTrace run_evolution(const ProblemSpec& spec, const Lattice& lat);

// State of the largest grid time <= t (piecewise-constant, left-closed
// right-open; t == t_end returns the final step). Throws outside [0, T].
const StepRecord& interpolate(const EvolutionTrace& trace, double t);

}  // namespace griffith
