#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "griffith/energy.hpp"
#include "griffith/lattice.hpp"

namespace griffith {

struct ProblemSpec;

struct SolveReport {
  int iterations = 0;
  double grad_norm = 0.0;
  double energy = 0.0;  // W - F at the minimizer
  std::vector<int> pinned_nodes;  // representatives of floating fragments
  bool quadratic_path = false;
};

// Thrown when a floating fragment under a non-coercive load makes the energy
// unbounded below (only reachable with the coercivity waiver set).
struct EnergyUnboundedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when the descent loop exhausts its iteration budget; carries the
// best iterate found.
struct NonConvergenceError : std::runtime_error {
  NonConvergenceError(std::string what, DisplacementField best_iterate,
                      SolveReport report)
      : std::runtime_error(std::move(what)),
        best(std::move(best_iterate)),
        report(std::move(report)) {}
  DisplacementField best;
  SolveReport report;
};

// Minimizes W(grad u) - F(t)(u) over fields satisfying u = w(t, .) on intact
// anchors. Quadratic bulk with quadratic-or-linear load goes through a CG
// solve (relative residual 1e-12); other convex families use gradient descent
// with backtracking. Fragments disconnected from every intact anchor whose
// load has no proper minimum are pinned at the warm-start value (or 0) and
// reported.
std::pair<DisplacementField, SolveReport> minimize_displacement(
    double t, const CrackSet& crack, const ProblemSpec& spec,
    const Lattice& lat, const DisplacementField* warm_start = nullptr);

// min over u of W - F at fixed crack; equals bulk_energy - force_work at the
// minimizer.
double elastic_energy_of_crack(double t, const CrackSet& crack,
                               const ProblemSpec& spec, const Lattice& lat);

// Memoizing evaluator used by the evolution driver and the audits. Keys are
// (time index, exact crack id set); solves for distinct cracks may run
// concurrently, the store serializes its writes.
class CrackEnergyEvaluator {
 public:
  CrackEnergyEvaluator(const ProblemSpec& spec, const Lattice& lat)
      : spec_(spec), lat_(lat) {}

  struct Entry {
    double elastic = 0.0;  // bulk - force_work at the minimizer
    double bulk = 0.0;
    double force = 0.0;
  };

  Entry elastic_at(int time_index, double t, const CrackSet& crack,
                   const DisplacementField* warm_start = nullptr);

  // Same solve, also returning the minimizer.
  std::pair<DisplacementField, Entry> solve_at(
      int time_index, double t, const CrackSet& crack,
      const DisplacementField* warm_start = nullptr);

  std::int64_t solves_performed() const { return solves_; }

 private:
  const ProblemSpec& spec_;
  const Lattice& lat_;
  std::map<std::pair<int, std::vector<int>>, Entry> memo_;
  std::mutex mutex_;
  std::int64_t solves_ = 0;
};

}  // namespace griffith
