#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "griffith/evolution.hpp"

namespace griffith {

struct ProblemSpec;

// ---------------------------------------------------------------------------
// (a) global stability
// ---------------------------------------------------------------------------

struct StabilityReport {
  double worst_margin = 0.0;  // E(state) - E(best competitor); <= tol passes
  CrackSet worst_competitor;
  double state_energy = 0.0;
  // Cheapest competitor with a strictly larger crack (the self-comparison
  // always sits at margin ~0 and is reported separately through
  // worst_margin).
  double best_strict_energy = 0.0;
  CrackSet best_strict_competitor;
  std::int64_t competitors_checked = 0;
  bool exhaustive = false;
  bool pass = false;
};

// Compares the state against every competitor crack containing it within the
// candidate set (exhaustive when feasible, otherwise random supersets plus
// all single-bond extensions). Margin is E(t)(u_i, Gamma_i) minus the
// competitor's minimal energy; positive margin means a larger crack is
// strictly cheaper.
StabilityReport check_global_stability(int time_index, double t,
                                       const DisplacementField& u,
                                       const CrackSet& crack,
                                       const ProblemSpec& spec,
                                       const Lattice& lat);

// ---------------------------------------------------------------------------
// (b) irreversibility
// ---------------------------------------------------------------------------

bool check_irreversibility(const EvolutionTrace& trace);

// ---------------------------------------------------------------------------
// (c) energy balance
// ---------------------------------------------------------------------------

struct WindowBalance {
  int i_begin = 0;
  int i_end = 0;
  double t_begin = 0.0;
  double t_end = 0.0;
  double lhs = 0.0;       // stored-energy increment plus dissipated surface
  double rhs = 0.0;       // left Riemann sum of the external-work display
  double residual = 0.0;  // |lhs - rhs|
  double normalized = 0.0;  // residual / (1 + |rhs|)
  double margin = 0.0;      // lhs - rhs (signed)
};

struct BalanceReport {
  WindowBalance whole_run;
  std::vector<WindowBalance> per_step;
  // Accumulated per-step residual: the whole-run balance error. Scales
  // linearly with the time step.
  double accumulated_residual = 0.0;
  double max_step_margin = 0.0;  // max over steps of lhs - rhs
};

// Balance over one grid window [times[i_begin], times[i_end]]:
//   lhs = W(grad u(t2)) - W(grad u(t1)) + K(Gamma(t2) \ Gamma(t1))
//   rhs = sum_i { <dW(grad u_i), grad wdot> - <dF(t_i)(u_i), wdot> } dt_i
//         + F(t2)(u(t2)) - F(t1)(u(t1)) - sum_i Fdot(t_i)(u_i) dt_i
// with left endpoints on the trace grid.
WindowBalance window_balance(const EvolutionTrace& trace,
                             const ProblemSpec& spec, const Lattice& lat,
                             int i_begin, int i_end);

BalanceReport energy_balance_report(const EvolutionTrace& trace,
                                    const ProblemSpec& spec,
                                    const Lattice& lat);

// The external-work rate at a trace step (integrand of the rhs above); also
// used by the driver to accumulate cum_work.
double work_rate(const StepRecord& step, const ProblemSpec& spec,
                 const Lattice& lat);

// ---------------------------------------------------------------------------
// Jump structure
// ---------------------------------------------------------------------------

struct JumpEvent {
  int step = 0;
  double t = 0.0;
  double d_bulk = 0.0;     // W(state) - W(continuation at the same time)
  double d_surface = 0.0;  // K increment against the previous crack
  double d_total = 0.0;    // E(state) - E(continuation): continuity gauge
};

struct JumpReport {
  std::vector<JumpEvent> events;  // steps exceeding threshold * scale
  double max_total_jump = 0.0;    // max |d_total| over all steps
  double scale = 1.0;
};

// Jumps are measured at fixed time against the elastic continuation with the
// previous crack, isolating the discontinuity from the smooth drift between
// grid times. W and K may genuinely jump at a crack event; the total energy
// jump shrinks linearly with the time step.
JumpReport detect_energy_jumps(const EvolutionTrace& trace,
                               const ProblemSpec& spec, const Lattice& lat,
                               double threshold);

// ---------------------------------------------------------------------------
// Aggregate audit
// ---------------------------------------------------------------------------

struct AuditCheck {
  std::string id;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct AuditResult {
  std::vector<AuditCheck> checks;
  BalanceReport balance;
  JumpReport jumps;
  bool all_pass = false;
};

// Runs stability at every step, irreversibility, the balance report, and the
// jump detector with the configured tolerances.
AuditResult run_audit(const EvolutionTrace& trace, const ProblemSpec& spec,
                      const Lattice& lat);

}  // namespace griffith
