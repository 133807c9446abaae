#include "griffith/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "griffith/config.hpp"

namespace griffith {

namespace {

CrackSet crack_with_bits(const CrackSet& base, std::uint64_t mask,
                         const std::vector<int>& candidates) {
  std::vector<int> ids = base.ids();
  for (std::size_t j = 0; j < candidates.size(); ++j)
    if (mask & (1ull << j)) ids.push_back(candidates[j]);
  return CrackSet(std::move(ids));
}

}  // namespace

// ===========================================================================
// (a) global stability
// ===========================================================================

StabilityReport check_global_stability(int time_index, double t,
                                       const DisplacementField& u,
                                       const CrackSet& crack,
                                       const ProblemSpec& spec,
                                       const Lattice& lat) {
  StabilityReport report;
  const double e_state = total_energy(t, u, crack, spec, lat).total;

  std::vector<int> candidates;
  for (int id : resolve_candidate_bonds(spec.strategy.candidates, lat))
    if (!crack.contains(id)) candidates.push_back(id);
  const int m = static_cast<int>(candidates.size());

  CrackEnergyEvaluator eval(spec, lat);
  report.state_energy = e_state;
  report.worst_margin = -std::numeric_limits<double>::infinity();
  report.best_strict_energy = std::numeric_limits<double>::infinity();

  const auto consider = [&](const std::vector<std::uint64_t>& masks) {
    std::vector<double> energies(masks.size());
    std::vector<std::exception_ptr> errors(masks.size());
#pragma omp parallel for schedule(static) if (masks.size() > 16)
    for (long long k = 0; k < static_cast<long long>(masks.size()); ++k) {
      try {
        const CrackSet comp = crack_with_bits(
            crack, masks[static_cast<std::size_t>(k)], candidates);
        const auto entry = eval.elastic_at(time_index, t, comp, &u);
        energies[static_cast<std::size_t>(k)] =
            entry.elastic + surface_energy(lat, spec.toughness, comp);
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
    for (std::size_t k = 0; k < masks.size(); ++k) {
      const double margin = e_state - energies[k];
      ++report.competitors_checked;
      if (margin > report.worst_margin) {
        report.worst_margin = margin;
        report.worst_competitor = crack_with_bits(crack, masks[k], candidates);
      }
      if (masks[k] != 0 && energies[k] < report.best_strict_energy) {
        report.best_strict_energy = energies[k];
        report.best_strict_competitor =
            crack_with_bits(crack, masks[k], candidates);
      }
    }
  };

  const bool feasible =
      m < 63 && (m == 0 || (1ull << m) <= spec.strategy.exhaustive_limit);
  if (feasible) {
    report.exhaustive = true;
    std::vector<std::uint64_t> masks;
    masks.reserve(m == 0 ? 1 : (1ull << m));
    for (std::uint64_t mask = 0; mask < (m == 0 ? 1ull : (1ull << m)); ++mask)
      masks.push_back(mask);
    consider(masks);
  } else {
    report.exhaustive = false;
    std::vector<std::uint64_t> masks;
    masks.push_back(0);
    for (int j = 0; j < m && j < 63; ++j) masks.push_back(1ull << j);
    std::mt19937_64 rng(spec.seed ^ (0x9e3779b97f4a7c15ull *
                                     static_cast<std::uint64_t>(time_index + 1)));
    for (int s = 0; s < spec.audit.competitor_samples; ++s) {
      std::uint64_t mask = rng();
      if (m < 63) mask &= (1ull << m) - 1ull;
      masks.push_back(mask);
    }
    consider(masks);
  }

  report.pass = report.worst_margin <= spec.audit.stability_tol;
  return report;
}

// ===========================================================================
// (b) irreversibility
// ===========================================================================

bool check_irreversibility(const EvolutionTrace& trace) {
  for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i)
    if (!crack_contains(trace.steps[i].crack, trace.steps[i + 1].crack))
      return false;
  return true;
}

// ===========================================================================
// (c) energy balance
// ===========================================================================

double work_rate(const StepRecord& step, const ProblemSpec& spec,
                 const Lattice& lat) {
  const DisplacementField rate_ext = boundary_rate_extension(spec.boundary, lat);
  const BondField rate_strain = strain_field(rate_ext, lat);
  const BondField xi = strain_field(step.u, lat);
  double rate = pair_dW(xi, rate_strain, spec.bulk, lat, step.crack);
  if (spec.load.family != LoadLaw::Family::None) {
    rate -= pair_dF(step.t, step.u, rate_ext, spec.load, lat);
    rate -= dF_dt(step.t, step.u, spec.load, lat);
  }
  return rate;
}

WindowBalance window_balance(const EvolutionTrace& trace,
                             const ProblemSpec& spec, const Lattice& lat,
                             int i_begin, int i_end) {
  const auto& steps = trace.steps;
  WindowBalance w;
  w.i_begin = i_begin;
  w.i_end = i_end;
  w.t_begin = steps.at(static_cast<std::size_t>(i_begin)).t;
  w.t_end = steps.at(static_cast<std::size_t>(i_end)).t;

  const StepRecord& a = steps[static_cast<std::size_t>(i_begin)];
  const StepRecord& b = steps[static_cast<std::size_t>(i_end)];
  const CrackSet grown = b.crack.minus(a.crack);
  w.lhs = (b.energy.bulk - a.energy.bulk) +
          surface_energy(lat, spec.toughness, grown);

  double rhs = 0.0;
  for (int i = i_begin; i < i_end; ++i) {
    const StepRecord& s = steps[static_cast<std::size_t>(i)];
    const double dt = steps[static_cast<std::size_t>(i) + 1].t - s.t;
    rhs += work_rate(s, spec, lat) * dt;
  }
  rhs += b.energy.force_work - a.energy.force_work;
  w.rhs = rhs;
  w.residual = std::fabs(w.lhs - w.rhs);
  w.normalized = w.residual / (1.0 + std::fabs(w.rhs));
  w.margin = w.lhs - w.rhs;
  return w;
}

BalanceReport energy_balance_report(const EvolutionTrace& trace,
                                    const ProblemSpec& spec,
                                    const Lattice& lat) {
  BalanceReport report;
  const int n = static_cast<int>(trace.steps.size());
  if (n == 0) return report;
  report.whole_run = window_balance(trace, spec, lat, 0, n - 1);
  report.max_step_margin = -std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < n; ++i) {
    report.per_step.push_back(window_balance(trace, spec, lat, i, i + 1));
    report.accumulated_residual += report.per_step.back().residual;
    report.max_step_margin =
        std::max(report.max_step_margin, report.per_step.back().margin);
  }
  if (report.per_step.empty()) report.max_step_margin = 0.0;
  return report;
}

// ===========================================================================
// Jump structure
// ===========================================================================

JumpReport detect_energy_jumps(const EvolutionTrace& trace,
                               const ProblemSpec& spec, const Lattice& lat,
                               double threshold) {
  JumpReport report;
  double scale = 1.0;
  for (const auto& s : trace.steps)
    scale = std::max(scale, std::fabs(s.energy.total));
  report.scale = scale;

  CrackEnergyEvaluator eval(spec, lat);
  for (std::size_t i = 1; i < trace.steps.size(); ++i) {
    const StepRecord& cur = trace.steps[i];
    const StepRecord& prev = trace.steps[i - 1];
    double d_bulk = 0.0, d_surface = 0.0, d_total = 0.0;
    if (!(cur.crack == prev.crack)) {
      // Elastic continuation with the old crack at the same time: the
      // reference state the trace jumped away from.
      const auto entry = eval.elastic_at(cur.index, cur.t, prev.crack, &prev.u);
      const double cont_total =
          entry.elastic + surface_energy(lat, spec.toughness, prev.crack);
      d_bulk = cur.energy.bulk - entry.bulk;
      d_surface = cur.energy.surface - prev.energy.surface;
      d_total = cur.energy.total - cont_total;
    }
    report.max_total_jump = std::max(report.max_total_jump, std::fabs(d_total));
    if (std::fabs(d_bulk) > threshold * scale ||
        std::fabs(d_surface) > threshold * scale)
      report.events.push_back(
          {cur.index, cur.t, d_bulk, d_surface, d_total});
  }
  return report;
}

// ===========================================================================
// Aggregate audit
// ===========================================================================

AuditResult run_audit(const EvolutionTrace& trace, const ProblemSpec& spec,
                      const Lattice& lat) {
  AuditResult result;
  const int n = static_cast<int>(trace.steps.size());

  double scale = 1.0;
  for (const auto& s : trace.steps)
    scale = std::max(scale, std::fabs(s.energy.total));

  {
    AuditCheck c{"global_stability", true, 0.0, spec.audit.stability_tol, ""};
    double worst = -std::numeric_limits<double>::infinity();
    int worst_step = -1;
    bool exhaustive = true;
    for (const auto& s : trace.steps) {
      const auto rep =
          check_global_stability(s.index, s.t, s.u, s.crack, spec, lat);
      exhaustive = exhaustive && rep.exhaustive;
      if (rep.worst_margin > worst) {
        worst = rep.worst_margin;
        worst_step = s.index;
      }
    }
    c.value = (n > 0) ? worst : 0.0;
    c.pass = c.value <= c.tolerance;
    std::ostringstream os;
    os << "worst margin " << c.value << " at step " << worst_step
       << (exhaustive ? " (exhaustive competitors)" : " (sampled competitors)");
    c.detail = os.str();
    result.checks.push_back(c);
  }

  {
    AuditCheck c{"irreversibility", check_irreversibility(trace), 0.0, 0.0, ""};
    c.detail = c.pass ? "crack sets nested along the trace"
                      : "a later crack set fails to contain an earlier one";
    result.checks.push_back(c);
  }

  result.balance = energy_balance_report(trace, spec, lat);
  const double balance_tol =
      spec.audit.balance_factor * trace.grid.max_step() * scale;
  {
    AuditCheck c{"energy_balance_accumulated",
                 result.balance.accumulated_residual <= balance_tol,
                 result.balance.accumulated_residual, balance_tol,
                 "sum of per-step |lhs - rhs|"};
    result.checks.push_back(c);
  }
  {
    AuditCheck c{"energy_balance_whole_window",
                 result.balance.whole_run.residual <= balance_tol,
                 result.balance.whole_run.residual, balance_tol,
                 "|lhs - rhs| over the full run window"};
    result.checks.push_back(c);
  }

  result.jumps = detect_energy_jumps(trace, spec, lat, spec.audit.jump_threshold);
  {
    AuditCheck c{"total_energy_continuity",
                 result.jumps.max_total_jump <= balance_tol,
                 result.jumps.max_total_jump, balance_tol,
                 "max same-time |E(state) - E(continuation)|"};
    result.checks.push_back(c);
  }

  result.all_pass = true;
  for (const auto& c : result.checks) result.all_pass = result.all_pass && c.pass;
  return result;
}

}  // namespace griffith
