#include "griffith/evolution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "griffith/audit.hpp"
#include "griffith/config.hpp"

namespace griffith {

// ===========================================================================
// TimeGrid
// ===========================================================================

TimeGrid TimeGrid::uniform(double dt, double t_end) {
  if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (t_end < 0.0) throw ConfigError("time.T must be nonnegative");
  const int n = static_cast<int>(std::floor(t_end / dt + 1e-9));
  TimeGrid grid;
  grid.times.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) grid.times.push_back(i * dt);
  return grid;
}

TimeGrid TimeGrid::explicit_times(std::vector<double> times) {
  if (times.empty()) throw ConfigError("time.times must be nonempty");
  if (times.front() != 0.0) throw ConfigError("time grid must start at 0");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw ConfigError("time grid must be strictly increasing");
  TimeGrid grid;
  grid.times = std::move(times);
  return grid;
}

double TimeGrid::max_step() const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    m = std::max(m, times[i + 1] - times[i]);
  return m;
}

// ===========================================================================
// Candidate bonds
// ===========================================================================

std::vector<int> resolve_candidate_bonds(const CandidateFilter& filter,
                                         const Lattice& lat) {
  std::vector<int> out;
  switch (filter.kind) {
    case CandidateFilter::Kind::All:
      for (int i = 0; i < lat.bond_count(); ++i) out.push_back(i);
      break;
    case CandidateFilter::Kind::Interior:
      for (int i = 0; i < lat.interior_bond_count; ++i) out.push_back(i);
      break;
    case CandidateFilter::Kind::Anchors:
      for (int i = lat.interior_bond_count; i < lat.bond_count(); ++i)
        out.push_back(i);
      break;
    case CandidateFilter::Kind::List:
      out = filter.ids;
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      for (int id : out)
        if (id < 0 || id >= lat.bond_count())
          throw ConfigError("strategy.candidates lists unknown bond id " +
                            std::to_string(id));
      break;
    case CandidateFilter::Kind::Box:
      for (int i = 0; i < lat.bond_count(); ++i) {
        const Point m = lat.bonds[static_cast<std::size_t>(i)].mid;
        if (m.x >= filter.box_min_x && m.x <= filter.box_max_x &&
            m.y >= filter.box_min_y && m.y <= filter.box_max_y)
          out.push_back(i);
      }
      break;
  }
  return out;
}

namespace {

double tie_tau(double tie_tolerance, double energy) {
  return tie_tolerance * std::max(1.0, std::fabs(energy));
}

CrackSet crack_from_mask(const CrackSet& base, std::uint64_t mask,
                         const std::vector<int>& candidates) {
  std::vector<int> ids = base.ids();
  for (std::size_t j = 0; j < candidates.size(); ++j)
    if (mask & (1ull << j)) ids.push_back(candidates[j]);
  return CrackSet(std::move(ids));
}

// All index subsets of size `count` from {0..m-1} in lexicographic order of
// the sorted index lists; with candidates sorted ascending this is exactly
// the tie-preference order within one cardinality level.
std::vector<std::uint64_t> level_masks(int m, int count) {
  std::vector<std::uint64_t> masks;
  if (count == 0) {
    masks.push_back(0);
    return masks;
  }
  std::vector<int> idx(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) idx[static_cast<std::size_t>(j)] = j;
  while (true) {
    std::uint64_t mask = 0;
    for (int j : idx) mask |= (1ull << j);
    masks.push_back(mask);
    int j = count - 1;
    while (j >= 0 && idx[static_cast<std::size_t>(j)] == m - count + j) --j;
    if (j < 0) break;
    ++idx[static_cast<std::size_t>(j)];
    for (int l = j + 1; l < count; ++l)
      idx[static_cast<std::size_t>(l)] = idx[static_cast<std::size_t>(l - 1)] + 1;
  }
  return masks;
}

struct SearchState {
  std::uint64_t holder = 0;
  double holder_energy = 0.0;
  double min_energy = 0.0;
  std::int64_t evaluated = 0;
};

constexpr double kSkipped = std::numeric_limits<double>::infinity();

}  // namespace

// ===========================================================================
// incremental_step
// ===========================================================================

StepOutcome incremental_step(int time_index, double t, const CrackSet& previous,
                             const ProblemSpec& spec, const Lattice& lat,
                             CrackEnergyEvaluator& eval,
                             const DisplacementField* warm_start) {
  std::vector<int> candidates;
  for (int id : resolve_candidate_bonds(spec.strategy.candidates, lat))
    if (!previous.contains(id)) candidates.push_back(id);
  const int m = static_cast<int>(candidates.size());
  const double tie_tol = spec.strategy.tie_tolerance;

  // Base state: elastic continuation with the unchanged crack.
  const auto base = eval.elastic_at(time_index, t, previous, warm_start);
  const double surf_prev = surface_energy(lat, spec.toughness, previous);
  const EnergyBreakdown continuation =
      EnergyBreakdown::make(base.bulk, surf_prev, base.force);

  SearchState st;
  st.holder = 0;
  st.holder_energy = base.elastic + surf_prev;
  st.min_energy = st.holder_energy;
  st.evaluated = 1;

  bool greedy = spec.strategy.mode == StrategyConfig::Mode::Greedy;
  if (!greedy && m > 0) {
    const bool too_big =
        m >= 63 || (1ull << m) > spec.strategy.exhaustive_limit;
    if (too_big) {
      if (!spec.strategy.greedy_fallback)
        throw ConfigError(
            "exhaustive search over " + std::to_string(m) +
            " candidate bonds needs " +
            (m >= 63 ? std::string(">=2^63") : std::to_string(1ull << m)) +
            " evaluations, above the limit of " +
            std::to_string(spec.strategy.exhaustive_limit) +
            "; enable greedy fallback or restrict the candidate set");
      greedy = true;
    }
  }

  if (!greedy && m > 0) {
    // Bulk floor: the elastic part of any superset is bounded below by the
    // fully broken candidate set (crack growth only releases energy).
    double floor_elastic;
    try {
      floor_elastic =
          eval.elastic_at(time_index, t,
                          crack_from_mask(previous, (m >= 63) ? ~0ull
                                          : ((1ull << m) - 1ull),
                                          candidates),
                          warm_start)
              .elastic;
      ++st.evaluated;
    } catch (const EnergyUnboundedError&) {
      floor_elastic = -std::numeric_limits<double>::infinity();
    }

    // Per-candidate surface increments and the cheapest prefix sums, used
    // only for pruning bounds (the incumbent comparison always re-evaluates
    // the surface kernel on the full crack set).
    std::vector<double> cost(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      const Bond& b =
          lat.bonds[static_cast<std::size_t>(candidates[static_cast<std::size_t>(j)])];
      cost[static_cast<std::size_t>(j)] =
          spec.toughness.value(b.mid, b.dir) * b.cross;
    }
    std::vector<double> cheapest = cost;
    std::sort(cheapest.begin(), cheapest.end());
    std::vector<double> prefix(static_cast<std::size_t>(m) + 1, 0.0);
    for (int c = 0; c < m; ++c)
      prefix[static_cast<std::size_t>(c) + 1] =
          prefix[static_cast<std::size_t>(c)] + cheapest[static_cast<std::size_t>(c)];

    for (int count = 1; count <= m; ++count) {
      const double level_bound =
          floor_elastic + surf_prev + prefix[static_cast<std::size_t>(count)];
      if (level_bound > st.min_energy + tie_tau(tie_tol, st.min_energy)) break;

      const auto masks = level_masks(m, count);
      constexpr std::size_t kChunk = 1024;
      std::vector<double> energies(masks.size(), kSkipped);
      for (std::size_t lo = 0; lo < masks.size(); lo += kChunk) {
        const std::size_t hi = std::min(lo + kChunk, masks.size());
        const double e_ref = st.min_energy;
        const double tau_ref = tie_tau(tie_tol, e_ref);
        // Solver errors (unbounded fragments, non-convergence) must not fly
        // out of the parallel region; rethrow the lowest-index one.
        std::vector<std::exception_ptr> errors(hi - lo);
#pragma omp parallel for schedule(static) if (hi - lo > 16)
        for (long long k = static_cast<long long>(lo);
             k < static_cast<long long>(hi); ++k) {
          try {
            const std::uint64_t mask = masks[static_cast<std::size_t>(k)];
            double surf_inc = 0.0;
            for (int j = 0; j < m; ++j)
              if (mask & (1ull << j))
                surf_inc += cost[static_cast<std::size_t>(j)];
            if (floor_elastic + surf_prev + surf_inc > e_ref + tau_ref)
              continue;
            const CrackSet crack = crack_from_mask(previous, mask, candidates);
            const auto entry = eval.elastic_at(time_index, t, crack, warm_start);
            energies[static_cast<std::size_t>(k)] =
                entry.elastic + surface_energy(lat, spec.toughness, crack);
          } catch (...) {
            errors[static_cast<std::size_t>(k) - lo] = std::current_exception();
          }
        }
        for (const auto& err : errors)
          if (err) std::rethrow_exception(err);
        for (std::size_t k = lo; k < hi; ++k) {
          const double e = energies[k];
          if (e == kSkipped) continue;
          ++st.evaluated;
          if (e < st.min_energy - tie_tau(tie_tol, st.min_energy)) {
            st.holder = masks[k];
            st.holder_energy = e;
            st.min_energy = e;
          } else if (e < st.min_energy) {
            st.min_energy = e;
          }
        }
      }
    }
  } else if (greedy && m > 0) {
    // Best single-bond extensions until none strictly improves.
    CrackSet current = previous;
    double e_cur = st.holder_energy;
    std::vector<char> used(static_cast<std::size_t>(m), 0);
    for (int round = 0; round < m; ++round) {
      std::vector<double> energies(static_cast<std::size_t>(m), kSkipped);
      std::vector<std::exception_ptr> errors(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(static) if (m > 16)
      for (int j = 0; j < m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        try {
          const CrackSet crack =
              current.unite(candidates[static_cast<std::size_t>(j)]);
          const auto entry = eval.elastic_at(time_index, t, crack, warm_start);
          energies[static_cast<std::size_t>(j)] =
              entry.elastic + surface_energy(lat, spec.toughness, crack);
        } catch (...) {
          errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
      }
      for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
      int best = -1;
      for (int j = 0; j < m; ++j) {
        if (energies[static_cast<std::size_t>(j)] == kSkipped) continue;
        ++st.evaluated;
        if (best < 0 ||
            energies[static_cast<std::size_t>(j)] < energies[static_cast<std::size_t>(best)])
          best = j;
      }
      if (best < 0) break;
      const double e_best = energies[static_cast<std::size_t>(best)];
      if (!(e_best < e_cur - tie_tau(tie_tol, e_cur))) break;
      current = current.unite(candidates[static_cast<std::size_t>(best)]);
      used[static_cast<std::size_t>(best)] = 1;
      st.holder |= (1ull << best);
      e_cur = e_best;
    }
    st.holder_energy = e_cur;
  }

  const CrackSet winner = crack_from_mask(previous, st.holder, candidates);
  auto [u, entry] = eval.solve_at(time_index, t, winner, warm_start);

  StepOutcome out;
  out.u = std::move(u);
  out.crack = winner;
  out.energy = EnergyBreakdown::make(
      entry.bulk, surface_energy(lat, spec.toughness, winner), entry.force);
  out.continuation = continuation;
  out.heuristic = greedy;
  out.candidates_evaluated = st.evaluated;
  return out;
}

// ===========================================================================
// run_evolution
// ===========================================================================

EvolutionTrace run_evolution(const ProblemSpec& spec, const Lattice& lat) {
  const ValidationReport validation = validate_problem(spec, lat);
  if (validation.hard_failure())
    throw ConfigError("problem validation failed:\n" + validation.summary());

  EvolutionTrace trace;
  trace.grid = spec.time.explicit_times.empty()
                   ? TimeGrid::uniform(spec.time.dt, spec.time.t_end)
                   : TimeGrid::explicit_times(spec.time.explicit_times);

  CrackEnergyEvaluator eval(spec, lat);
  const CrackSet initial_crack{spec.initial_crack};

  try {
    for (int i = 0; i < trace.grid.step_count(); ++i) {
      const double t = trace.grid.times[static_cast<std::size_t>(i)];
      const CrackSet& prev =
          (i == 0) ? initial_crack : trace.steps.back().crack;
      const DisplacementField* warm =
          (i == 0) ? nullptr : &trace.steps.back().u;

      StepOutcome out = incremental_step(i, t, prev, spec, lat, eval, warm);

      if (i == 0 && !(out.crack == initial_crack))
        throw ConfigError(
            "initial configuration is not globally stable at t=0: a larger "
            "crack lowers the energy by " +
            std::to_string(out.continuation.total - out.energy.total));

      StepRecord rec;
      rec.index = i;
      rec.t = t;
      rec.crack = std::move(out.crack);
      rec.u = std::move(out.u);
      rec.energy = out.energy;
      rec.continuation = out.continuation;
      rec.heuristic = out.heuristic;
      rec.candidates_evaluated = out.candidates_evaluated;
      if (i == 0) {
        rec.cum_work = 0.0;
      } else {
        const StepRecord& prev_rec = trace.steps.back();
        const double dt = t - prev_rec.t;
        rec.cum_work = prev_rec.cum_work + work_rate(prev_rec, spec, lat) * dt +
                       (rec.energy.force_work - prev_rec.energy.force_work);
      }
      trace.steps.push_back(std::move(rec));
    }
    trace.complete = true;
  } catch (const ConfigError&) {
    throw;  // setup problems abort the run outright
  } catch (const std::exception& e) {
    trace.complete = false;
    trace.abort_reason = e.what();
  }
  return trace;
}

const StepRecord& interpolate(const EvolutionTrace& trace, double t) {
  if (trace.steps.empty()) throw std::out_of_range("interpolate: empty trace");
  const double t_end = trace.grid.t_end();
  if (t < 0.0 || t > t_end)
    throw std::out_of_range("interpolate: t outside [0, T]");
  // Largest grid time <= t.
  auto it = std::upper_bound(trace.grid.times.begin(), trace.grid.times.end(), t);
  const auto idx = static_cast<std::size_t>(it - trace.grid.times.begin()) - 1;
  return trace.steps.at(idx);
}

}  // namespace griffith
