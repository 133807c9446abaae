#include "griffith/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "griffith/config.hpp"

namespace griffith {

namespace {

constexpr double kCgRelTol = 1e-12;
constexpr double kDescentGradTol = 1e-10;
constexpr double kArmijo = 1e-4;
constexpr int kDescentMaxIter = 100000;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

struct Constraints {
  std::vector<char> fixed;      // per node
  std::vector<double> value;    // fixed value per node (where fixed)
  std::vector<int> free_nodes;  // ids of unconstrained nodes
  std::vector<int> pinned;      // representatives pinned on floating fragments
};

// Dirichlet values on intact anchors, plus pin constraints for fragments
// disconnected from every grip when the load cannot hold them.
Constraints build_constraints(double t, const CrackSet& crack,
                              const ProblemSpec& spec, const Lattice& lat,
                              const DisplacementField* warm) {
  const int n = lat.node_count();
  Constraints cons;
  cons.fixed.assign(static_cast<std::size_t>(n), 0);
  cons.value.assign(static_cast<std::size_t>(n), 0.0);

  for (int i = 0; i < n; ++i) {
    const int anchor = lat.anchor_of_node[static_cast<std::size_t>(i)];
    if (anchor >= 0 && !crack.contains(anchor)) {
      cons.fixed[static_cast<std::size_t>(i)] = 1;
      cons.value[static_cast<std::size_t>(i)] =
          spec.boundary.value(t, lat.nodes[static_cast<std::size_t>(i)]);
    }
  }

  UnionFind uf(n);
  for (int i = 0; i < lat.interior_bond_count; ++i) {
    if (crack.contains(i)) continue;
    const Bond& b = lat.bonds[static_cast<std::size_t>(i)];
    uf.unite(b.a, b.b);
  }
  std::vector<char> root_constrained(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    if (cons.fixed[static_cast<std::size_t>(i)])
      root_constrained[static_cast<std::size_t>(uf.find(i))] = 1;

  if (!spec.load.proper_minimum_in_u()) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      const int root = uf.find(i);
      if (root_constrained[static_cast<std::size_t>(root)]) continue;
      if (spec.load.unbounded_on_floating())
        throw EnergyUnboundedError(
            "energy unbounded: fragment containing node " + std::to_string(i) +
            " is disconnected from every grip under a dead load");
      if (seen[static_cast<std::size_t>(root)]) continue;
      seen[static_cast<std::size_t>(root)] = 1;
      // The component root is its smallest node id; pin it there.
      cons.fixed[static_cast<std::size_t>(root)] = 1;
      cons.value[static_cast<std::size_t>(root)] =
          warm ? (*warm)[static_cast<std::size_t>(root)] : 0.0;
      cons.pinned.push_back(root);
    }
  }

  for (int i = 0; i < n; ++i)
    if (!cons.fixed[static_cast<std::size_t>(i)]) cons.free_nodes.push_back(i);
  return cons;
}

struct IntactBond {
  int a, b;
  double w;        // quadratic stiffness mu * volume / h^2
  double vol;      // cross * h
  double inv_h;
  Point mid;
};

// Start from the warm iterate when given, otherwise from the boundary
// program's interior extension at time t (exact for the homogeneous families,
// a good guess otherwise).
DisplacementField starting_field(double t, const ProblemSpec& spec,
                                 const Lattice& lat, const Constraints& cons,
                                 const DisplacementField* warm) {
  const int n = lat.node_count();
  DisplacementField u(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (cons.fixed[idx])
      u[idx] = cons.value[idx];
    else
      u[idx] = warm ? (*warm)[idx] : spec.boundary.value(t, lat.nodes[idx]);
  }
  return u;
}

std::vector<IntactBond> intact_bonds(const CrackSet& crack,
                                     const ProblemSpec& spec,
                                     const Lattice& lat) {
  std::vector<IntactBond> out;
  out.reserve(static_cast<std::size_t>(lat.interior_bond_count));
  for (int i = 0; i < lat.interior_bond_count; ++i) {
    if (crack.contains(i)) continue;
    const Bond& b = lat.bonds[static_cast<std::size_t>(i)];
    const double vol = b.volume();
    out.push_back({b.a, b.b, spec.bulk.stiffness_at(b.mid) * vol / (b.h * b.h),
                   vol, 1.0 / b.h, b.mid});
  }
  return out;
}

bool quadratic_path_applies(const ProblemSpec& spec) {
  if (spec.bulk.family != BulkLaw::Family::Quadratic) return false;
  switch (spec.load.family) {
    case LoadLaw::Family::None:
    case LoadLaw::Family::QuadraticWell:
    case LoadLaw::Family::DeadLoad:
      return true;
  }
  return false;
}

// --- quadratic path: conjugate gradients on the free nodes -----------------

std::pair<DisplacementField, SolveReport> solve_quadratic(
    double t, const CrackSet& crack, const ProblemSpec& spec,
    const Lattice& lat, const Constraints& cons,
    const DisplacementField* warm) {
  const int n = lat.node_count();
  const auto bonds = intact_bonds(crack, spec, lat);

  // Load contributions: diagonal (well stiffness) and linear term.
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  std::vector<double> lin(static_cast<std::size_t>(n), 0.0);
  if (spec.load.family == LoadLaw::Family::QuadraticWell) {
    for (int i = 0; i < n; ++i) {
      const double vw = lat.node_volume[static_cast<std::size_t>(i)] *
                        spec.load.weight;
      diag[static_cast<std::size_t>(i)] = vw;
      lin[static_cast<std::size_t>(i)] =
          vw * spec.load.target(t, lat.nodes[static_cast<std::size_t>(i)]);
    }
  } else if (spec.load.family == LoadLaw::Family::DeadLoad) {
    // W - integral(F) = 1/2 u^T A u - sum_n (volume_n * dead) u_n.
    for (int i = 0; i < n; ++i)
      lin[static_cast<std::size_t>(i)] =
          lat.node_volume[static_cast<std::size_t>(i)] * spec.load.dead;
  }

  const auto apply_A = [&](const std::vector<double>& x,
                           std::vector<double>& y) {
    std::fill(y.begin(), y.end(), 0.0);
    for (const auto& b : bonds) {
      const double d = b.w * (x[static_cast<std::size_t>(b.a)] -
                              x[static_cast<std::size_t>(b.b)]);
      y[static_cast<std::size_t>(b.a)] += d;
      y[static_cast<std::size_t>(b.b)] -= d;
    }
    for (int i = 0; i < n; ++i)
      y[static_cast<std::size_t>(i)] +=
          diag[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  };

  DisplacementField u = starting_field(t, spec, lat, cons, warm);

  std::vector<double> Au(static_cast<std::size_t>(n));
  apply_A(u, Au);
  std::vector<double> r(static_cast<std::size_t>(n), 0.0);
  for (int i : cons.free_nodes)
    r[static_cast<std::size_t>(i)] =
        lin[static_cast<std::size_t>(i)] - Au[static_cast<std::size_t>(i)];

  // Scale the stopping test by the right-hand side the free system sees.
  double rhs_norm2 = 0.0;
  {
    DisplacementField u0(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      if (cons.fixed[static_cast<std::size_t>(i)])
        u0[static_cast<std::size_t>(i)] = cons.value[static_cast<std::size_t>(i)];
    std::vector<double> Au0(static_cast<std::size_t>(n));
    apply_A(u0, Au0);
    for (int i : cons.free_nodes) {
      const double b = lin[static_cast<std::size_t>(i)] -
                       Au0[static_cast<std::size_t>(i)];
      rhs_norm2 += b * b;
    }
  }
  const double stop2 =
      std::max(kCgRelTol * kCgRelTol * rhs_norm2, 1e-320);

  std::vector<double> p = r, Ap(static_cast<std::size_t>(n));
  double rr = 0.0;
  for (int i : cons.free_nodes) {
    const double ri = r[static_cast<std::size_t>(i)];
    rr += ri * ri;
  }
  SolveReport report;
  report.quadratic_path = true;
  report.pinned_nodes = cons.pinned;
  const int max_iter = 10 * static_cast<int>(cons.free_nodes.size()) + 100;
  int it = 0;
  while (rr > stop2 && it < max_iter) {
    apply_A(p, Ap);
    double pAp = 0.0;
    for (int i : cons.free_nodes)
      pAp += p[static_cast<std::size_t>(i)] * Ap[static_cast<std::size_t>(i)];
    if (pAp <= 0.0) break;  // numerically exhausted
    const double alpha = rr / pAp;
    for (int i : cons.free_nodes) {
      u[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
      r[static_cast<std::size_t>(i)] -= alpha * Ap[static_cast<std::size_t>(i)];
    }
    double rr_new = 0.0;
    for (int i : cons.free_nodes) {
      const double ri = r[static_cast<std::size_t>(i)];
      rr_new += ri * ri;
    }
    const double beta = rr_new / rr;
    for (int i : cons.free_nodes)
      p[static_cast<std::size_t>(i)] =
          r[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
    rr = rr_new;
    ++it;
  }
  report.iterations = it;
  report.grad_norm = std::sqrt(rr);
  return {std::move(u), std::move(report)};
}

// --- general convex path: gradient descent with backtracking ---------------

std::pair<DisplacementField, SolveReport> solve_descent(
    double t, const CrackSet& crack, const ProblemSpec& spec,
    const Lattice& lat, const Constraints& cons,
    const DisplacementField* warm) {
  const int n = lat.node_count();
  const auto bonds = intact_bonds(crack, spec, lat);

  DisplacementField u = starting_field(t, spec, lat, cons, warm);

  const auto energy = [&](const DisplacementField& v) {
    double e = 0.0;
    for (const auto& b : bonds)
      e += b.vol * spec.bulk.density(
                       b.mid, (v[static_cast<std::size_t>(b.b)] -
                               v[static_cast<std::size_t>(b.a)]) *
                                  b.inv_h);
    if (spec.load.family != LoadLaw::Family::None)
      for (int i = 0; i < n; ++i)
        e -= lat.node_volume[static_cast<std::size_t>(i)] *
             spec.load.F(t, lat.nodes[static_cast<std::size_t>(i)],
                         v[static_cast<std::size_t>(i)]);
    return e;
  };
  const auto gradient = [&](const DisplacementField& v,
                            std::vector<double>& g) {
    std::fill(g.begin(), g.end(), 0.0);
    for (const auto& b : bonds) {
      const double s =
          b.vol *
          spec.bulk.stress(b.mid, (v[static_cast<std::size_t>(b.b)] -
                                   v[static_cast<std::size_t>(b.a)]) *
                                      b.inv_h) *
          b.inv_h;
      g[static_cast<std::size_t>(b.b)] += s;
      g[static_cast<std::size_t>(b.a)] -= s;
    }
    if (spec.load.family != LoadLaw::Family::None)
      for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] -=
            lat.node_volume[static_cast<std::size_t>(i)] *
            spec.load.dF_du(t, lat.nodes[static_cast<std::size_t>(i)],
                            v[static_cast<std::size_t>(i)]);
    for (int i = 0; i < n; ++i)
      if (cons.fixed[static_cast<std::size_t>(i)])
        g[static_cast<std::size_t>(i)] = 0.0;
  };

  SolveReport report;
  report.pinned_nodes = cons.pinned;
  std::vector<double> g(static_cast<std::size_t>(n), 0.0);
  DisplacementField trial(static_cast<std::size_t>(n));

  const auto free_inf_norm = [&](const std::vector<double>& v) {
    double m = 0.0;
    for (int i : cons.free_nodes)
      m = std::max(m, std::fabs(v[static_cast<std::size_t>(i)]));
    return m;
  };

  // Phase 1: Armijo backtracking on the energy. It stops resolving progress
  // once energy differences fall below floating-point resolution, a few
  // orders of magnitude before the gradient hits its own floor.
  double e = energy(u);
  double alpha = 1.0;
  int it = 0;
  for (; it < kDescentMaxIter / 2; ++it) {
    gradient(u, g);
    double gmax = 0.0, gg = 0.0;
    for (int i : cons.free_nodes) {
      const double gi = g[static_cast<std::size_t>(i)];
      gmax = std::max(gmax, std::fabs(gi));
      gg += gi * gi;
    }
    report.iterations = it;
    report.grad_norm = gmax;
    if (gmax <= kDescentGradTol * std::max(1.0, std::fabs(e))) {
      report.energy = e;
      return {std::move(u), std::move(report)};
    }
    alpha = std::min(alpha * 2.0, 1e6);
    bool accepted = false;
    while (alpha > 1e-18) {
      trial = u;
      for (int i : cons.free_nodes)
        trial[static_cast<std::size_t>(i)] -=
            alpha * g[static_cast<std::size_t>(i)];
      const double et = energy(trial);
      if (et <= e - kArmijo * alpha * gg) {
        u.swap(trial);
        e = et;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    if (gg * alpha <= 1e-18 * std::max(1.0, std::fabs(e))) break;
  }

  // Phase 2: Barzilai-Borwein steps monitored on the gradient norm alone.
  // Near the minimizer the analytic gradient stays accurate to machine
  // precision even where energy differences vanish.
  gradient(u, g);
  double gmax = free_inf_norm(g);
  DisplacementField best_u = u;
  double best_g = gmax;
  double step = (alpha > 1e-16 && alpha < 1e3) ? alpha : 1.0;
  DisplacementField u_prev(u.size());
  std::vector<double> g_prev(g.size());
  int bad_streak = 0;
  for (int polish = 0; polish < 20000; ++polish) {
    ++report.iterations;
    if (gmax <= kDescentGradTol * std::max(1.0, std::fabs(e))) break;
    u_prev = u;
    g_prev = g;
    for (int i : cons.free_nodes)
      u[static_cast<std::size_t>(i)] -= step * g[static_cast<std::size_t>(i)];
    gradient(u, g);
    gmax = free_inf_norm(g);
    if (gmax < best_g) {
      best_g = gmax;
      best_u = u;
      bad_streak = 0;
    } else if (++bad_streak > 200) {
      break;  // improvement floor reached
    }
    double ss = 0.0, sy = 0.0;
    for (int i : cons.free_nodes) {
      const auto idx = static_cast<std::size_t>(i);
      const double s = u[idx] - u_prev[idx];
      const double y = g[idx] - g_prev[idx];
      ss += s * s;
      sy += s * y;
    }
    if (sy > 0.0 && ss > 0.0)
      step = std::min(std::max(ss / sy, 1e-12), 1e6);
    else
      step *= 0.5;
    if (gmax > 1e3 * best_g && best_g > 0.0) {
      u = best_u;  // diverging excursion: restart from the best point
      gradient(u, g);
      gmax = free_inf_norm(g);
      step *= 0.25;
    }
  }
  u = best_u;
  e = energy(u);
  report.grad_norm = best_g;
  report.energy = e;
  if (best_g <= kDescentGradTol * std::max(1.0, std::fabs(e)))
    return {std::move(u), std::move(report)};
  throw NonConvergenceError(
      "descent did not reach the gradient tolerance (best gradient norm " +
          std::to_string(best_g) + " after " +
          std::to_string(report.iterations) + " iterations)",
      u, report);
}

}  // namespace

std::pair<DisplacementField, SolveReport> minimize_displacement(
    double t, const CrackSet& crack, const ProblemSpec& spec,
    const Lattice& lat, const DisplacementField* warm_start) {
  const Constraints cons = build_constraints(t, crack, spec, lat, warm_start);
  auto result = quadratic_path_applies(spec)
                    ? solve_quadratic(t, crack, spec, lat, cons, warm_start)
                    : solve_descent(t, crack, spec, lat, cons, warm_start);
  result.second.energy =
      bulk_energy(lat, spec.bulk, result.first, crack) -
      force_work(spec.load, t, result.first, lat);
  return result;
}

double elastic_energy_of_crack(double t, const CrackSet& crack,
                               const ProblemSpec& spec, const Lattice& lat) {
  return minimize_displacement(t, crack, spec, lat).second.energy;
}

CrackEnergyEvaluator::Entry CrackEnergyEvaluator::elastic_at(
    int time_index, double t, const CrackSet& crack,
    const DisplacementField* warm_start) {
  const std::pair<int, std::vector<int>> key{time_index, crack.ids()};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  auto [u, report] = minimize_displacement(t, crack, spec_, lat_, warm_start);
  Entry entry;
  entry.bulk = bulk_energy(lat_, spec_.bulk, u, crack);
  entry.force = force_work(spec_.load, t, u, lat_);
  entry.elastic = entry.bulk - entry.force;
  std::lock_guard<std::mutex> lock(mutex_);
  ++solves_;
  return memo_.emplace(key, entry).first->second;
}

std::pair<DisplacementField, CrackEnergyEvaluator::Entry>
CrackEnergyEvaluator::solve_at(int time_index, double t, const CrackSet& crack,
                               const DisplacementField* warm_start) {
  auto [u, report] = minimize_displacement(t, crack, spec_, lat_, warm_start);
  Entry entry;
  entry.bulk = bulk_energy(lat_, spec_.bulk, u, crack);
  entry.force = force_work(spec_.load, t, u, lat_);
  entry.elastic = entry.bulk - entry.force;
  const std::pair<int, std::vector<int>> key{time_index, crack.ids()};
  std::lock_guard<std::mutex> lock(mutex_);
  ++solves_;
  memo_.emplace(key, entry);
  return {std::move(u), entry};
}

}  // namespace griffith
