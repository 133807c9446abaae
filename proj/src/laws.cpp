#include "griffith/laws.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "griffith/config.hpp"
#include "griffith/lattice.hpp"

namespace griffith {

// ===========================================================================
// SpatialField
// ===========================================================================

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double hash01(std::uint64_t seed, Point p) {
  // Quantized position keeps the field an exact function of the coordinates.
  const auto qx = static_cast<std::uint64_t>(
      static_cast<std::int64_t>(std::llround(p.x * 1048576.0)));
  const auto qy = static_cast<std::uint64_t>(
      static_cast<std::int64_t>(std::llround(p.y * 1048576.0)));
  std::uint64_t h = splitmix64(seed ^ splitmix64(qx ^ splitmix64(qy)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

double SpatialField::operator()(Point p) const {
  switch (family) {
    case Family::Constant:
      return 1.0;
    case Family::Step: {
      const double coord = (axis == 0) ? p.x : p.y;
      return coord < threshold ? low : high;
    }
    case Family::Linear:
      return a + b * p.x + c * p.y;
    case Family::Random:
      return low + (high - low) * hash01(seed, p);
  }
  return 1.0;
}

// ===========================================================================
// BulkLaw
// ===========================================================================

double BulkLaw::density(Point x, double xi) const {
  const double m = stiffness_at(x);
  const double r = std::fabs(xi);
  switch (family) {
    case Family::Quadratic:
      return 0.5 * m * xi * xi;
    case Family::PPower:
      return (m / p) * std::pow(r, p);
    case Family::FlatWell: {
      const double e = r - 1.0;
      return e > 0.0 ? m * e * e : 0.0;
    }
  }
  return 0.0;
}

double BulkLaw::stress(Point x, double xi) const {
  const double m = stiffness_at(x);
  switch (family) {
    case Family::Quadratic:
      return m * xi;
    case Family::PPower: {
      if (xi == 0.0) return 0.0;
      const double r = std::fabs(xi);
      return m * std::pow(r, p - 1.0) * (xi > 0.0 ? 1.0 : -1.0);
    }
    case Family::FlatWell: {
      const double r = std::fabs(xi);
      const double e = r - 1.0;
      if (e <= 0.0) return 0.0;
      return 2.0 * m * e * (xi > 0.0 ? 1.0 : -1.0);
    }
  }
  return 0.0;
}

double BulkLaw::density(Point x, Vec xi) const { return density(x, norm(xi)); }

Vec BulkLaw::stress(Point x, Vec xi) const {
  const double r = norm(xi);
  if (r == 0.0) return {0.0, 0.0};
  const double s = stress(x, r);  // radial magnitude, xi >= 0 branch
  return (s / r) * xi;
}

void BulkLaw::growth_constants(double mod_lo, double mod_hi, double& c1,
                               double& c2, double& c3) const {
  const double m_lo = mu * mod_lo;
  const double m_hi = mu * mod_hi;
  switch (family) {
    case Family::Quadratic:
      c1 = 0.5 * m_lo;
      c2 = 0.0;
      c3 = 0.5 * m_hi;
      return;
    case Family::PPower:
      c1 = m_lo / p;
      c2 = 0.0;
      c3 = m_hi / p;
      return;
    case Family::FlatWell:
      // (|xi|-1)_+^2 >= xi^2/2 - 1 and <= xi^2 + 1.
      c1 = 0.5 * m_lo;
      c2 = m_hi;
      c3 = m_hi;
      return;
  }
}

// ===========================================================================
// ToughnessLaw
// ===========================================================================

double ToughnessLaw::value(Point x, Vec nu) const {
  double aniso_factor = 1.0;
  const double proj = dot(nu, aniso_axis);
  switch (aniso) {
    case Aniso::Isotropic:
      break;
    case Aniso::QuadraticAxis:
      aniso_factor = 1.0 + aniso_strength * proj * proj;
      break;
    case Aniso::AbsAxis:
      aniso_factor = 1.0 + aniso_strength * std::fabs(proj);
      break;
    case Aniso::LinearAxis:
      aniso_factor = 1.0 + aniso_strength * proj;
      break;
  }
  return kappa0 * spatial(x) * aniso_factor;
}

// ===========================================================================
// LoadLaw
// ===========================================================================

double LoadLaw::F(double t, Point x, double u) const {
  switch (family) {
    case Family::None:
      return 0.0;
    case Family::QuadraticWell: {
      const double d = u - target(t, x);
      return -0.5 * weight * d * d;
    }
    case Family::DeadLoad:
      return dead * u;
  }
  return 0.0;
}

double LoadLaw::dF_du(double t, Point x, double u) const {
  switch (family) {
    case Family::None:
      return 0.0;
    case Family::QuadraticWell:
      return -weight * (u - target(t, x));
    case Family::DeadLoad:
      return dead;
  }
  return 0.0;
}

double LoadLaw::dF_dt(double t, Point x, double u) const {
  switch (family) {
    case Family::None:
      return 0.0;
    case Family::QuadraticWell:
      return weight * (u - target(t, x)) * gt;
    case Family::DeadLoad:
      return 0.0;
  }
  return 0.0;
}

// ===========================================================================
// ValidationReport
// ===========================================================================

bool ValidationReport::hard_failure() const {
  for (const auto& c : checks)
    if (!c.pass && !c.waived) return true;
  return false;
}

bool ValidationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const CheckResult* ValidationReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.id;
    if (c.waived) os << " (waived)";
    if (!c.worst_sample.empty()) os << "  worst: " << c.worst_sample;
    os << "  margin " << c.margin << "\n";
  }
  return os.str();
}

// ===========================================================================
// validate_problem
// ===========================================================================

namespace {

std::string describe(const char* fmt, double a, double b, double c = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

std::vector<double> sample_times(const ProblemSpec& spec) {
  std::vector<double> ts;
  if (!spec.time.explicit_times.empty()) {
    ts = spec.time.explicit_times;
  } else {
    const int n = std::max(1, static_cast<int>(std::floor(
                                  spec.time.t_end / spec.time.dt + 1e-9)));
    for (int i = 0; i <= n; ++i) ts.push_back(i * spec.time.dt);
  }
  if (ts.size() > 128) {  // thin out dense grids, keep endpoints
    std::vector<double> thin;
    const std::size_t stride = ts.size() / 128 + 1;
    for (std::size_t i = 0; i < ts.size(); i += stride) thin.push_back(ts[i]);
    thin.push_back(ts.back());
    ts = std::move(thin);
  }
  return ts;
}

std::vector<Point> sample_points(const Lattice& lat) {
  std::vector<Point> pts;
  pts.reserve(lat.bonds.size());
  for (const auto& b : lat.bonds) pts.push_back(b.mid);
  return pts;
}

std::vector<Vec> sample_normals(int dim) {
  std::vector<Vec> nus = {{1.0, 0.0}, {-1.0, 0.0}};
  if (dim == 2) {
    nus.push_back({0.0, 1.0});
    nus.push_back({0.0, -1.0});
    for (int k = 0; k < 8; ++k) {
      const double ang = 0.25 * (k + 0.5);
      nus.push_back({std::cos(ang * 2.0 * 3.14159265358979323846),
                     std::sin(ang * 2.0 * 3.14159265358979323846)});
    }
  }
  return nus;
}

}  // namespace

ValidationReport validate_problem(const ProblemSpec& spec, const Lattice& lat) {
  ValidationReport report;
  const auto points = sample_points(lat);
  const auto times = sample_times(spec);

  // --- exponents -----------------------------------------------------------
  {
    CheckResult c{"bulk_p_gt_1", spec.bulk.p > 1.0, false, "", spec.bulk.p - 1.0};
    if (!c.pass) c.worst_sample = describe("p = %.6g", spec.bulk.p, 0);
    report.checks.push_back(c);
  }
  {
    CheckResult c{"load_q_gt_1", spec.load.q > 1.0, false, "", spec.load.q - 1.0};
    if (!c.pass) c.worst_sample = describe("q = %.6g", spec.load.q, 0);
    report.checks.push_back(c);
  }

  // --- toughness -----------------------------------------------------------
  const auto nus = sample_normals(lat.dim);
  {
    CheckResult c{"kappa_evenness", true, false, "", 0.0};
    double worst = 0.0;
    for (const auto& x : points)
      for (const auto& nu : nus) {
        const double d =
            std::fabs(spec.toughness.value(x, nu) - spec.toughness.value(x, -nu));
        if (d > worst) {
          worst = d;
          c.worst_sample = describe("x=%.4g nu=(%.3g,%.3g)", x.x, nu.x, nu.y);
        }
      }
    c.pass = (worst == 0.0);
    c.margin = -worst;
    report.checks.push_back(c);
  }
  double kappa_lo = 0.0, kappa_hi = 0.0;
  {
    bool first = true;
    for (const auto& x : points)
      for (const auto& nu : nus) {
        const double v = spec.toughness.value(x, nu);
        if (first || v < kappa_lo) kappa_lo = v;
        if (first || v > kappa_hi) kappa_hi = v;
        first = false;
      }
    const double declared_min =
        spec.toughness.kappa_min > 0.0 ? spec.toughness.kappa_min : kappa_lo;
    const double declared_max =
        spec.toughness.kappa_max > 0.0 ? spec.toughness.kappa_max : kappa_hi;
    CheckResult pos{"kappa_min_positive", declared_min > 0.0 && kappa_lo > 0.0,
                    false, "", std::min(declared_min, kappa_lo)};
    if (!pos.pass)
      pos.worst_sample = describe("kappa_min = %.6g", std::min(declared_min, kappa_lo), 0);
    report.checks.push_back(pos);

    CheckResult bounds{"kappa_bounds", true, false, "", 0.0};
    const double lo_margin = kappa_lo - declared_min;
    const double hi_margin = declared_max - kappa_hi;
    bounds.margin = std::min(lo_margin, hi_margin);
    bounds.pass = bounds.margin >= -1e-12;
    if (!bounds.pass)
      bounds.worst_sample =
          describe("sampled range [%.6g, %.6g]", kappa_lo, kappa_hi);
    report.checks.push_back(bounds);
  }

  // --- bulk law ------------------------------------------------------------
  {
    CheckResult c{"bulk_nonnegative", true, false, "", 0.0};
    double worst = 0.0;
    for (const auto& x : points) {
      if (spec.bulk.density(x, 0.0) != 0.0) {
        c.pass = false;
        c.worst_sample = describe("W(x=%.4g, 0) != 0", x.x, 0);
      }
      for (int i = -20; i <= 20; ++i) {
        const double xi = 0.5 * i;
        const double w = spec.bulk.density(x, xi);
        if (w < worst) {
          worst = w;
          c.worst_sample = describe("W(x=%.4g, xi=%.4g) = %.6g", x.x, xi, w);
        }
      }
    }
    if (worst < 0.0) c.pass = false;
    c.margin = worst;
    report.checks.push_back(c);
  }
  {
    CheckResult c{"bulk_growth", true, false, "", 0.0};
    double mod_lo = 0.0, mod_hi = 0.0;
    bool first = true;
    for (const auto& x : points) {
      const double m = spec.bulk.modulation(x);
      if (first || m < mod_lo) mod_lo = m;
      if (first || m > mod_hi) mod_hi = m;
      first = false;
    }
    double c1 = 0, c2 = 0, c3 = 0;
    spec.bulk.growth_constants(mod_lo, mod_hi, c1, c2, c3);
    double worst = 0.0;
    for (const auto& x : points)
      for (int i = -20; i <= 20; ++i) {
        const double xi = 0.5 * i;
        const double w = spec.bulk.density(x, xi);
        const double pw = std::pow(std::fabs(xi), spec.bulk.p);
        const double lower = c1 * pw - c2;
        const double upper = c3 * (pw + 1.0);
        const double margin = std::min(w - lower, upper - w);
        if (margin < worst) {
          worst = margin;
          c.worst_sample = describe("x=%.4g xi=%.4g W=%.6g", x.x, xi, w);
        }
      }
    c.margin = worst;
    c.pass = worst >= -1e-10;
    report.checks.push_back(c);
  }
  {
    // Closed-form stress against centered differences of the density.
    CheckResult c{"stress_consistency", true, false, "", 0.0};
    double worst = 0.0;
    std::uint64_t rng = 0x5eed;
    for (int trial = 0; trial < 100; ++trial) {
      rng = splitmix64(rng);
      const Point x = points[rng % points.size()];
      rng = splitmix64(rng);
      const double xi = -8.0 + 16.0 * (static_cast<double>(rng >> 11) * 0x1.0p-53);
      const double eps = 1e-6 * std::max(1.0, std::fabs(xi));
      const double fd = (spec.bulk.density(x, xi + eps) -
                         spec.bulk.density(x, xi - eps)) /
                        (2.0 * eps);
      const double s = spec.bulk.stress(x, xi);
      const double err = std::fabs(s - fd) - 1e-6 * (1.0 + std::fabs(s));
      if (err > worst) {
        worst = err;
        c.worst_sample = describe("x=%.4g xi=%.6g", x.x, xi, 0);
      }
    }
    c.margin = -worst;
    c.pass = worst <= 0.0;
    report.checks.push_back(c);
  }

  // --- load law ------------------------------------------------------------
  {
    CheckResult c{"load_derivative_consistency", true, false, "", 0.0};
    double worst = 0.0;
    std::uint64_t rng = 0xf00d;
    for (int trial = 0; trial < 100; ++trial) {
      rng = splitmix64(rng);
      const Point x = points[rng % points.size()];
      rng = splitmix64(rng);
      const double u = -5.0 + 10.0 * (static_cast<double>(rng >> 11) * 0x1.0p-53);
      rng = splitmix64(rng);
      const double t = times[rng % times.size()];
      const double eps_u = 1e-6 * std::max(1.0, std::fabs(u));
      const double eps_t = 1e-6 * std::max(1.0, std::fabs(t));
      const double fdu = (spec.load.F(t, x, u + eps_u) -
                          spec.load.F(t, x, u - eps_u)) /
                         (2.0 * eps_u);
      const double fdt = (spec.load.F(t + eps_t, x, u) -
                          spec.load.F(t - eps_t, x, u)) /
                         (2.0 * eps_t);
      const double du = spec.load.dF_du(t, x, u);
      const double dt = spec.load.dF_dt(t, x, u);
      const double err =
          std::max(std::fabs(du - fdu) - 1e-6 * (1.0 + std::fabs(du)),
                   std::fabs(dt - fdt) - 1e-6 * (1.0 + std::fabs(dt)));
      if (err > worst) {
        worst = err;
        c.worst_sample = describe("t=%.4g u=%.6g", t, u, 0);
      }
    }
    c.margin = -worst;
    c.pass = worst <= 0.0;
    report.checks.push_back(c);
  }
  {
    // -F >= alpha |u|^q - beta on the sampling grid, plus adaptive extreme
    // displacements that expose any load growing past the declared envelope.
    CheckResult c{"load_coercivity", true, spec.load.coercivity_waiver, "", 0.0};
    if (spec.load.alpha <= 0.0) {
      c.pass = false;
      c.worst_sample = "alpha must be positive";
      c.margin = spec.load.alpha;
    } else {
      std::vector<double> us;
      for (int i = 0; i <= 40; ++i) us.push_back(-10.0 + 0.5 * i);
      const double a = spec.load.alpha, be = spec.load.beta, q = spec.load.q;
      const double dead = std::fabs(spec.load.dead);
      const double u_far = std::max(
          10.0, std::max(std::pow(2.0 * (be + 1.0) / a, 1.0 / q),
                         std::pow(2.0 * dead / a + 1.0, 1.0 / (q - 1.0))));
      us.push_back(u_far);
      us.push_back(-u_far);
      double worst = 0.0;
      bool first = true;
      for (const auto& x : points)
        for (double t : times)
          for (double u : us) {
            const double margin =
                -spec.load.F(t, x, u) - (a * std::pow(std::fabs(u), q) - be);
            if (first || margin < worst) {
              worst = margin;
              c.worst_sample = describe("t=%.4g u=%.6g margin=%.4g", t, u, margin);
              first = false;
            }
          }
      c.margin = worst;
      c.pass = worst >= -1e-9;
    }
    if (!c.pass && spec.load.coercivity_waiver) {
      c.pass = true;
      c.waived = true;
    } else {
      c.waived = false;
    }
    report.checks.push_back(c);
  }

  // --- boundary program ----------------------------------------------------
  {
    CheckResult c{"boundary_lipschitz", true, false, "", 0.0};
    double derived = 0.0;
    for (int n = 0; n < lat.node_count(); ++n)
      if (lat.labels[n] == NodeLabel::Dirichlet)
        derived = std::max(derived, std::fabs(spec.boundary.rate_value(lat.nodes[n])));
    const double declared =
        spec.boundary.lipschitz > 0.0 ? spec.boundary.lipschitz : derived;
    double worst = 0.0;
    for (int n = 0; n < lat.node_count(); ++n) {
      if (lat.labels[n] != NodeLabel::Dirichlet) continue;
      for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double dw = std::fabs(spec.boundary.value(times[i + 1], lat.nodes[n]) -
                                    spec.boundary.value(times[i], lat.nodes[n]));
        const double slack = declared * (times[i + 1] - times[i]) - dw;
        if (slack < worst) {
          worst = slack;
          c.worst_sample = describe("node x=%.4g window [%.4g, .]", lat.nodes[n].x,
                                    times[i], 0);
        }
      }
    }
    c.margin = worst;
    c.pass = worst >= -1e-10;
    report.checks.push_back(c);
  }

  return report;
}

}  // namespace griffith
