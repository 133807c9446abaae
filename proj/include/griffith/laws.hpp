#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "griffith/geometry.hpp"

namespace griffith {

struct ProblemSpec;
struct Lattice;

// ===========================================================================
// Spatial modulation field: a strictly positive factor as a closed form of
// position. "random" is a deterministic hash of the quantized position and a
// seed, so heterogeneous runs stay reproducible from the config alone.
// ===========================================================================

struct SpatialField {
  enum class Family { Constant, Step, Linear, Random };

  Family family = Family::Constant;
  // Step: factor = low for axis-coordinate < threshold, high otherwise.
  int axis = 0;
  double threshold = 0.0;
  double low = 1.0;
  double high = 1.0;
  // Linear: factor = a + b*x + c*y.
  double a = 1.0, b = 0.0, c = 0.0;
  // Random: factor uniform in [low, high] from hash(seed, position).
  std::uint64_t seed = 0;

  double operator()(Point p) const;
};

// ===========================================================================
// Bulk energy density W(x, xi) with p-growth. The kinematics are scalar
// (antiplane), so the gradient argument is a vector in 2-d and a scalar on a
// bond axis; all families are isotropic in xi, hence the scalar overloads
// evaluate the same law along a single direction.
// ===========================================================================

struct BulkLaw {
  enum class Family { Quadratic, PPower, FlatWell };

  Family family = Family::Quadratic;
  double mu = 1.0;        // stiffness scale, possibly modulated in x
  double p = 2.0;         // growth exponent, > 1
  SpatialField modulation;  // multiplies mu

  double stiffness_at(Point x) const { return mu * modulation(x); }

  // W(x, xi) for vector xi, and its gradient in xi.
  double density(Point x, Vec xi) const;
  Vec stress(Point x, Vec xi) const;

  // Along-axis versions used by the bond kernels.
  double density(Point x, double xi) const;
  double stress(Point x, double xi) const;

  // Constants for the declared growth envelope
  //   c1*|xi|^p - c2 <= W(x, xi) <= c3*(|xi|^p + 1),
  // valid for modulation factors in [mod_lo, mod_hi].
  void growth_constants(double mod_lo, double mod_hi, double& c1, double& c2,
                        double& c3) const;
};

// ===========================================================================
// Toughness kappa(x, nu): surface energy per unit crack area, heterogeneous
// in x and anisotropic in the crack normal nu. Must be even in nu.
// ===========================================================================

struct ToughnessLaw {
  enum class Aniso { Isotropic, QuadraticAxis, AbsAxis, LinearAxis };

  double kappa0 = 1.0;
  SpatialField spatial;
  Aniso aniso = Aniso::Isotropic;
  double aniso_strength = 0.0;
  Vec aniso_axis{1.0, 0.0};
  // Declared bounds, checked against samples by validate_problem. Zero means
  // "derive from samples".
  double kappa_min = 0.0;
  double kappa_max = 0.0;

  double value(Point x, Vec nu) const;
  bool family_is_even() const { return aniso != Aniso::LinearAxis; }
};

// ===========================================================================
// Body-force work density F(t, x, u) with closed-form partials. The
// coercivity constants declare -F >= alpha*|u|^q - beta, the condition that
// keeps fragments disconnected from the grips from escaping to infinity.
// ===========================================================================

struct LoadLaw {
  enum class Family { None, QuadraticWell, DeadLoad };

  Family family = Family::None;
  double weight = 1.0;  // well stiffness c: F = -c/2 * (u - g(t,x))^2
  // Well target g(t, x) = gt*t + gx*x + gy*y + g0.
  double gt = 0.0, gx = 0.0, gy = 0.0, g0 = 0.0;
  double dead = 0.0;  // dead load: F = dead * u
  double alpha = 0.0;
  double beta = 0.0;
  double q = 2.0;
  bool coercivity_waiver = false;

  double target(double t, Point x) const {
    return gt * t + gx * x.x + gy * x.y + g0;
  }
  double F(double t, Point x, double u) const;
  double dF_du(double t, Point x, double u) const;
  double dF_dt(double t, Point x, double u) const;

  // True when u -> -F(t,x,u) has a proper minimum on every fiber, so
  // fragments detached from all grips still have a well-posed equilibrium.
  bool proper_minimum_in_u() const {
    return family == Family::QuadraticWell && weight > 0.0;
  }
  // True when a detached fragment makes the energy unbounded below.
  bool unbounded_on_floating() const {
    return family == Family::DeadLoad && dead != 0.0;
  }
};

// ===========================================================================
// Boundary deformation program w(t, x) on the Dirichlet part, with its time
// derivative and an interior extension rule (the closed form is evaluated at
// every node, a linear blend for the affine profiles used here).
// ===========================================================================

struct BoundaryProgram {
  double rate = 1.0;  // w(t, x) = rate * t * profile(x)
  double prof_a = 0.0, prof_b = 1.0, prof_c = 0.0;  // profile = a + b*x + c*y
  // Declared Lipschitz constant of t -> w(t, x); zero means "derive".
  double lipschitz = 0.0;

  double profile(Point x) const { return prof_a + prof_b * x.x + prof_c * x.y; }
  double value(double t, Point x) const { return rate * t * profile(x); }
  double rate_value(Point x) const { return rate * profile(x); }
};

// ===========================================================================
// Validation
// ===========================================================================

struct CheckResult {
  std::string id;
  bool pass = false;
  bool waived = false;
  std::string worst_sample;  // description of the worst offending sample
  double margin = 0.0;       // signed margin, >= 0 means satisfied
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool hard_failure() const;
  bool all_pass() const;
  const CheckResult* find(const std::string& id) const;
  std::string summary() const;
};

// Runs every declared law check against the spec: exponent ranges, toughness
// evenness and bounds, the coercivity sampling of the load law, derivative
// consistency of closed forms against centered differences, and the boundary
// program's Lipschitz sampling. Hard failures (p <= 1, kappa_min <= 0,
// missing coercivity without waiver) refuse the run.
ValidationReport validate_problem(const ProblemSpec& spec, const Lattice& lat);

}  // namespace griffith
