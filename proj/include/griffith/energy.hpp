#pragma once

#include <vector>

#include "griffith/lattice.hpp"
#include "griffith/laws.hpp"

namespace griffith {

struct ProblemSpec;

// One value per interior bond (axial strains, test directions).
using BondField = std::vector<double>;

struct EnergyBreakdown {
  double bulk = 0.0;
  double surface = 0.0;
  double force_work = 0.0;
  double total = 0.0;  // always bulk + surface - force_work, same rounding path

  static EnergyBreakdown make(double bulk, double surface, double force_work) {
    return {bulk, surface, force_work, bulk + surface - force_work};
  }
};

// Axial strain (u_b - u_a)/h per interior bond. Broken bonds still get an
// entry; the energy kernels mask them.
BondField strain_field(const DisplacementField& u, const Lattice& lat);

// Flags per interior bond: 1 if broken. Anchors are tracked separately.
std::vector<char> broken_mask(const CrackSet& crack, const Lattice& lat);

// Stored elastic energy: sum over intact interior bonds of
// volume * W(midpoint, strain). Deterministic blocked reduction.
double bulk_energy(const Lattice& lat, const BulkLaw& law,
                   const DisplacementField& u, const CrackSet& crack);

// Dissipated surface energy: sum over crack segments of
// kappa(midpoint, normal) * area.
double surface_energy(const Lattice& lat, const ToughnessLaw& kappa,
                      const CrackSet& crack);

// Work of the body forces: node quadrature of F(t, x, u(x)) with dual-cell
// volume weights.
double force_work(const LoadLaw& law, double t, const DisplacementField& u,
                  const Lattice& lat);

// Total energy E(t)(u, Gamma) = bulk + surface - force_work. Throws if the
// pair violates the boundary constraint, naming the node.
EnergyBreakdown total_energy(double t, const DisplacementField& u,
                             const CrackSet& crack, const ProblemSpec& spec,
                             const Lattice& lat);

// Differential pairing <dW(phi), psi> = sum over intact bonds of
// volume * stress(phi) * psi.
double pair_dW(const BondField& phi, const BondField& psi, const BulkLaw& law,
               const Lattice& lat, const CrackSet& crack);

// <dF(t)(u), v> = node quadrature of dF/du * v.
double pair_dF(double t, const DisplacementField& u,
               const DisplacementField& v, const LoadLaw& law,
               const Lattice& lat);

// F-dot(t)(u) = node quadrature of dF/dt.
double dF_dt(double t, const DisplacementField& u, const LoadLaw& law,
             const Lattice& lat);

namespace serial {

// Plain-loop reference implementations kept for testing the blocked kernels.
double bulk_energy(const Lattice& lat, const BulkLaw& law,
                   const DisplacementField& u, const CrackSet& crack);
double pair_dW(const BondField& phi, const BondField& psi, const BulkLaw& law,
               const Lattice& lat, const CrackSet& crack);
double force_work(const LoadLaw& law, double t, const DisplacementField& u,
                  const Lattice& lat);

}  // namespace serial

}  // namespace griffith
