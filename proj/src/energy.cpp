#include "griffith/energy.hpp"

#include <stdexcept>
#include <string>

#include "griffith/config.hpp"
#include "griffith/reduce.hpp"

namespace griffith {

BondField strain_field(const DisplacementField& u, const Lattice& lat) {
  BondField xi(static_cast<std::size_t>(lat.interior_bond_count), 0.0);
  for (int i = 0; i < lat.interior_bond_count; ++i) {
    const Bond& b = lat.bonds[static_cast<std::size_t>(i)];
    xi[static_cast<std::size_t>(i)] =
        (u[static_cast<std::size_t>(b.b)] - u[static_cast<std::size_t>(b.a)]) /
        b.h;
  }
  return xi;
}

std::vector<char> broken_mask(const CrackSet& crack, const Lattice& lat) {
  std::vector<char> mask(static_cast<std::size_t>(lat.bond_count()), 0);
  for (int id : crack.ids()) {
    if (id < 0 || id >= lat.bond_count())
      throw std::out_of_range("broken_mask: unknown bond id " +
                              std::to_string(id));
    mask[static_cast<std::size_t>(id)] = 1;
  }
  return mask;
}

double bulk_energy(const Lattice& lat, const BulkLaw& law,
                   const DisplacementField& u, const CrackSet& crack) {
  const auto mask = broken_mask(crack, lat);
  const auto n = static_cast<std::size_t>(lat.interior_bond_count);
  return reduce::blocked_sum(n, [&](std::size_t i) {
    if (mask[i]) return 0.0;
    const Bond& b = lat.bonds[i];
    const double xi = (u[static_cast<std::size_t>(b.b)] -
                       u[static_cast<std::size_t>(b.a)]) /
                      b.h;
    return b.volume() * law.density(b.mid, xi);
  });
}

double surface_energy(const Lattice& lat, const ToughnessLaw& kappa,
                      const CrackSet& crack) {
  const auto& ids = crack.ids();
  for (int id : ids)
    if (id < 0 || id >= lat.bond_count())
      throw std::out_of_range("surface_energy: unknown bond id " +
                              std::to_string(id));
  return reduce::blocked_sum(ids.size(), [&](std::size_t i) {
    const Bond& b = lat.bonds[static_cast<std::size_t>(ids[i])];
    return kappa.value(b.mid, b.dir) * b.cross;
  });
}

double force_work(const LoadLaw& law, double t, const DisplacementField& u,
                  const Lattice& lat) {
  if (law.family == LoadLaw::Family::None) return 0.0;
  const auto n = static_cast<std::size_t>(lat.node_count());
  return reduce::blocked_sum(n, [&](std::size_t i) {
    return lat.node_volume[i] * law.F(t, lat.nodes[i], u[i]);
  });
}

EnergyBreakdown total_energy(double t, const DisplacementField& u,
                             const CrackSet& crack, const ProblemSpec& spec,
                             const Lattice& lat) {
  const int bad = admissibility_violation(u, t, crack, spec.boundary, lat);
  if (bad >= 0)
    throw std::invalid_argument(
        "total_energy: pair is not admissible, boundary constraint violated "
        "at node " +
        std::to_string(bad));
  return EnergyBreakdown::make(bulk_energy(lat, spec.bulk, u, crack),
                               surface_energy(lat, spec.toughness, crack),
                               force_work(spec.load, t, u, lat));
}

double pair_dW(const BondField& phi, const BondField& psi, const BulkLaw& law,
               const Lattice& lat, const CrackSet& crack) {
  const auto mask = broken_mask(crack, lat);
  const auto n = static_cast<std::size_t>(lat.interior_bond_count);
  return reduce::blocked_sum(n, [&](std::size_t i) {
    if (mask[i]) return 0.0;
    const Bond& b = lat.bonds[i];
    return b.volume() * law.stress(b.mid, phi[i]) * psi[i];
  });
}

double pair_dF(double t, const DisplacementField& u,
               const DisplacementField& v, const LoadLaw& law,
               const Lattice& lat) {
  if (law.family == LoadLaw::Family::None) return 0.0;
  const auto n = static_cast<std::size_t>(lat.node_count());
  return reduce::blocked_sum(n, [&](std::size_t i) {
    return lat.node_volume[i] * law.dF_du(t, lat.nodes[i], u[i]) * v[i];
  });
}

double dF_dt(double t, const DisplacementField& u, const LoadLaw& law,
             const Lattice& lat) {
  if (law.family == LoadLaw::Family::None) return 0.0;
  const auto n = static_cast<std::size_t>(lat.node_count());
  return reduce::blocked_sum(n, [&](std::size_t i) {
    return lat.node_volume[i] * law.dF_dt(t, lat.nodes[i], u[i]);
  });
}

namespace serial {

double bulk_energy(const Lattice& lat, const BulkLaw& law,
                   const DisplacementField& u, const CrackSet& crack) {
  const auto mask = broken_mask(crack, lat);
  return reduce::serial::plain_sum(
      static_cast<std::size_t>(lat.interior_bond_count), [&](std::size_t i) {
        if (mask[i]) return 0.0;
        const Bond& b = lat.bonds[i];
        const double xi = (u[static_cast<std::size_t>(b.b)] -
                           u[static_cast<std::size_t>(b.a)]) /
                          b.h;
        return b.volume() * law.density(b.mid, xi);
      });
}

double pair_dW(const BondField& phi, const BondField& psi, const BulkLaw& law,
               const Lattice& lat, const CrackSet& crack) {
  const auto mask = broken_mask(crack, lat);
  return reduce::serial::plain_sum(
      static_cast<std::size_t>(lat.interior_bond_count), [&](std::size_t i) {
        if (mask[i]) return 0.0;
        const Bond& b = lat.bonds[i];
        return b.volume() * law.stress(b.mid, phi[i]) * psi[i];
      });
}

double force_work(const LoadLaw& law, double t, const DisplacementField& u,
                  const Lattice& lat) {
  if (law.family == LoadLaw::Family::None) return 0.0;
  return reduce::serial::plain_sum(
      static_cast<std::size_t>(lat.node_count()), [&](std::size_t i) {
        return lat.node_volume[i] * law.F(t, lat.nodes[i], u[i]);
      });
}

}  // namespace serial

}  // namespace griffith
