// Compares the deterministic blocked (OpenMP) energy kernels against the
// plain serial reference implementations: wall time, speedup, and agreement.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "griffith/config.hpp"
#include "griffith/energy.hpp"
#include "griffith/lattice.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace griffith;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

template <class F>
double time_loop(int reps, double& value, F&& f) {
  value = f();  // warm up and keep the result alive
  const auto t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) value = f();
  return seconds_since(t0) / reps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"griffith kernel benchmark: serial reference vs blocked OpenMP"};
  int cells = 384;
  int reps = 20;
  app.add_option("--cells", cells, "grid cells per side");
  app.add_option("--reps", reps, "repetitions per measurement");
  CLI11_PARSE(app, argc, argv);

  GeometryConfig geom;
  geom.dimension = 2;
  geom.length_x = geom.length_y = 1.0;
  geom.cells_x = geom.cells_y = cells;
  const Lattice lat = build_lattice(geom);

  BulkLaw bulk;
  bulk.family = BulkLaw::Family::PPower;
  bulk.p = 3.0;
  LoadLaw load;
  load.family = LoadLaw::Family::QuadraticWell;
  load.gt = 1.0;

  DisplacementField u(lat.nodes.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Point p = lat.nodes[i];
    u[i] = std::sin(7.0 * p.x) * std::cos(5.0 * p.y) + 0.25 * p.x;
  }
  CrackSet crack({0, 5, 11, 200});
  const BondField xi = strain_field(u, lat);

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; blocked kernels run serially\n");
#endif
  std::printf("lattice: %d nodes, %d bonds\n\n", lat.node_count(),
              lat.bond_count());
  std::printf("%-14s %12s %12s %9s %12s\n", "kernel", "serial [ms]",
              "blocked [ms]", "speedup", "rel diff");

  const auto row = [&](const char* name, double serial_value,
                       double serial_time, double blocked_value,
                       double blocked_time) {
    const double scale = std::max(1.0, std::fabs(serial_value));
    std::printf("%-14s %12.3f %12.3f %8.2fx %12.3e\n", name,
                1e3 * serial_time, 1e3 * blocked_time,
                serial_time / blocked_time,
                std::fabs(serial_value - blocked_value) / scale);
  };

  double vs = 0.0, vb = 0.0;
  double ts = time_loop(reps, vs, [&] {
    return serial::bulk_energy(lat, bulk, u, crack);
  });
  double tb = time_loop(reps, vb, [&] { return bulk_energy(lat, bulk, u, crack); });
  row("bulk_energy", vs, ts, vb, tb);

  ts = time_loop(reps, vs, [&] {
    return serial::pair_dW(xi, xi, bulk, lat, crack);
  });
  tb = time_loop(reps, vb, [&] { return pair_dW(xi, xi, bulk, lat, crack); });
  row("pair_dW", vs, ts, vb, tb);

  ts = time_loop(reps, vs, [&] { return serial::force_work(load, 1.0, u, lat); });
  tb = time_loop(reps, vb, [&] { return force_work(load, 1.0, u, lat); });
  row("force_work", vs, ts, vb, tb);

  return 0;
}
