#pragma once

#include <string>
#include <vector>

#include "griffith/laws.hpp"

namespace griffith {

// Numerical experiments on weak stress convergence along energy-convergent
// sequences: oscillating and vanishing-perturbation sequences u_k on (0,1),
// their bulk energies, stress pairings against a fixed test dictionary, and
// the measure of the set where the gradients stay apart.

struct SequenceSpec {
  enum class Profile { Sawtooth, Perturbation };

  Profile profile = Profile::Sawtooth;
  std::vector<int> k_list;  // oscillation indices (powers of two keep the
                            // breakpoints on lattice nodes)
  int resolution = 0;       // quadrature cells; >= 64 * max(k)
  double base_slope = 0.0;  // base field u(x) = base_slope * x
  double eps_scale = 1.0;   // perturbation energy gap eps_k = eps_scale / k
};

struct LemmaRow {
  int k = 0;
  double energy_gap = 0.0;       // |W(grad u_k) - W(grad u)|
  double pairing_gap_max = 0.0;  // max over dictionary of |<sigma_k - sigma, phi>|
  double meas_dev_01 = 0.0;      // meas{ |grad u_k - grad u| > 0.1 }
  double meas_dev_05 = 0.0;      // meas{ |grad u_k - grad u| > 0.5 }
};

struct LemmaReport {
  std::vector<LemmaRow> rows;
  bool hypothesis_holds = false;  // energy gap -> 0 along the sequence
  std::string header;             // documents the finite-dictionary limitation
};

// Piecewise-linear profiles sampled at the nodes of a uniform grid on (0,1).
// Sawtooth: k periods of the slope +-1 triangle wave, amplitude 1/(4k), added
// to the base field. Perturbation: a slope +-1 tent of width 2*eps_k centered
// at 1/2, so the gradient deviation has measure exactly 2*eps_k and energy
// eps_k under the quadratic law. Refuses a resolution below 64 cells per
// finest period.
std::vector<double> build_sequence(const SequenceSpec& spec, int k);

// Names of the default bounded test dictionary: 1, x, x^2, sin(pi x),
// cos(pi x), sign(x - 1/2).
std::vector<std::string> default_test_dictionary();

LemmaReport lemma_experiment(const SequenceSpec& spec, const BulkLaw& law,
                             const std::vector<std::string>& dictionary =
                                 default_test_dictionary());

std::string lemma_report_csv(const LemmaReport& report);

}  // namespace griffith
