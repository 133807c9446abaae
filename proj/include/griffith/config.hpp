#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "griffith/laws.hpp"
#include "griffith/lemma.hpp"

namespace griffith {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeometryConfig {
  int dimension = 1;
  double length_x = 1.0;
  double length_y = 1.0;
  int cells_x = 1;
  int cells_y = 1;
  // 2-d edge labels; 1-d chains always grip both endpoints.
  bool dirichlet_left = true;
  bool dirichlet_right = true;
  bool dirichlet_bottom = false;
  bool dirichlet_top = false;
};

struct TimeGridConfig {
  double dt = 0.01;
  double t_end = 1.0;
  std::vector<double> explicit_times;  // overrides dt/t_end when nonempty
};

struct CandidateFilter {
  enum class Kind { All, Interior, Anchors, List, Box };

  Kind kind = Kind::All;
  std::vector<int> ids;  // Kind::List
  // Kind::Box: bonds whose midpoint falls inside [min,max] x [min,max].
  double box_min_x = 0.0, box_min_y = 0.0;
  double box_max_x = 0.0, box_max_y = 0.0;
};

struct StrategyConfig {
  enum class Mode { Exhaustive, Greedy };

  Mode mode = Mode::Exhaustive;
  std::uint64_t exhaustive_limit = 1u << 20;
  bool greedy_fallback = false;
  CandidateFilter candidates;
  // Strict-improvement tie rule: a candidate replaces the incumbent only if
  // its energy is lower by more than tie_tolerance * max(1, |E|); at ties the
  // smaller crack (then the lexicographically smaller id set) is kept.
  double tie_tolerance = 1e-12;
};

struct AuditConfig {
  double stability_tol = 1e-9;
  double balance_factor = 10.0;  // balance tolerance = factor * max step
  double jump_threshold = 0.5;
  int competitor_samples = 64;  // random supersets when exhaustive infeasible
};

struct OutputConfig {
  std::string dir = "out";
};

struct ProblemSpec {
  GeometryConfig geometry;
  BulkLaw bulk;
  ToughnessLaw toughness;
  LoadLaw load;
  BoundaryProgram boundary;
  TimeGridConfig time;
  StrategyConfig strategy;
  AuditConfig audit;
  OutputConfig output;
  std::uint64_t seed = 0;  // audit competitor sampling only
  // Optional initial crack (bond ids); the pair (elastic minimizer, crack)
  // must be globally stable at t = 0 or the run is refused.
  std::vector<int> initial_crack;
};

struct LemmaConfig {
  SequenceSpec sequence;
  BulkLaw bulk;
  OutputConfig output;
};

// Strict parsing: unknown keys anywhere in the document are hard errors that
// name the offending key. Round-trips losslessly through serialize_problem.
ProblemSpec parse_problem(const std::string& json_text);
ProblemSpec load_problem(const std::string& path);
std::string serialize_problem(const ProblemSpec& spec);

LemmaConfig parse_lemma(const std::string& json_text);
LemmaConfig load_lemma(const std::string& path);

struct CliOverrides {
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<std::string> strategy;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

void apply_overrides(ProblemSpec& spec, const CliOverrides& overrides);

}  // namespace griffith
