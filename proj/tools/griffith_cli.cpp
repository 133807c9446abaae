#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "griffith/audit.hpp"
#include "griffith/config.hpp"
#include "griffith/evolution.hpp"
#include "griffith/io.hpp"
#include "griffith/lemma.hpp"

namespace {

using namespace griffith;

struct CommonFlags {
  std::string config_path;
  CliOverrides overrides;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "configuration file (JSON)")
      ->required();
  cmd->add_option("--out", flags.overrides.out_dir, "output directory");
  cmd->add_option("--dt", flags.overrides.dt, "uniform time step override");
  cmd->add_option("--T", flags.overrides.t_end, "final time override");
  cmd->add_option("--strategy", flags.overrides.strategy,
                  "exhaustive | greedy");
  cmd->add_option("--seed", flags.overrides.seed,
                  "seed for audit competitor sampling");
}

int cmd_run(const CommonFlags& flags) {
  ProblemSpec spec = load_problem(flags.config_path);
  apply_overrides(spec, flags.overrides);
  const Lattice lat = build_lattice(spec.geometry);
  const ValidationReport validation = validate_problem(spec, lat);
  if (validation.hard_failure()) {
    std::cerr << "validation failed:\n" << validation.summary();
    return 2;
  }
  DirectoryLock lock(spec.output.dir);
  const EvolutionTrace trace = run_evolution(spec, lat);
  write_run(spec.output.dir, spec, lat, trace, validation);
  std::cout << "wrote " << trace.steps.size() << " steps to " << spec.output.dir
            << (trace.complete ? "" : "  (INCOMPLETE: " + trace.abort_reason + ")")
            << "\n";
  int events = 0;
  for (std::size_t i = 1; i < trace.steps.size(); ++i)
    if (trace.steps[i].crack.size() != trace.steps[i - 1].crack.size()) ++events;
  std::cout << "crack events: " << events << ", final broken bonds: "
            << (trace.steps.empty() ? 0 : trace.steps.back().crack.size())
            << "\n";
  return trace.complete ? 0 : 1;
}

int cmd_audit(const std::string& dir) {
  const LoadedRun run = read_run(dir);
  const Lattice lat = build_lattice(run.spec.geometry);
  const AuditResult result = run_audit(run.trace, run.spec, lat);
  write_audit(dir, result);
  std::cout << audit_summary(result);
  return result.all_pass ? 0 : 1;
}

int cmd_oracle(const CommonFlags& flags, int step_index) {
  ProblemSpec spec = load_problem(flags.config_path);
  apply_overrides(spec, flags.overrides);
  const Lattice lat = build_lattice(spec.geometry);
  const ValidationReport validation = validate_problem(spec, lat);
  if (validation.hard_failure()) {
    std::cerr << "validation failed:\n" << validation.summary();
    return 2;
  }

  // Evolve with the configured strategy up to the step before the probe.
  EvolutionTrace trace = run_evolution(spec, lat);
  if (step_index < 0 || step_index >= static_cast<int>(trace.steps.size())) {
    std::cerr << "step index " << step_index << " outside the trace ("
              << trace.steps.size() << " steps)\n";
    return 2;
  }
  const CrackSet prev = (step_index == 0)
                            ? CrackSet{spec.initial_crack}
                            : trace.steps[static_cast<std::size_t>(step_index) - 1].crack;
  const DisplacementField* warm =
      (step_index == 0)
          ? nullptr
          : &trace.steps[static_cast<std::size_t>(step_index) - 1].u;
  const double t = trace.grid.times[static_cast<std::size_t>(step_index)];

  ProblemSpec exhaustive_spec = spec;
  exhaustive_spec.strategy.mode = StrategyConfig::Mode::Exhaustive;
  ProblemSpec greedy_spec = spec;
  greedy_spec.strategy.mode = StrategyConfig::Mode::Greedy;

  CrackEnergyEvaluator eval_ex(exhaustive_spec, lat);
  CrackEnergyEvaluator eval_gr(greedy_spec, lat);
  const StepOutcome ex =
      incremental_step(step_index, t, prev, exhaustive_spec, lat, eval_ex, warm);
  const StepOutcome gr =
      incremental_step(step_index, t, prev, greedy_spec, lat, eval_gr, warm);

  std::cout << "step " << step_index << "  t = " << format_g17(t) << "\n";
  std::cout << "exhaustive: E = " << format_g17(ex.energy.total) << "  ("
            << ex.crack.size() << " broken, " << ex.candidates_evaluated
            << " candidates evaluated)\n";
  std::cout << "greedy:     E = " << format_g17(gr.energy.total) << "  ("
            << gr.crack.size() << " broken, " << gr.candidates_evaluated
            << " candidates evaluated)\n";
  std::cout << "margin (greedy - exhaustive) = "
            << format_g17(gr.energy.total - ex.energy.total) << "\n";
  return 0;
}

int cmd_lemma(const std::string& config_path) {
  const LemmaConfig cfg = load_lemma(config_path);
  const LemmaReport report = lemma_experiment(cfg.sequence, cfg.bulk);
  std::filesystem::create_directories(cfg.output.dir);
  const std::string csv = lemma_report_csv(report);
  std::ofstream out(std::filesystem::path(cfg.output.dir) / "lemma.csv",
                    std::ios::binary);
  out << csv;
  std::cout << report.header << "\n" << csv;
  std::cout << "bulk-energy hypothesis "
            << (report.hypothesis_holds ? "holds" : "FAILS")
            << " along this sequence\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"griffith: quasistatic brittle fracture on lattices by "
               "incremental global energy minimization"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run an evolution");
  add_common(run, run_flags);

  std::string audit_dir;
  CLI::App* audit = app.add_subcommand("audit", "audit a written run");
  audit->add_option("dir", audit_dir, "run output directory")->required();

  CommonFlags oracle_flags;
  int oracle_step = 0;
  CLI::App* oracle =
      app.add_subcommand("oracle", "compare exhaustive vs greedy at one step");
  add_common(oracle, oracle_flags);
  oracle->add_option("--step", oracle_step, "step index to probe")->required();

  std::string lemma_config;
  CLI::App* lemma =
      app.add_subcommand("lemma", "run the stress-convergence experiments");
  lemma->add_option("--config", lemma_config, "lemma configuration (JSON)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (audit->parsed()) return cmd_audit(audit_dir);
    if (oracle->parsed()) return cmd_oracle(oracle_flags, oracle_step);
    if (lemma->parsed()) return cmd_lemma(lemma_config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
