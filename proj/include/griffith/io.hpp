#pragma once

#include <string>
#include <vector>

#include "griffith/audit.hpp"
#include "griffith/config.hpp"
#include "griffith/evolution.hpp"
#include "griffith/format.hpp"

namespace griffith {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exclusive ownership of an output directory for the duration of a run.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::string& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::string path_;
};

// Trace CSV, one row per step:
//   i,t,E_bulk,E_surf,F_work,E_total,n_broken,strategy,candidates_evaluated,cum_work
std::string trace_csv(const EvolutionTrace& trace);

// Crack snapshot, one line per broken bond:
//   bond_id x_mid y_mid nu_x nu_y area   (y columns omitted in 1-d)
std::string crack_snapshot(const CrackSet& crack, const Lattice& lat);

// Writes trace.csv, per-step crack and displacement snapshots, and the run
// manifest (config echo, version, lattice spacing, waivers) into dir.
void write_run(const std::string& dir, const ProblemSpec& spec,
               const Lattice& lat, const EvolutionTrace& trace,
               const ValidationReport& validation);

// Reloads a written run; the manifest's config echo rebuilds the spec.
struct LoadedRun {
  ProblemSpec spec;
  EvolutionTrace trace;
};
LoadedRun read_run(const std::string& dir);

// Machine-readable audit report (one record per check) plus a human summary.
std::string audit_report_json(const AuditResult& result);
std::string audit_summary(const AuditResult& result);
void write_audit(const std::string& dir, const AuditResult& result);

}  // namespace griffith
