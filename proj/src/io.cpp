#include "griffith/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace griffith {

namespace fs = std::filesystem;

// ===========================================================================
// DirectoryLock
// ===========================================================================

DirectoryLock::DirectoryLock(const std::string& dir) {
  fs::create_directories(dir);
  path_ = (fs::path(dir) / "run.lock").string();
  std::FILE* f = std::fopen(path_.c_str(), "wx");
  if (!f)
    throw IoError("output directory '" + dir +
                  "' is locked by another run (remove " + path_ +
                  " if that run is dead)");
  std::fclose(f);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

// ===========================================================================
// Writers
// ===========================================================================

std::string trace_csv(const EvolutionTrace& trace) {
  std::ostringstream os;
  os << "i,t,E_bulk,E_surf,F_work,E_total,n_broken,strategy,"
        "candidates_evaluated,cum_work\n";
  for (const auto& s : trace.steps) {
    os << s.index << ',' << format_g17(s.t) << ',' << format_g17(s.energy.bulk)
       << ',' << format_g17(s.energy.surface) << ','
       << format_g17(s.energy.force_work) << ',' << format_g17(s.energy.total)
       << ',' << s.crack.size() << ','
       << (s.heuristic ? "greedy" : "exhaustive") << ','
       << s.candidates_evaluated << ',' << format_g17(s.cum_work) << '\n';
  }
  return os.str();
}

std::string crack_snapshot(const CrackSet& crack, const Lattice& lat) {
  std::ostringstream os;
  for (const auto& seg : crack_segments(crack, lat)) {
    if (lat.dim == 1)
      os << seg.bond_id << ' ' << format_g17(seg.mid.x) << ' '
         << format_g17(seg.normal.x) << ' ' << format_g17(seg.area) << '\n';
    else
      os << seg.bond_id << ' ' << format_g17(seg.mid.x) << ' '
         << format_g17(seg.mid.y) << ' ' << format_g17(seg.normal.x) << ' '
         << format_g17(seg.normal.y) << ' ' << format_g17(seg.area) << '\n';
  }
  return os.str();
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
}

std::string snapshot_name(const char* prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%05d.txt", prefix, index);
  return buf;
}

}  // namespace

void write_run(const std::string& dir, const ProblemSpec& spec,
               const Lattice& lat, const EvolutionTrace& trace,
               const ValidationReport& validation) {
  fs::create_directories(dir);
  fs::create_directories(fs::path(dir) / "snapshots");

  write_file(fs::path(dir) / "trace.csv", trace_csv(trace));

  for (const auto& s : trace.steps) {
    write_file(fs::path(dir) / "snapshots" / snapshot_name("crack", s.index),
               crack_snapshot(s.crack, lat));
    std::ostringstream disp;
    for (double v : s.u) disp << format_g17(v) << '\n';
    write_file(fs::path(dir) / "snapshots" / snapshot_name("disp", s.index),
               disp.str());
  }

  std::ostringstream manifest;
  manifest << "{\n  \"artifact_version\": \"0.1.0\",\n";
  manifest << "  \"lattice_spacing\": " << format_g17(lat.spacing()) << ",\n";
  manifest << "  \"dimension\": " << lat.dim << ",\n";
  manifest << "  \"nodes\": " << lat.node_count() << ",\n";
  manifest << "  \"bonds\": " << lat.bond_count() << ",\n";
  manifest << "  \"complete\": " << (trace.complete ? "true" : "false") << ",\n";
  manifest << "  \"abort_reason\": \"" << trace.abort_reason << "\",\n";
  manifest << "  \"waivers\": [";
  bool first = true;
  for (const auto& c : validation.checks)
    if (c.waived) {
      manifest << (first ? "" : ", ") << '"' << c.id << '"';
      first = false;
    }
  manifest << "],\n";
  std::string config_echo = serialize_problem(spec);
  while (!config_echo.empty() &&
         (config_echo.back() == '\n' || config_echo.back() == ' '))
    config_echo.pop_back();
  manifest << "  \"config\": " << config_echo << "\n}\n";
  write_file(fs::path(dir) / "manifest.json", manifest.str());
}

// ===========================================================================
// Readers
// ===========================================================================

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double parse_double(const std::string& token, const fs::path& file, int line) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str())
    throw IoError("corrupt number in '" + file.string() + "' line " +
                  std::to_string(line));
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

LoadedRun read_run(const std::string& dir) {
  LoadedRun run;

  const fs::path manifest_path = fs::path(dir) / "manifest.json";
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(slurp(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt manifest '" + manifest_path.string() +
                  "': " + e.what());
  }
  if (!manifest.contains("config"))
    throw IoError("manifest '" + manifest_path.string() + "' has no config echo");
  run.spec = parse_problem(manifest.at("config").dump());

  const fs::path csv_path = fs::path(dir) / "trace.csv";
  std::istringstream csv(slurp(csv_path));
  std::string line;
  if (!std::getline(csv, line))
    throw IoError("empty trace '" + csv_path.string() + "'");
  int line_no = 1;
  std::vector<double> times;
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != 10)
      throw IoError("corrupt row in '" + csv_path.string() + "' line " +
                    std::to_string(line_no));
    StepRecord rec;
    rec.index = static_cast<int>(parse_double(cols[0], csv_path, line_no));
    rec.t = parse_double(cols[1], csv_path, line_no);
    const double bulk = parse_double(cols[2], csv_path, line_no);
    const double surf = parse_double(cols[3], csv_path, line_no);
    const double fwork = parse_double(cols[4], csv_path, line_no);
    rec.energy = EnergyBreakdown::make(bulk, surf, fwork);
    rec.heuristic = (cols[7] == "greedy");
    rec.candidates_evaluated =
        static_cast<std::int64_t>(parse_double(cols[8], csv_path, line_no));
    rec.cum_work = parse_double(cols[9], csv_path, line_no);
    rec.continuation = rec.energy;  // recomputed by audits that need it
    times.push_back(rec.t);
    run.trace.steps.push_back(std::move(rec));
  }
  run.trace.grid = TimeGrid::explicit_times(times);
  run.trace.complete = manifest.value("complete", true);
  run.trace.abort_reason = manifest.value("abort_reason", std::string{});

  for (auto& rec : run.trace.steps) {
    const fs::path crack_path =
        fs::path(dir) / "snapshots" / snapshot_name("crack", rec.index);
    std::istringstream snap(slurp(crack_path));
    std::vector<int> ids;
    int snap_line = 0;
    while (std::getline(snap, line)) {
      ++snap_line;
      if (line.empty()) continue;
      std::istringstream ls(line);
      int id;
      if (!(ls >> id))
        throw IoError("corrupt snapshot '" + crack_path.string() + "' line " +
                      std::to_string(snap_line));
      ids.push_back(id);
    }
    rec.crack = CrackSet(std::move(ids));

    const fs::path disp_path =
        fs::path(dir) / "snapshots" / snapshot_name("disp", rec.index);
    std::istringstream disp(slurp(disp_path));
    int disp_line = 0;
    while (std::getline(disp, line)) {
      ++disp_line;
      if (line.empty()) continue;
      rec.u.push_back(parse_double(line, disp_path, disp_line));
    }
  }
  return run;
}

// ===========================================================================
// Audit output
// ===========================================================================

std::string audit_report_json(const AuditResult& result) {
  std::ostringstream os;
  os << "{\n  \"checks\": [\n";
  for (std::size_t i = 0; i < result.checks.size(); ++i) {
    const auto& c = result.checks[i];
    os << "    {\"id\": \"" << c.id << "\", \"pass\": "
       << (c.pass ? "true" : "false") << ", \"value\": " << format_g17(c.value)
       << ", \"tolerance\": " << format_g17(c.tolerance) << ", \"detail\": \""
       << c.detail << "\"}" << (i + 1 < result.checks.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"balance\": {\"whole_run_residual\": "
     << format_g17(result.balance.whole_run.residual)
     << ", \"accumulated_residual\": "
     << format_g17(result.balance.accumulated_residual)
     << ", \"max_step_margin\": " << format_g17(result.balance.max_step_margin)
     << "},\n";
  os << "  \"jumps\": {\"max_total_jump\": "
     << format_g17(result.jumps.max_total_jump)
     << ", \"scale\": " << format_g17(result.jumps.scale) << ", \"events\": [\n";
  for (std::size_t i = 0; i < result.jumps.events.size(); ++i) {
    const auto& e = result.jumps.events[i];
    os << "    {\"step\": " << e.step << ", \"t\": " << format_g17(e.t)
       << ", \"d_bulk\": " << format_g17(e.d_bulk)
       << ", \"d_surface\": " << format_g17(e.d_surface)
       << ", \"d_total\": " << format_g17(e.d_total) << "}"
       << (i + 1 < result.jumps.events.size() ? "," : "") << "\n";
  }
  os << "  ]},\n";
  os << "  \"all_pass\": " << (result.all_pass ? "true" : "false") << "\n}\n";
  return os.str();
}

std::string audit_summary(const AuditResult& result) {
  std::ostringstream os;
  for (const auto& c : result.checks)
    os << (c.pass ? "PASS " : "FAIL ") << c.id << "  value "
       << format_g17(c.value)
       << (c.tolerance > 0.0 ? "  tolerance " + format_g17(c.tolerance) : "")
       << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
  os << (result.all_pass ? "AUDIT PASS" : "AUDIT FAIL") << "\n";
  return os.str();
}

void write_audit(const std::string& dir, const AuditResult& result) {
  write_file(fs::path(dir) / "audit_report.json", audit_report_json(result));
}

}  // namespace griffith
