#include "griffith/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "griffith/format.hpp"
#include "json.hpp"

namespace griffith {

namespace {

using nlohmann::json;

// Tracks which keys of an object were consumed; anything left over is a hard
// error naming the key, so misspellings never fall back to defaults.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object())
      throw ConfigError("config section '" + path_ + "' must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, T fallback) {
    consumed_.insert(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config key '" + path_ + "." + key +
                        "' has the wrong type");
    }
  }

  const json* child(const std::string& key) {
    consumed_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (consumed_.find(item.key()) == consumed_.end())
        throw ConfigError("unknown config key '" + path_ + "." + item.key() +
                          "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> consumed_;
};

SpatialField parse_spatial(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SpatialField f;
  const std::string family = r.get<std::string>("family", "constant");
  if (family == "constant") {
    f.family = SpatialField::Family::Constant;
  } else if (family == "step") {
    f.family = SpatialField::Family::Step;
    f.axis = r.get<int>("axis", 0);
    f.threshold = r.get<double>("threshold", 0.0);
    f.low = r.get<double>("low", 1.0);
    f.high = r.get<double>("high", 1.0);
  } else if (family == "linear") {
    f.family = SpatialField::Family::Linear;
    f.a = r.get<double>("a", 1.0);
    f.b = r.get<double>("b", 0.0);
    f.c = r.get<double>("c", 0.0);
  } else if (family == "random") {
    f.family = SpatialField::Family::Random;
    f.seed = r.get<std::uint64_t>("seed", 0);
    f.low = r.get<double>("low", 0.5);
    f.high = r.get<double>("high", 1.5);
  } else {
    throw ConfigError("unknown spatial family '" + family + "' in " + path);
  }
  r.finish();
  return f;
}

GeometryConfig parse_geometry(const json& j) {
  ObjectReader r(j, "geometry");
  GeometryConfig g;
  g.dimension = r.get<int>("dimension", 1);
  if (g.dimension == 1) {
    g.length_x = r.get<double>("length", 1.0);
    g.cells_x = r.get<int>("cells", 4);
  } else {
    if (const json* lengths = r.child("lengths")) {
      if (!lengths->is_array() || lengths->size() != 2)
        throw ConfigError("geometry.lengths must be [Lx, Ly]");
      g.length_x = lengths->at(0).get<double>();
      g.length_y = lengths->at(1).get<double>();
    }
    if (const json* cells = r.child("cells")) {
      if (!cells->is_array() || cells->size() != 2)
        throw ConfigError("geometry.cells must be [nx, ny]");
      g.cells_x = cells->at(0).get<int>();
      g.cells_y = cells->at(1).get<int>();
    }
    g.dirichlet_left = g.dirichlet_right = false;
    if (const json* edges = r.child("dirichlet_edges")) {
      for (const auto& e : *edges) {
        const std::string name = e.get<std::string>();
        if (name == "left")
          g.dirichlet_left = true;
        else if (name == "right")
          g.dirichlet_right = true;
        else if (name == "bottom")
          g.dirichlet_bottom = true;
        else if (name == "top")
          g.dirichlet_top = true;
        else
          throw ConfigError("unknown Dirichlet edge '" + name + "'");
      }
    } else {
      g.dirichlet_left = g.dirichlet_right = true;
    }
  }
  r.finish();
  return g;
}

BulkLaw parse_bulk(const json& j) {
  ObjectReader r(j, "bulk");
  BulkLaw law;
  const std::string family = r.get<std::string>("family", "quadratic");
  if (family == "quadratic")
    law.family = BulkLaw::Family::Quadratic;
  else if (family == "p_power")
    law.family = BulkLaw::Family::PPower;
  else if (family == "flat_well")
    law.family = BulkLaw::Family::FlatWell;
  else
    throw ConfigError("unknown bulk family '" + family + "'");
  law.mu = r.get<double>("mu", 1.0);
  law.p = r.get<double>("p", 2.0);
  if (const json* mod = r.child("modulation"))
    law.modulation = parse_spatial(*mod, "bulk.modulation");
  r.finish();
  return law;
}

ToughnessLaw parse_toughness(const json& j) {
  ObjectReader r(j, "toughness");
  ToughnessLaw law;
  law.kappa0 = r.get<double>("kappa0", 1.0);
  if (const json* sp = r.child("spatial"))
    law.spatial = parse_spatial(*sp, "toughness.spatial");
  if (const json* an = r.child("anisotropy")) {
    ObjectReader a(*an, "toughness.anisotropy");
    const std::string family = a.get<std::string>("family", "isotropic");
    if (family == "isotropic")
      law.aniso = ToughnessLaw::Aniso::Isotropic;
    else if (family == "quadratic_axis")
      law.aniso = ToughnessLaw::Aniso::QuadraticAxis;
    else if (family == "abs_axis")
      law.aniso = ToughnessLaw::Aniso::AbsAxis;
    else if (family == "linear_axis")
      law.aniso = ToughnessLaw::Aniso::LinearAxis;
    else
      throw ConfigError("unknown anisotropy family '" + family + "'");
    law.aniso_strength = a.get<double>("strength", 0.0);
    if (const json* axis = a.child("axis")) {
      if (!axis->is_array() || axis->size() != 2)
        throw ConfigError("toughness.anisotropy.axis must be [x, y]");
      law.aniso_axis = {axis->at(0).get<double>(), axis->at(1).get<double>()};
    }
    a.finish();
  }
  law.kappa_min = r.get<double>("kappa_min", 0.0);
  law.kappa_max = r.get<double>("kappa_max", 0.0);
  r.finish();
  return law;
}

LoadLaw parse_load(const json& j) {
  ObjectReader r(j, "load");
  LoadLaw law;
  const std::string family = r.get<std::string>("family", "none");
  if (family == "none")
    law.family = LoadLaw::Family::None;
  else if (family == "quadratic_well")
    law.family = LoadLaw::Family::QuadraticWell;
  else if (family == "dead_load")
    law.family = LoadLaw::Family::DeadLoad;
  else
    throw ConfigError("unknown load family '" + family + "'");
  law.weight = r.get<double>("weight", 1.0);
  if (const json* target = r.child("target")) {
    ObjectReader tr(*target, "load.target");
    law.gt = tr.get<double>("t", 0.0);
    law.gx = tr.get<double>("x", 0.0);
    law.gy = tr.get<double>("y", 0.0);
    law.g0 = tr.get<double>("const", 0.0);
    tr.finish();
  }
  law.dead = r.get<double>("dead", 0.0);
  law.alpha = r.get<double>("alpha", 0.0);
  law.beta = r.get<double>("beta", 0.0);
  law.q = r.get<double>("q", 2.0);
  law.coercivity_waiver = r.get<bool>("coercivity_waiver", false);
  r.finish();
  return law;
}

BoundaryProgram parse_boundary(const json& j) {
  ObjectReader r(j, "boundary");
  BoundaryProgram program;
  program.rate = r.get<double>("rate", 1.0);
  if (const json* prof = r.child("profile")) {
    ObjectReader p(*prof, "boundary.profile");
    program.prof_a = p.get<double>("a", 0.0);
    program.prof_b = p.get<double>("b", 1.0);
    program.prof_c = p.get<double>("c", 0.0);
    p.finish();
  }
  program.lipschitz = r.get<double>("lipschitz", 0.0);
  r.finish();
  return program;
}

TimeGridConfig parse_time(const json& j) {
  ObjectReader r(j, "time");
  TimeGridConfig t;
  t.dt = r.get<double>("dt", 0.01);
  t.t_end = r.get<double>("T", 1.0);
  if (const json* times = r.child("times"))
    t.explicit_times = times->get<std::vector<double>>();
  r.finish();
  return t;
}

CandidateFilter parse_candidates(const json& j) {
  CandidateFilter f;
  if (j.is_string()) {
    const std::string kind = j.get<std::string>();
    if (kind == "all")
      f.kind = CandidateFilter::Kind::All;
    else if (kind == "interior")
      f.kind = CandidateFilter::Kind::Interior;
    else if (kind == "anchors")
      f.kind = CandidateFilter::Kind::Anchors;
    else
      throw ConfigError("unknown candidate filter '" + kind + "'");
    return f;
  }
  ObjectReader r(j, "strategy.candidates");
  const std::string kind = r.get<std::string>("kind", "all");
  if (kind == "list") {
    f.kind = CandidateFilter::Kind::List;
    f.ids = r.get<std::vector<int>>("ids", {});
  } else if (kind == "box") {
    f.kind = CandidateFilter::Kind::Box;
    if (const json* lo = r.child("min")) {
      f.box_min_x = lo->at(0).get<double>();
      f.box_min_y = lo->size() > 1 ? lo->at(1).get<double>() : 0.0;
    }
    if (const json* hi = r.child("max")) {
      f.box_max_x = hi->at(0).get<double>();
      f.box_max_y = hi->size() > 1 ? hi->at(1).get<double>() : 0.0;
    }
  } else {
    throw ConfigError("unknown candidate filter kind '" + kind + "'");
  }
  r.finish();
  return f;
}

StrategyConfig parse_strategy(const json& j) {
  ObjectReader r(j, "strategy");
  StrategyConfig s;
  const std::string mode = r.get<std::string>("mode", "exhaustive");
  if (mode == "exhaustive")
    s.mode = StrategyConfig::Mode::Exhaustive;
  else if (mode == "greedy")
    s.mode = StrategyConfig::Mode::Greedy;
  else
    throw ConfigError("unknown strategy mode '" + mode + "'");
  s.exhaustive_limit = r.get<std::uint64_t>("exhaustive_limit", 1u << 20);
  s.greedy_fallback = r.get<bool>("greedy_fallback", false);
  if (const json* cands = r.child("candidates"))
    s.candidates = parse_candidates(*cands);
  s.tie_tolerance = r.get<double>("tie_tolerance", 1e-12);
  r.finish();
  return s;
}

AuditConfig parse_audit(const json& j) {
  ObjectReader r(j, "audit");
  AuditConfig a;
  a.stability_tol = r.get<double>("stability_tol", 1e-9);
  a.balance_factor = r.get<double>("balance_factor", 10.0);
  a.jump_threshold = r.get<double>("jump_threshold", 0.5);
  a.competitor_samples = r.get<int>("competitor_samples", 64);
  r.finish();
  return a;
}

std::string spatial_to_json(const SpatialField& f) {
  std::ostringstream os;
  switch (f.family) {
    case SpatialField::Family::Constant:
      os << "{\"family\":\"constant\"}";
      break;
    case SpatialField::Family::Step:
      os << "{\"family\":\"step\",\"axis\":" << f.axis
         << ",\"threshold\":" << format_g17(f.threshold)
         << ",\"low\":" << format_g17(f.low)
         << ",\"high\":" << format_g17(f.high) << "}";
      break;
    case SpatialField::Family::Linear:
      os << "{\"family\":\"linear\",\"a\":" << format_g17(f.a)
         << ",\"b\":" << format_g17(f.b) << ",\"c\":" << format_g17(f.c) << "}";
      break;
    case SpatialField::Family::Random:
      os << "{\"family\":\"random\",\"seed\":" << f.seed
         << ",\"low\":" << format_g17(f.low)
         << ",\"high\":" << format_g17(f.high) << "}";
      break;
  }
  return os.str();
}

}  // namespace

ProblemSpec parse_problem(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ObjectReader r(j, "config");
  ProblemSpec spec;
  if (const json* s = r.child("geometry")) spec.geometry = parse_geometry(*s);
  if (const json* s = r.child("bulk")) spec.bulk = parse_bulk(*s);
  if (const json* s = r.child("toughness")) spec.toughness = parse_toughness(*s);
  if (const json* s = r.child("load")) spec.load = parse_load(*s);
  if (const json* s = r.child("boundary")) spec.boundary = parse_boundary(*s);
  if (const json* s = r.child("time")) spec.time = parse_time(*s);
  if (const json* s = r.child("strategy")) spec.strategy = parse_strategy(*s);
  if (const json* s = r.child("audit")) spec.audit = parse_audit(*s);
  if (const json* s = r.child("output")) {
    ObjectReader o(*s, "output");
    spec.output.dir = o.get<std::string>("dir", "out");
    o.finish();
  }
  spec.seed = r.get<std::uint64_t>("seed", 0);
  spec.initial_crack = r.get<std::vector<int>>("initial_crack", {});
  r.finish();
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string serialize_problem(const ProblemSpec& spec) {
  std::ostringstream os;
  os << "{\n";
  // geometry
  os << "  \"geometry\": {\"dimension\": " << spec.geometry.dimension;
  if (spec.geometry.dimension == 1) {
    os << ", \"length\": " << format_g17(spec.geometry.length_x)
       << ", \"cells\": " << spec.geometry.cells_x << "},\n";
  } else {
    os << ", \"lengths\": [" << format_g17(spec.geometry.length_x) << ", "
       << format_g17(spec.geometry.length_y) << "], \"cells\": ["
       << spec.geometry.cells_x << ", " << spec.geometry.cells_y
       << "], \"dirichlet_edges\": [";
    bool first = true;
    const auto edge = [&](bool on, const char* name) {
      if (!on) return;
      if (!first) os << ", ";
      os << '"' << name << '"';
      first = false;
    };
    edge(spec.geometry.dirichlet_left, "left");
    edge(spec.geometry.dirichlet_right, "right");
    edge(spec.geometry.dirichlet_bottom, "bottom");
    edge(spec.geometry.dirichlet_top, "top");
    os << "]},\n";
  }
  // bulk
  const char* bulk_family = spec.bulk.family == BulkLaw::Family::Quadratic
                                ? "quadratic"
                                : spec.bulk.family == BulkLaw::Family::PPower
                                      ? "p_power"
                                      : "flat_well";
  os << "  \"bulk\": {\"family\": \"" << bulk_family
     << "\", \"mu\": " << format_g17(spec.bulk.mu)
     << ", \"p\": " << format_g17(spec.bulk.p)
     << ", \"modulation\": " << spatial_to_json(spec.bulk.modulation) << "},\n";
  // toughness
  const char* aniso = nullptr;
  switch (spec.toughness.aniso) {
    case ToughnessLaw::Aniso::Isotropic: aniso = "isotropic"; break;
    case ToughnessLaw::Aniso::QuadraticAxis: aniso = "quadratic_axis"; break;
    case ToughnessLaw::Aniso::AbsAxis: aniso = "abs_axis"; break;
    case ToughnessLaw::Aniso::LinearAxis: aniso = "linear_axis"; break;
  }
  os << "  \"toughness\": {\"kappa0\": " << format_g17(spec.toughness.kappa0)
     << ", \"spatial\": " << spatial_to_json(spec.toughness.spatial)
     << ", \"anisotropy\": {\"family\": \"" << aniso
     << "\", \"strength\": " << format_g17(spec.toughness.aniso_strength)
     << ", \"axis\": [" << format_g17(spec.toughness.aniso_axis.x) << ", "
     << format_g17(spec.toughness.aniso_axis.y) << "]}"
     << ", \"kappa_min\": " << format_g17(spec.toughness.kappa_min)
     << ", \"kappa_max\": " << format_g17(spec.toughness.kappa_max) << "},\n";
  // load
  const char* load_family = spec.load.family == LoadLaw::Family::None
                                ? "none"
                                : spec.load.family == LoadLaw::Family::QuadraticWell
                                      ? "quadratic_well"
                                      : "dead_load";
  os << "  \"load\": {\"family\": \"" << load_family
     << "\", \"weight\": " << format_g17(spec.load.weight)
     << ", \"target\": {\"t\": " << format_g17(spec.load.gt)
     << ", \"x\": " << format_g17(spec.load.gx)
     << ", \"y\": " << format_g17(spec.load.gy)
     << ", \"const\": " << format_g17(spec.load.g0) << "}"
     << ", \"dead\": " << format_g17(spec.load.dead)
     << ", \"alpha\": " << format_g17(spec.load.alpha)
     << ", \"beta\": " << format_g17(spec.load.beta)
     << ", \"q\": " << format_g17(spec.load.q) << ", \"coercivity_waiver\": "
     << (spec.load.coercivity_waiver ? "true" : "false") << "},\n";
  // boundary
  os << "  \"boundary\": {\"rate\": " << format_g17(spec.boundary.rate)
     << ", \"profile\": {\"a\": " << format_g17(spec.boundary.prof_a)
     << ", \"b\": " << format_g17(spec.boundary.prof_b)
     << ", \"c\": " << format_g17(spec.boundary.prof_c) << "}"
     << ", \"lipschitz\": " << format_g17(spec.boundary.lipschitz) << "},\n";
  // time
  os << "  \"time\": {";
  if (spec.time.explicit_times.empty()) {
    os << "\"dt\": " << format_g17(spec.time.dt)
       << ", \"T\": " << format_g17(spec.time.t_end);
  } else {
    os << "\"times\": [";
    for (std::size_t i = 0; i < spec.time.explicit_times.size(); ++i)
      os << (i ? ", " : "") << format_g17(spec.time.explicit_times[i]);
    os << "]";
  }
  os << "},\n";
  // strategy
  os << "  \"strategy\": {\"mode\": \""
     << (spec.strategy.mode == StrategyConfig::Mode::Exhaustive ? "exhaustive"
                                                                : "greedy")
     << "\", \"exhaustive_limit\": " << spec.strategy.exhaustive_limit
     << ", \"greedy_fallback\": "
     << (spec.strategy.greedy_fallback ? "true" : "false")
     << ", \"candidates\": ";
  switch (spec.strategy.candidates.kind) {
    case CandidateFilter::Kind::All: os << "\"all\""; break;
    case CandidateFilter::Kind::Interior: os << "\"interior\""; break;
    case CandidateFilter::Kind::Anchors: os << "\"anchors\""; break;
    case CandidateFilter::Kind::List: {
      os << "{\"kind\": \"list\", \"ids\": [";
      for (std::size_t i = 0; i < spec.strategy.candidates.ids.size(); ++i)
        os << (i ? ", " : "") << spec.strategy.candidates.ids[i];
      os << "]}";
      break;
    }
    case CandidateFilter::Kind::Box:
      os << "{\"kind\": \"box\", \"min\": ["
         << format_g17(spec.strategy.candidates.box_min_x) << ", "
         << format_g17(spec.strategy.candidates.box_min_y) << "], \"max\": ["
         << format_g17(spec.strategy.candidates.box_max_x) << ", "
         << format_g17(spec.strategy.candidates.box_max_y) << "]}";
      break;
  }
  os << ", \"tie_tolerance\": " << format_g17(spec.strategy.tie_tolerance)
     << "},\n";
  // audit
  os << "  \"audit\": {\"stability_tol\": " << format_g17(spec.audit.stability_tol)
     << ", \"balance_factor\": " << format_g17(spec.audit.balance_factor)
     << ", \"jump_threshold\": " << format_g17(spec.audit.jump_threshold)
     << ", \"competitor_samples\": " << spec.audit.competitor_samples << "},\n";
  // output, seed, initial crack
  os << "  \"output\": {\"dir\": \"" << spec.output.dir << "\"},\n";
  os << "  \"seed\": " << spec.seed << ",\n";
  os << "  \"initial_crack\": [";
  for (std::size_t i = 0; i < spec.initial_crack.size(); ++i)
    os << (i ? ", " : "") << spec.initial_crack[i];
  os << "]\n}\n";
  return os.str();
}

LemmaConfig parse_lemma(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ObjectReader r(j, "config");
  LemmaConfig cfg;
  if (const json* s = r.child("lemma")) {
    ObjectReader l(*s, "lemma");
    const std::string profile = l.get<std::string>("profile", "sawtooth");
    if (profile == "sawtooth")
      cfg.sequence.profile = SequenceSpec::Profile::Sawtooth;
    else if (profile == "perturbation")
      cfg.sequence.profile = SequenceSpec::Profile::Perturbation;
    else
      throw ConfigError("unknown lemma profile '" + profile + "'");
    cfg.sequence.k_list = l.get<std::vector<int>>("k", {1, 2, 4, 8, 16, 32, 64});
    int kmax = 1;
    for (int k : cfg.sequence.k_list) kmax = std::max(kmax, k);
    cfg.sequence.resolution = l.get<int>("resolution", 64 * kmax);
    cfg.sequence.base_slope = l.get<double>("base_slope", 0.0);
    cfg.sequence.eps_scale = l.get<double>("eps_scale", 1.0);
    l.finish();
  }
  if (const json* s = r.child("bulk")) cfg.bulk = parse_bulk(*s);
  if (const json* s = r.child("output")) {
    ObjectReader o(*s, "output");
    cfg.output.dir = o.get<std::string>("dir", "out");
    o.finish();
  }
  r.finish();
  return cfg;
}

LemmaConfig load_lemma(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lemma(buf.str());
}

void apply_overrides(ProblemSpec& spec, const CliOverrides& overrides) {
  if (overrides.dt) {
    spec.time.dt = *overrides.dt;
    spec.time.explicit_times.clear();
  }
  if (overrides.t_end) {
    spec.time.t_end = *overrides.t_end;
    spec.time.explicit_times.clear();
  }
  if (overrides.strategy) {
    if (*overrides.strategy == "exhaustive")
      spec.strategy.mode = StrategyConfig::Mode::Exhaustive;
    else if (*overrides.strategy == "greedy")
      spec.strategy.mode = StrategyConfig::Mode::Greedy;
    else
      throw ConfigError("unknown strategy '" + *overrides.strategy + "'");
  }
  if (overrides.seed) spec.seed = *overrides.seed;
  if (overrides.out_dir) spec.output.dir = *overrides.out_dir;
}

}  // namespace griffith
