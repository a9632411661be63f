#include "muskat/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "muskat/error.hpp"
#include "muskat/lemma.hpp"

#ifndef MUSKAT_VERSION
#define MUSKAT_VERSION "unknown"
#endif

namespace muskat {

namespace fs = std::filesystem;
using nlohmann::json;

std::string library_version() { return MUSKAT_VERSION; }

// ---------------------------------------------------------------- config

namespace {

struct ScenarioName {
  ScenarioId id;
  const char* name;
};

constexpr ScenarioName kScenarios[] = {
    {ScenarioId::BackwardSeed, "BACKWARD_SEED"}, {ScenarioId::ForwardRerun, "FORWARD_RERUN"},
    {ScenarioId::ConjTurnover, "CONJ_TURNOVER"}, {ScenarioId::LemmaVerify, "LEMMA_VERIFY"},
    {ScenarioId::DeltaTilt, "DELTA_TILT"},
};

int line_of(const YAML::Node& node) { return node.Mark().line + 1; }

template <class T>
T scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) throw ConfigError(field + ": expected a scalar value", line_of(node));
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field + ": cannot parse '" + node.Scalar() + "'", line_of(node));
  }
}

void check_keys(const YAML::Node& map, const std::string& section,
                std::initializer_list<const char*> allowed) {
  if (!map.IsMap()) throw ConfigError(section + ": expected a mapping", line_of(map));
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) {
      const std::string where = section.empty() ? key : section + "." + key;
      throw ConfigError("unknown key '" + where + "'", line_of(kv.first));
    }
  }
}

std::size_t grid_size(const YAML::Node& node) {
  const auto v = scalar<long long>(node, "grid.n");
  if (v < 16 || v % 2 != 0) throw ConfigError("grid.n: must be even and >= 16", line_of(node));
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string to_string(ScenarioId id) {
  for (const auto& s : kScenarios) {
    if (s.id == id) return s.name;
  }
  return "UNKNOWN";
}

ScenarioId parse_scenario(std::string_view text) {
  for (const auto& s : kScenarios) {
    if (text == s.name) return s.id;
  }
  throw ConfigError("scenario: unknown id '" + std::string(text) + "'");
}

double RunConfig::unit_eps() const {
  return eps_scale == ThresholdScale::Raw ? eps / static_cast<double>(n) : eps;
}

double RunConfig::default_t_final() const {
  switch (scenario) {
    case ScenarioId::BackwardSeed:
      return -4.92e-2;
    case ScenarioId::ForwardRerun:
      return 6e-2;
    case ScenarioId::ConjTurnover:
      return 0.3;
    case ScenarioId::DeltaTilt:
      return 1e-2;
    case ScenarioId::LemmaVerify:
      return 0.0;
  }
  return 0.0;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError(field + ": " + why);
  };
  if (n < 16 || n % 2 != 0) fail("grid.n", "must be even and >= 16");
  if (!(density_jump != 0.0) || !std::isfinite(density_jump)) {
    fail("physics.density_jump", "must be finite and nonzero");
  }
  if (!(step.dt > 0.0)) fail("integrator.dt", "must be positive");
  if (!(step.rel_tol > 0.0)) fail("integrator.rel_tol", "must be positive");
  if (!(step.abs_tol > 0.0)) fail("integrator.abs_tol", "must be positive");
  if (!(step.max_dt > 0.0)) fail("integrator.max_dt", "must be positive");
  if (!(step.min_dt > 0.0) || step.min_dt > step.max_dt) {
    fail("integrator.min_dt", "must be positive and <= max_dt");
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) fail("smoothing.eps", "must be >= 0");
  if (smooth_every == 0) fail("smoothing.every", "must be >= 1");
  if (!(snapshot_every > 0.0)) fail("run.snapshot_every", "must be positive");
  if (!(slope_tol >= 0.0)) fail("run.slope_tol", "must be >= 0");
  if (!std::isfinite(delta)) fail("run.delta", "must be finite");
  if (!(lemma_R > 9.0) || !std::isfinite(lemma_R)) fail("lemma.R", "must be > 9");
  if (!(quad_tol > 0.0)) fail("lemma.quad_tol", "must be positive");
  const double tf = resolved_t_final();
  if (!std::isfinite(tf)) fail("run.t_final", "must be finite");
  switch (scenario) {
    case ScenarioId::BackwardSeed:
      if (!(tf < 0.0)) fail("run.t_final", "must be negative for BACKWARD_SEED");
      break;
    case ScenarioId::ConjTurnover:
      if (!(tf > 0.0)) fail("run.t_final", "must be positive for CONJ_TURNOVER");
      break;
    case ScenarioId::DeltaTilt:
      if (!(tf != 0.0)) fail("run.t_final", "must be nonzero for DELTA_TILT");
      break;
    default:
      break;
  }
}

RunConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  RunConfig c;
  if (root.IsNull()) {
    c.validate();
    return c;
  }
  check_keys(root, "",
             {"scenario", "grid", "physics", "integrator", "smoothing", "run", "lemma", "output"});

  if (auto s = root["scenario"]) {
    try {
      c.scenario = parse_scenario(scalar<std::string>(s, "scenario"));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), line_of(s));
    }
  }
  if (auto g = root["grid"]) {
    check_keys(g, "grid", {"n"});
    if (g["n"]) c.n = grid_size(g["n"]);
  }
  if (auto p = root["physics"]) {
    check_keys(p, "physics", {"density_jump"});
    if (p["density_jump"]) c.density_jump = scalar<double>(p["density_jump"], "physics.density_jump");
  }
  if (auto in = root["integrator"]) {
    check_keys(in, "integrator", {"mode", "dt", "rel_tol", "abs_tol", "max_dt", "min_dt"});
    if (auto m = in["mode"]) {
      const auto mode = scalar<std::string>(m, "integrator.mode");
      if (mode == "fixed") {
        c.step.mode = StepControl::Mode::Fixed;
      } else if (mode == "adaptive") {
        c.step.mode = StepControl::Mode::Adaptive;
      } else {
        throw ConfigError("integrator.mode: expected fixed or adaptive", line_of(m));
      }
    }
    if (in["dt"]) c.step.dt = scalar<double>(in["dt"], "integrator.dt");
    if (in["rel_tol"]) c.step.rel_tol = scalar<double>(in["rel_tol"], "integrator.rel_tol");
    if (in["abs_tol"]) c.step.abs_tol = scalar<double>(in["abs_tol"], "integrator.abs_tol");
    if (in["max_dt"]) c.step.max_dt = scalar<double>(in["max_dt"], "integrator.max_dt");
    if (in["min_dt"]) c.step.min_dt = scalar<double>(in["min_dt"], "integrator.min_dt");
  }
  if (auto sm = root["smoothing"]) {
    check_keys(sm, "smoothing", {"eps", "scale", "every"});
    if (sm["eps"]) c.eps = scalar<double>(sm["eps"], "smoothing.eps");
    if (auto sc = sm["scale"]) {
      const auto v = scalar<std::string>(sc, "smoothing.scale");
      if (v == "raw") {
        c.eps_scale = ThresholdScale::Raw;
      } else if (v == "unit") {
        c.eps_scale = ThresholdScale::Unit;
      } else {
        throw ConfigError("smoothing.scale: expected raw or unit", line_of(sc));
      }
    }
    if (auto ev = sm["every"]) {
      const auto v = scalar<long long>(ev, "smoothing.every");
      if (v < 1) throw ConfigError("smoothing.every: must be >= 1", line_of(ev));
      c.smooth_every = static_cast<std::size_t>(v);
    }
  }
  if (auto r = root["run"]) {
    check_keys(r, "run", {"t_final", "snapshot_every", "slope_tol", "input", "delta"});
    if (r["t_final"]) c.t_final = scalar<double>(r["t_final"], "run.t_final");
    if (r["snapshot_every"]) c.snapshot_every = scalar<double>(r["snapshot_every"], "run.snapshot_every");
    if (r["slope_tol"]) c.slope_tol = scalar<double>(r["slope_tol"], "run.slope_tol");
    if (r["input"]) c.input = fs::path(scalar<std::string>(r["input"], "run.input"));
    if (r["delta"]) c.delta = scalar<double>(r["delta"], "run.delta");
  }
  if (auto l = root["lemma"]) {
    check_keys(l, "lemma", {"R", "quad_tol"});
    if (l["R"]) c.lemma_R = scalar<double>(l["R"], "lemma.R");
    if (l["quad_tol"]) c.quad_tol = scalar<double>(l["quad_tol"], "lemma.quad_tol");
  }
  if (auto o = root["output"]) {
    check_keys(o, "output", {"dir"});
    if (o["dir"]) c.out = fs::path(scalar<std::string>(o["dir"], "output.dir"));
  }
  c.validate();
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["scenario"] = to_string(c.scenario);
  j["grid"] = {{"n", c.n}};
  j["physics"] = {{"density_jump", c.density_jump}, {"gravity", 1.0}};
  j["integrator"] = {{"mode", c.step.mode == StepControl::Mode::Fixed ? "fixed" : "adaptive"},
                     {"dt", c.step.dt},
                     {"rel_tol", c.step.rel_tol},
                     {"abs_tol", c.step.abs_tol},
                     {"max_dt", c.step.max_dt},
                     {"min_dt", c.step.min_dt}};
  j["smoothing"] = {{"eps", c.eps},
                    {"scale", c.eps_scale == ThresholdScale::Raw ? "raw" : "unit"},
                    {"unit_eps", c.unit_eps()},
                    {"every", c.smooth_every}};
  j["run"] = {{"t_final", c.resolved_t_final()},
              {"snapshot_every", c.snapshot_every},
              {"slope_tol", c.slope_tol},
              {"delta", c.delta},
              {"input", c.input ? json(c.input->string()) : json(nullptr)}};
  j["lemma"] = {{"R", c.lemma_R}, {"quad_tol", c.quad_tol}};
  j["output"] = {{"dir", c.out.string()}};
  return j.dump();
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Ok:
      return "OK";
    case RunStatus::NumericalFailure:
      return "NUMERICAL_FAILURE";
    case RunStatus::Error:
      return "ERROR";
  }
  return "ERROR";
}

std::string RunManifest::to_json() const {
  json j;
  j["status"] = to_string(status);
  j["message"] = message;
  j["version"] = version;
  j["wall_seconds"] = wall_seconds;
  j["config"] = config_json.empty() ? json::object() : json::parse(config_json);
  j["events"] = json::array();
  for (const auto& e : events) {
    j["events"].push_back({{"time", e.time}, {"kind", to_string(e.kind)}, {"detail", e.detail}});
  }
  j["timeline"] = timeline;
  j["files"] = files;
  j["summary"] = json::parse(summary_json);
  return j.dump(2);
}

// -------------------------------------------------------------- snapshots

void export_snapshot(const SampledCurve& curve, double time, const fs::path& path,
                     const FilterSpec& filter) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot write snapshot " + path.string());
  const auto d1 = curve.dz1(filter);
  const auto d2 = curve.dz2(filter);
  const auto& grid = curve.grid();
  std::fprintf(f, "# t = %.17g\nalpha,z1,z2,dz1,dz2,p1\n", time);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", grid.node(i), curve.z1(i),
                 curve.z2()[i], d1[i], d2[i], curve.p1()[i]);
  }
  if (std::fclose(f) != 0) throw Error("error writing snapshot " + path.string());
}

ImportedSnapshot import_snapshot(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open snapshot " + path.string());
  std::optional<double> time;
  std::vector<double> alpha, z1, z2, p1;
  bool have_p1 = false;
  bool header = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (line.find("t") != std::string::npos && eq != std::string::npos) {
        time = std::stod(line.substr(eq + 1));
      }
      continue;
    }
    if (!header) {
      header = true;
      have_p1 = line.find("p1") != std::string::npos;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (row.size() < 5) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": expected at least 5 columns");
    }
    alpha.push_back(row[0]);
    z1.push_back(row[1]);
    z2.push_back(row[2]);
    if (have_p1 && row.size() >= 6) p1.push_back(row[5]);
  }
  const Grid grid(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (std::abs(alpha[i] - grid.node(i)) > 1e-12) {
      throw Error(path.string() + ": alpha column is not the uniform grid on [-pi, pi)");
    }
  }
  if (p1.size() != alpha.size()) {
    p1.resize(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) p1[i] = z1[i] - grid.node(i);
  }
  return {SampledCurve(grid, std::move(p1), std::move(z2)), time};
}

// -------------------------------------------------------------- scenarios

namespace {

json sample_json(const CurveSample& s) {
  return {{"alpha", s.alpha}, {"z1", s.z1}, {"z2", s.z2}, {"slope", s.slope}};
}

json turning_json(const TurningReport& r) {
  json j;
  j["min_slope"] = r.min_slope;
  j["argmin"] = r.argmin;
  j["regime"] = to_string(r.regime);
  j["tangent_points"] = json::array();
  for (const auto& s : r.tangent_points) j["tangent_points"].push_back(sample_json(s));
  j["slope_minima"] = json::array();
  for (const auto& s : r.slope_minima) j["slope_minima"].push_back(sample_json(s));
  return j;
}

class Writer {
 public:
  Writer(fs::path root, RunManifest& manifest) : root_(std::move(root)), manifest_(manifest) {}

  fs::path path(const std::string& rel) const { return root_ / rel; }

  std::FILE* open(const std::string& rel) {
    const fs::path p = path(rel);
    fs::create_directories(p.parent_path());
    std::FILE* f = std::fopen(p.c_str(), "w");
    if (!f) throw Error("cannot write " + p.string());
    manifest_.files.push_back(rel);
    return f;
  }

  void snapshot(const std::string& rel, const SampledCurve& c, double t) {
    export_snapshot(c, t, path(rel));
    manifest_.files.push_back(rel);
  }

 private:
  fs::path root_;
  RunManifest& manifest_;
};

struct Leg {
  Trajectory trajectory;
  std::vector<Event> events;  // failures and regime changes, in time order
  std::vector<RegimeInterval> timeline;
};

void write_leg(Writer& w, const std::string& name, const Leg& leg, double slope_tol) {
  const auto& tr = leg.trajectory;
  char buf[64];
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%s/snap_%05zu.csv", name.c_str(), k);
    w.snapshot(buf, tr.snapshots[k], tr.times[k]);
  }
  w.snapshot(name + "/terminal.csv", tr.snapshots.back(), tr.times.back());

  std::FILE* f = w.open(name + "/events.csv");
  std::fprintf(f, "time,kind,detail\n");
  for (const auto& e : leg.events) {
    std::fprintf(f, "%.17g,%s,\"%s\"\n", e.time, to_string(e.kind).c_str(), e.detail.c_str());
  }
  std::fclose(f);

  f = w.open(name + "/timeline.csv");
  std::fprintf(f, "t_begin,t_end,regime\n");
  for (const auto& iv : leg.timeline) {
    std::fprintf(f, "%.17g,%.17g,%s\n", iv.t_begin, iv.t_end, to_string(iv.regime).c_str());
  }
  std::fclose(f);

  const auto norms = norm_series(tr, tr.recipe.rhs.filter);
  f = w.open(name + "/norms.csv");
  std::fprintf(f, "t,sup_f,sup_slope,min_dz1,regime\n");
  for (std::size_t k = 0; k < norms.times.size(); ++k) {
    const double m = min_dz1(tr.snapshots[k]).value;
    if (norms.sup_slope[k]) {
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%s\n", norms.times[k], norms.sup_f[k],
                   *norms.sup_slope[k], m, to_string(classify(m, slope_tol)).c_str());
    } else {
      std::fprintf(f, "%.17g,%.17g,,%.17g,%s\n", norms.times[k], norms.sup_f[k], m,
                   to_string(classify(m, slope_tol)).c_str());
    }
  }
  std::fclose(f);
}

Leg finish_leg(Trajectory tr, double slope_tol) {
  auto events = detect_event_times(tr);
  auto timeline = regime_timeline(tr, events, slope_tol);
  events.insert(events.end(), tr.events.begin(), tr.events.end());
  const double dir = tr.direction();
  std::stable_sort(events.begin(), events.end(),
                   [dir](const Event& a, const Event& b) { return dir * a.time < dir * b.time; });
  return {std::move(tr), std::move(events), std::move(timeline)};
}

/// Appends b (which starts where a ends) to a.
void splice(Trajectory& a, const Trajectory& b) {
  for (std::size_t k = 1; k < b.times.size(); ++k) {
    a.times.push_back(b.times[k]);
    a.snapshots.push_back(b.snapshots[k]);
  }
  a.events.insert(a.events.end(), b.events.begin(), b.events.end());
}

Leg run_backward(const RunConfig& c, const SampledCurve& start, double t_final) {
  BackwardOptions opts;
  opts.snapshot_every = c.snapshot_every;
  opts.smooth_every = c.smooth_every;
  return finish_leg(evolve_backward_regularized(start, PhysicalParams(c.density_jump), t_final,
                                                c.step.dt, c.unit_eps(), opts),
                    c.slope_tol);
}

Leg run_forward(const RunConfig& c, const SampledCurve& start, double t_start, double t_end,
                bool stop_on_unstable, const std::vector<double>& waypoints = {}) {
  const PhysicalParams params(c.density_jump);
  ForwardOptions opts;
  opts.t_start = t_start;
  opts.stop_on_unstable = stop_on_unstable;
  // Legs end exactly on each waypoint so states there are recorded.
  std::vector<double> ends;
  for (double w : waypoints) {
    if (w > t_start && w < t_end) ends.push_back(w);
  }
  ends.push_back(t_end);
  Trajectory tr = evolve_forward(start, params, ends.front(), c.step, c.snapshot_every, opts);
  for (std::size_t k = 1; k < ends.size() && !tr.failed(); ++k) {
    if (stop_on_unstable && min_dz1(tr.snapshots.back()).value <= 0.0) break;
    opts.t_start = tr.times.back();
    splice(tr, evolve_forward(tr.snapshots.back(), params, ends[k], c.step, c.snapshot_every,
                              opts));
  }
  return finish_leg(std::move(tr), c.slope_tol);
}

bool leg_failed(const Leg& leg) { return leg.trajectory.failed(); }

json events_json(const std::vector<Event>& events) {
  json j = json::array();
  for (const auto& e : events) j.push_back({{"time", e.time}, {"kind", to_string(e.kind)}});
  return j;
}

void adopt(RunManifest& m, const Leg& leg) {
  m.events.insert(m.events.end(), leg.events.begin(), leg.events.end());
  if (leg_failed(leg)) {
    m.status = RunStatus::NumericalFailure;
    for (const auto& e : leg.trajectory.events) m.message = e.detail;
  }
}

/// Relative max-norm distance between two curves over |alpha| <= window.
double distance_near_origin(const SampledCurve& a, const SampledCurve& b, double window) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.grid().node(i)) > window) continue;
    num = std::max({num, std::abs(a.p1()[i] - b.p1()[i]), std::abs(a.z2()[i] - b.z2()[i])});
    den = std::max({den, std::abs(b.p1()[i]), std::abs(b.z2()[i])});
  }
  return den > 0.0 ? num / den : num;
}

constexpr double kSeedBackwardTime = -4.92e-2;

json backward_seed(const RunConfig& c, double t_final, Writer& w, RunManifest& m,
                   const std::string& name) {
  const Grid grid(c.n);
  const auto seed = sample_preset(PresetId{PresetKind::SeedT0, 0.0}, grid);
  const Leg leg = run_backward(c, seed, t_final);
  write_leg(w, name, leg, c.slope_tol);
  adopt(m, leg);
  m.timeline = pattern(leg.timeline);

  TurningOptions topts;
  topts.slope_tol = c.slope_tol;
  json j;
  j["terminal_time"] = leg.trajectory.times.back();
  j["terminal"] = turning_json(turning_report(leg.trajectory.snapshots.back(), topts));
  j["events"] = events_json(leg.events);
  j["timeline"] = m.timeline;
  return j;
}

json forward_rerun(const RunConfig& c, Writer& w, RunManifest& m) {
  fs::path input;
  json j;
  if (c.input) {
    input = *c.input;
  } else {
    RunConfig bc = c;
    bc.scenario = ScenarioId::BackwardSeed;
    j["backward"] = backward_seed(bc, kSeedBackwardTime, w, m, "backward");
    m.events.clear();
    if (m.status != RunStatus::Ok) return j;
    input = w.path("backward/terminal.csv");
  }
  const auto snap = import_snapshot(input);
  if (snap.curve.size() != c.n) {
    throw ConfigError("grid.n: input snapshot has " + std::to_string(snap.curve.size()) +
                      " nodes, config asks for " + std::to_string(c.n));
  }
  const double t0 = snap.time.value_or(kSeedBackwardTime);
  const double t1 = c.resolved_t_final();
  if (!(t1 > t0)) throw ConfigError("run.t_final: must exceed the input snapshot time");

  const Leg leg = run_forward(c, snap.curve, t0, t1, false, {0.0});
  write_leg(w, "forward", leg, c.slope_tol);
  adopt(m, leg);
  m.timeline = pattern(leg.timeline);

  j["input"] = input.string();
  j["t_start"] = t0;
  j["events"] = events_json(leg.events);
  j["timeline"] = m.timeline;
  const auto& tr = leg.trajectory;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    if (tr.times[k] == 0.0) {
      const auto seed = sample_preset(PresetId{PresetKind::SeedT0, 0.0}, Grid(c.n));
      j["seed_return_rel_distance"] = distance_near_origin(tr.snapshots[k], seed, 0.5);
    }
  }
  return j;
}

json conj_turnover(const RunConfig& c, Writer& w, RunManifest& m) {
  const auto curve0 = sample_preset(PresetId{PresetKind::ConjT0, 0.0}, Grid(c.n));
  const auto graph = to_graph(curve0);
  double max_slope = 0.0;
  for (double s : graph.slope) max_slope = std::max(max_slope, std::abs(s));

  const Leg leg = run_forward(c, curve0, 0.0, c.resolved_t_final(), true);
  write_leg(w, "forward", leg, c.slope_tol);
  adopt(m, leg);
  m.timeline = pattern(leg.timeline);

  json j;
  j["initial_max_slope"] = max_slope;
  j["events"] = events_json(leg.events);
  j["timeline"] = m.timeline;
  j["t_star"] = nullptr;
  for (const auto& e : leg.events) {
    if (e.kind == EventKind::EnterUnstable) {
      j["t_star"] = e.time;
      break;
    }
  }
  return j;
}

json delta_tilt(const RunConfig& c, Writer& w, RunManifest& m) {
  const auto curve0 = sample_preset(PresetId{PresetKind::DeltaTilt, c.delta}, Grid(c.n));
  const double span = std::abs(c.resolved_t_final());
  TurningOptions topts;
  topts.slope_tol = c.slope_tol;

  json j;
  j["delta"] = c.delta;
  j["initial"] = turning_json(turning_report(curve0, topts));
  std::string timeline;
  const Leg fwd = run_forward(c, curve0, 0.0, span, false);
  write_leg(w, "forward", fwd, c.slope_tol);
  adopt(m, fwd);
  j["forward"] = {{"timeline", pattern(fwd.timeline)},
                  {"events", events_json(fwd.events)},
                  {"terminal", turning_json(turning_report(fwd.trajectory.snapshots.back(), topts))}};

  const Leg bwd = run_backward(c, curve0, -span);
  write_leg(w, "backward", bwd, c.slope_tol);
  adopt(m, bwd);
  j["backward"] = {{"timeline", pattern(bwd.timeline)},
                   {"events", events_json(bwd.events)},
                   {"terminal", turning_json(turning_report(bwd.trajectory.snapshots.back(), topts))}};

  // Whole history in time order: backward leg reversed, then forward.
  std::vector<RegimeInterval> all = bwd.timeline;
  for (const auto& iv : fwd.timeline) {
    if (!all.empty() && all.back().regime == iv.regime) {
      all.back().t_end = iv.t_end;
    } else {
      all.push_back(iv);
    }
  }
  m.timeline = pattern(all);
  j["timeline"] = m.timeline;
  return j;
}

json lemma_verify(const RunConfig& c, Writer& w) {
  const std::string report = lemma::verification_report(c.lemma_R, c.quad_tol);
  std::FILE* f = w.open("lemma_report.json");
  std::fputs(report.c_str(), f);
  std::fputc('\n', f);
  std::fclose(f);
  return json::parse(report);
}

}  // namespace

RunManifest run_scenario(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest m;
  m.version = library_version();
  m.config_json = config_to_json(config);
  json summary = json::object();
  fs::create_directories(config.out);
  Writer w(config.out, m);
  try {
    config.validate();
    switch (config.scenario) {
      case ScenarioId::BackwardSeed:
        summary = backward_seed(config, config.resolved_t_final(), w, m, "backward");
        break;
      case ScenarioId::ForwardRerun:
        summary = forward_rerun(config, w, m);
        break;
      case ScenarioId::ConjTurnover:
        summary = conj_turnover(config, w, m);
        break;
      case ScenarioId::LemmaVerify:
        summary = lemma_verify(config, w);
        break;
      case ScenarioId::DeltaTilt:
        summary = delta_tilt(config, w, m);
        break;
    }
  } catch (const ArcChordFailure& e) {
    m.status = RunStatus::NumericalFailure;
    m.message = e.what();
  } catch (const NumericalFailure& e) {
    m.status = RunStatus::NumericalFailure;
    m.message = e.what();
  } catch (const std::exception& e) {
    m.status = RunStatus::Error;
    m.message = e.what();
  }
  summary["time_convention"] =
      "times depend on density_jump = " + std::to_string(config.density_jump);
  m.summary_json = summary.dump();
  m.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path manifest_path = config.out / "manifest.json";
  m.files.push_back("manifest.json");
  std::ofstream out(manifest_path);
  out << m.to_json() << "\n";
  if (!out) throw Error("cannot write " + manifest_path.string());
  return m;
}

}  // namespace muskat
