#include "tesim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace tesim {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string join_problems(const std::vector<std::string>& problems) {
  std::ostringstream out;
  out << "invalid configuration (" << problems.size() << " problem"
      << (problems.size() == 1 ? "" : "s") << "):";
  for (const auto& p : problems) out << "\n  - " << p;
  return out.str();
}

/// SAX pass that only watches object keys so duplicates can be rejected;
/// the DOM parser below silently keeps the last duplicate otherwise.
struct DuplicateKeyDetector : json::json_sax_t {
  std::vector<std::set<std::string>> scopes;
  std::string message;

  bool null() override { return true; }
  bool boolean(bool) override { return true; }
  bool number_integer(number_integer_t) override { return true; }
  bool number_unsigned(number_unsigned_t) override { return true; }
  bool number_float(number_float_t, const string_t&) override { return true; }
  bool string(string_t&) override { return true; }
  bool binary(binary_t&) override { return true; }
  bool start_object(std::size_t) override {
    scopes.emplace_back();
    return true;
  }
  bool key(string_t& k) override {
    if (!scopes.back().insert(k).second) {
      message = "parse error: duplicate key \"" + k + "\"";
      return false;
    }
    return true;
  }
  bool end_object() override {
    scopes.pop_back();
    return true;
  }
  bool start_array(std::size_t) override { return true; }
  bool end_array() override { return true; }
  bool parse_error(std::size_t, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    if (message.empty()) message = std::string("parse error: ") + ex.what();
    return false;
  }
};

/// Accumulates validation problems and tracks which keys were consumed so
/// anything left over can be reported as unknown.
struct Scope {
  const json& obj;
  std::string path;  // e.g. "solver" ("" for the root)
  std::vector<std::string>* problems;
  std::set<std::string> seen;

  std::string at(const std::string& key) const {
    return path.empty() ? key : path + "." + key;
  }
  void fail(const std::string& key, const std::string& msg) {
    problems->push_back(at(key) + ": " + msg);
  }
  const json* get(const std::string& key) {
    seen.insert(key);
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }
  bool number(const std::string& key, double* out) {
    const json* v = get(key);
    if (!v) return false;
    if (!v->is_number()) {
      fail(key, "expected a number");
      return false;
    }
    *out = v->get<double>();
    if (!std::isfinite(*out)) {
      fail(key, "must be finite");
      return false;
    }
    return true;
  }
  bool integer(const std::string& key, int* out) {
    const json* v = get(key);
    if (!v) return false;
    if (!v->is_number_integer()) {
      fail(key, "expected an integer");
      return false;
    }
    *out = v->get<int>();
    return true;
  }
  bool text(const std::string& key, std::string* out) {
    const json* v = get(key);
    if (!v) return false;
    if (!v->is_string()) {
      fail(key, "expected a string");
      return false;
    }
    *out = v->get<std::string>();
    return true;
  }
  void finish() {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!seen.count(it.key()))
        problems->push_back(at(it.key()) + ": unknown key");
    }
  }
};

void read_params(const json& j, ConstitutiveParams* p,
                 std::vector<std::string>* problems) {
  Scope s{j, "params", problems, {}};
  double x;
  if (s.number("mu", &x)) {
    if (x > 0)
      p->mu = x;
    else
      s.fail("mu", "coupling constant must be positive");
  }
  if (s.number("alpha", &x)) {
    if (x > 1)
      p->alpha = x;
    else
      s.fail("alpha", "internal-energy exponent must exceed 1");
  }
  if (s.number("beta", &x)) {
    if (x > 0)
      p->beta = x;
    else
      s.fail("beta", "conductivity exponent must be positive");
  }
  if (s.number("delta", &x)) {
    if (x >= 0)
      p->delta = x;
    else
      s.fail("delta", "source strength must be nonnegative");
  }
  if (s.number("omega", &x)) {
    if (x > 0)
      p->omega = x;
    else
      s.fail("omega", "mollification scale must be positive");
  }
  s.finish();
}

void read_grid(const json& j, Grid* g, std::vector<std::string>* problems) {
  Scope s{j, "grid", problems, {}};
  int dim = g->dim;
  if (s.integer("dim", &dim)) {
    if (dim == 1 || dim == 2)
      g->dim = dim;
    else
      s.fail("dim", "dimension must be 1 or 2");
  }
  if (const json* v = s.get("cells")) {
    if (!v->is_array() || v->size() != static_cast<size_t>(g->dim)) {
      s.fail("cells", "expected an array of dim node counts");
    } else {
      for (size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        if (!e.is_number_integer() || e.get<int>() < 3)
          s.fail("cells", "each axis needs an integer node count >= 3");
        else
          g->cells[i] = e.get<int>();
      }
    }
  }
  if (const json* v = s.get("extent")) {
    if (!v->is_array() || v->size() != static_cast<size_t>(g->dim)) {
      s.fail("extent", "expected an array of dim lengths");
    } else {
      for (size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        if (!e.is_number() || !(e.get<double>() > 0))
          s.fail("extent", "each axis length must be positive");
        else
          g->extents[i] = e.get<double>();
      }
    }
  }
  s.finish();
}

void read_initial(const json& j, InitialSpec* in,
                  std::vector<std::string>* problems) {
  Scope s{j, "initial", problems, {}};
  std::string preset;
  if (s.text("preset", &preset)) {
    if (preset == "equilibrium")
      in->preset = InitialPreset::Equilibrium;
    else if (preset == "gaussian_hot_spot")
      in->preset = InitialPreset::GaussianHotSpot;
    else if (preset == "standing_wave")
      in->preset = InitialPreset::StandingWave;
    else if (preset == "two_scale")
      in->preset = InitialPreset::TwoScale;
    else
      s.fail("preset",
             "expected one of equilibrium | gaussian_hot_spot | "
             "standing_wave | two_scale");
  }
  double x;
  if (s.number("theta_base", &x)) {
    if (x > 0)
      in->theta_base = x;
    else
      s.fail("theta_base", "base temperature must be positive");
  }
  const bool theta_bump = in->preset == InitialPreset::GaussianHotSpot ||
                          in->preset == InitialPreset::TwoScale;
  if (s.number("amplitude", &x)) {
    if (theta_bump && x < 0)
      s.fail("amplitude", "temperature bump height must be nonnegative");
    else
      in->amplitude = x;
  }
  if (s.number("amplitude2", &x)) {
    if (x < 0)
      s.fail("amplitude2", "temperature bump height must be nonnegative");
    else
      in->amplitude2 = x;
  }
  if (s.number("width", &x)) {
    if (x > 0 && x < 1)
      in->width = x;
    else
      s.fail("width", "relative width must lie in (0, 1)");
  }
  if (s.number("center", &x)) {
    if (x > 0 && x < 1)
      in->center = x;
    else
      s.fail("center", "relative center must lie in (0, 1)");
  }
  int m;
  if (s.integer("mode1", &m)) {
    if (m >= 1)
      in->mode1 = m;
    else
      s.fail("mode1", "mode index must be >= 1");
  }
  if (s.integer("mode2", &m)) {
    if (m >= 1)
      in->mode2 = m;
    else
      s.fail("mode2", "mode index must be >= 1");
  }
  s.text("u_snapshot", &in->u_path);
  s.text("v_snapshot", &in->v_path);
  s.text("theta_snapshot", &in->theta_path);
  s.finish();
}

void read_solver(const json& j, SolverConfig* sc,
                 std::vector<std::string>* problems) {
  Scope s{j, "solver", problems, {}};
  double x;
  if (s.number("dt", &x)) {
    if (x > 0)
      sc->dt = x;
    else
      s.fail("dt", "time step must be positive");
  }
  if (s.number("t_end", &x)) {
    if (x >= 0)
      sc->t_end = x;
    else
      s.fail("t_end", "final time must be nonnegative");
  }
  std::string word;
  if (s.text("coupling", &word)) {
    if (word == "splitting")
      sc->coupling = Coupling::Splitting;
    else if (word == "picard")
      sc->coupling = Coupling::Picard;
    else
      s.fail("coupling", "expected splitting | picard");
  }
  if (s.text("heat_form", &word)) {
    if (word == "temperature")
      sc->heat_formulation = HeatForm::Temperature;
    else if (word == "log_temperature")
      sc->heat_formulation = HeatForm::LogTemperature;
    else
      s.fail("heat_form", "expected temperature | log_temperature");
  }
  if (s.number("picard_tol", &x)) {
    if (x > 0)
      sc->picard_tol = x;
    else
      s.fail("picard_tol", "tolerance must be positive");
  }
  int n;
  if (s.integer("picard_max_iters", &n)) {
    if (n >= 1)
      sc->picard_max_iters = n;
    else
      s.fail("picard_max_iters", "must be >= 1");
  }
  if (s.number("newton_tol", &x)) {
    if (x > 0)
      sc->newton_tol = x;
    else
      s.fail("newton_tol", "tolerance must be positive");
  }
  if (s.integer("newton_max_iters", &n)) {
    if (n >= 1)
      sc->newton_max_iters = n;
    else
      s.fail("newton_max_iters", "must be >= 1");
  }
  s.finish();
}

void read_output(const json& j, OutputSpec* out,
                 std::vector<std::string>* problems) {
  Scope s{j, "output", problems, {}};
  s.text("out_dir", &out->out_dir);
  int n;
  if (s.integer("ledger_stride", &n)) {
    if (n >= 0)
      out->ledger_stride = n;
    else
      s.fail("ledger_stride", "stride must be >= 0 (0: first/last only)");
  }
  if (s.integer("snapshot_stride", &n)) {
    if (n >= 0)
      out->snapshot_stride = n;
    else
      s.fail("snapshot_stride", "stride must be >= 0 (0: first/last only)");
  }
  s.finish();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems_in)
    : std::runtime_error(join_problems(problems_in)),
      problems(std::move(problems_in)) {}

RunConfig parse_config(const std::string& json_text) {
  DuplicateKeyDetector detector;
  if (!json::sax_parse(json_text, &detector)) {
    throw ConfigError({detector.message.empty() ? "parse error"
                                                : detector.message});
  }
  json j = json::parse(json_text);
  std::vector<std::string> problems;
  if (!j.is_object()) throw ConfigError({"top level: expected a JSON object"});

  RunConfig cfg;
  // Default domain: unit extent, 65 nodes per axis (axis 1 is dormant
  // until grid.dim selects it).
  cfg.grid.dim = 1;
  cfg.grid.cells = {65, 65};
  cfg.grid.extents = {1.0, 1.0};

  Scope root{j, "", &problems, {}};
  std::string model;
  if (root.text("model", &model)) {
    if (model == "linear_cv")
      cfg.params.model = Model::LinearCV;
    else if (model == "power_law")
      cfg.params.model = Model::PowerLaw;
    else
      root.fail("model", "expected linear_cv | power_law");
  }
  if (const json* v = root.get("params")) {
    if (v->is_object())
      read_params(*v, &cfg.params, &problems);
    else
      root.fail("params", "expected an object");
  }
  if (const json* v = root.get("grid")) {
    if (v->is_object())
      read_grid(*v, &cfg.grid, &problems);
    else
      root.fail("grid", "expected an object");
  }
  if (const json* v = root.get("initial")) {
    if (v->is_object())
      read_initial(*v, &cfg.initial, &problems);
    else
      root.fail("initial", "expected an object");
  }
  if (const json* v = root.get("solver")) {
    if (v->is_object())
      read_solver(*v, &cfg.solver, &problems);
    else
      root.fail("solver", "expected an object");
  }
  if (const json* v = root.get("output")) {
    if (v->is_object())
      read_output(*v, &cfg.output, &problems);
    else
      root.fail("output", "expected an object");
  }
  if (const json* v = root.get("seed")) {
    if (v->is_number_unsigned() || (v->is_number_integer() && v->get<long long>() >= 0))
      cfg.seed = v->get<uint64_t>();
    else
      root.fail("seed", "expected a nonnegative integer");
  }
  root.finish();

  // Cross-field rules that no single reader can see on its own.
  if (cfg.solver.heat_formulation == HeatForm::LogTemperature) {
    if (cfg.params.model != Model::LinearCV)
      problems.push_back(
          "solver.heat_form: log_temperature requires model linear_cv");
    if (cfg.params.delta != 0)
      problems.push_back(
          "solver.heat_form: log_temperature requires params.delta = 0");
  }
  if (cfg.grid.dim == 1) {  // canonical dormant axis, same as Grid::line
    cfg.grid.cells[1] = 1;
    cfg.grid.extents[1] = 0.0;
  }
  try {
    cfg.grid.validate();
  } catch (const std::exception& e) {
    problems.push_back(std::string("grid: ") + e.what());
  }

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot open config file: " + path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const RunConfig& cfg) {
  ordered_json j;
  j["model"] = cfg.params.model == Model::LinearCV ? "linear_cv" : "power_law";
  j["params"] = {{"mu", cfg.params.mu},
                 {"alpha", cfg.params.alpha},
                 {"beta", cfg.params.beta},
                 {"delta", cfg.params.delta},
                 {"omega", cfg.params.omega}};
  ordered_json grid;
  grid["dim"] = cfg.grid.dim;
  grid["cells"] = std::vector<int>(cfg.grid.cells.begin(),
                                   cfg.grid.cells.begin() + cfg.grid.dim);
  grid["extent"] = std::vector<double>(
      cfg.grid.extents.begin(), cfg.grid.extents.begin() + cfg.grid.dim);
  j["grid"] = grid;

  ordered_json initial;
  switch (cfg.initial.preset) {
    case InitialPreset::Equilibrium: initial["preset"] = "equilibrium"; break;
    case InitialPreset::GaussianHotSpot:
      initial["preset"] = "gaussian_hot_spot";
      break;
    case InitialPreset::StandingWave:
      initial["preset"] = "standing_wave";
      break;
    case InitialPreset::TwoScale: initial["preset"] = "two_scale"; break;
  }
  initial["theta_base"] = cfg.initial.theta_base;
  initial["amplitude"] = cfg.initial.amplitude;
  initial["amplitude2"] = cfg.initial.amplitude2;
  initial["width"] = cfg.initial.width;
  initial["center"] = cfg.initial.center;
  initial["mode1"] = cfg.initial.mode1;
  initial["mode2"] = cfg.initial.mode2;
  if (!cfg.initial.u_path.empty()) initial["u_snapshot"] = cfg.initial.u_path;
  if (!cfg.initial.v_path.empty()) initial["v_snapshot"] = cfg.initial.v_path;
  if (!cfg.initial.theta_path.empty())
    initial["theta_snapshot"] = cfg.initial.theta_path;
  j["initial"] = initial;

  ordered_json solver;
  solver["dt"] = cfg.solver.dt;
  solver["t_end"] = cfg.solver.t_end;
  solver["coupling"] =
      cfg.solver.coupling == Coupling::Splitting ? "splitting" : "picard";
  solver["heat_form"] = cfg.solver.heat_formulation == HeatForm::Temperature
                            ? "temperature"
                            : "log_temperature";
  solver["picard_tol"] = cfg.solver.picard_tol;
  solver["picard_max_iters"] = cfg.solver.picard_max_iters;
  solver["newton_tol"] = cfg.solver.newton_tol;
  solver["newton_max_iters"] = cfg.solver.newton_max_iters;
  j["solver"] = solver;

  ordered_json output;
  if (!cfg.output.out_dir.empty()) output["out_dir"] = cfg.output.out_dir;
  output["ledger_stride"] = cfg.output.ledger_stride;
  output["snapshot_stride"] = cfg.output.snapshot_stride;
  j["output"] = output;
  if (cfg.seed) j["seed"] = *cfg.seed;
  return j.dump(2) + "\n";
}

}  // namespace tesim
