#include "axisym/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace axisym {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::ostringstream os;
  os << "invalid configuration:";
  for (const auto& e : errors) os << "\n  " << e;
  return os.str();
}

// Walks one JSON object, recording problems under dotted field paths.
class Reader {
 public:
  Reader(const json& obj, std::string prefix, std::vector<std::string>& errors)
      : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {}

  std::string path(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }
  void error(const std::string& key, const std::string& msg) {
    errors_.push_back(path(key) + ": " + msg);
  }
  bool has(const std::string& key) const { return obj_.contains(key); }
  const json& at(const std::string& key) const { return obj_.at(key); }

  bool number(const std::string& key, double& dst, bool required) {
    seen_.insert(key);
    if (!obj_.contains(key)) {
      if (required) error(key, "missing required field");
      return false;
    }
    const json& v = obj_.at(key);
    if (!v.is_number()) {
      error(key, "expected a number");
      return false;
    }
    dst = v.get<double>();
    return true;
  }

  bool integer(const std::string& key, long& dst) {
    seen_.insert(key);
    if (!obj_.contains(key)) return false;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) {
      error(key, "expected an integer");
      return false;
    }
    dst = v.get<long>();
    return true;
  }

  bool boolean(const std::string& key, bool& dst) {
    seen_.insert(key);
    if (!obj_.contains(key)) return false;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) {
      error(key, "expected true or false");
      return false;
    }
    dst = v.get<bool>();
    return true;
  }

  bool string(const std::string& key, std::string& dst, bool required) {
    seen_.insert(key);
    if (!obj_.contains(key)) {
      if (required) error(key, "missing required field");
      return false;
    }
    const json& v = obj_.at(key);
    if (!v.is_string()) {
      error(key, "expected a string");
      return false;
    }
    dst = v.get<std::string>();
    return true;
  }

  // Numbers, or the string "inf" where allow_inf is set.
  bool number_list(const std::string& key, std::vector<double>& dst, bool allow_inf) {
    seen_.insert(key);
    if (!obj_.contains(key)) return false;
    const json& v = obj_.at(key);
    if (!v.is_array()) {
      error(key, "expected an array");
      return false;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const json& e = v[i];
      if (e.is_number()) {
        out.push_back(e.get<double>());
      } else if (allow_inf && e.is_string() && e.get<std::string>() == "inf") {
        out.push_back(kInf);
      } else {
        error(key + "[" + std::to_string(i) + "]",
              allow_inf ? "expected a number or \"inf\"" : "expected a number");
        return false;
      }
    }
    dst = std::move(out);
    return true;
  }

  void mark(const std::string& key) { seen_.insert(key); }

  void reject_unknown() {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) error(item.key(), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

void positive(Reader& rd, const std::string& key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) rd.error(key, "must be positive");
}

void parse_scenario(const json& j, ScenarioConfig& sc, std::vector<std::string>& errors) {
  if (!j.is_object()) {
    errors.push_back("scenario: expected an object");
    return;
  }
  Reader rd(j, "scenario", errors);
  if (!rd.string("type", sc.type, true)) return;
  if (sc.type == "gaussian_dipole") {
    auto& d = sc.dipole;
    if (rd.number("r0", d.r0, false)) positive(rd, "r0", d.r0);
    if (rd.number("z0", d.z0, false)) positive(rd, "z0", d.z0);
    if (rd.number("sigma", d.sigma, false)) positive(rd, "sigma", d.sigma);
    if (rd.number("amp", d.amp, false) && !(d.amp >= 0.0))
      rd.error("amp", "must be nonnegative");
  } else if (sc.type == "patch") {
    auto& p = sc.patch;
    if (rd.number("r0", p.r0, false)) positive(rd, "r0", p.r0);
    if (rd.number("z0", p.z0, false)) positive(rd, "z0", p.z0);
    if (rd.number("a", p.a, false)) positive(rd, "a", p.a);
    if (p.a > 0.0 && (p.r0 <= p.a || p.z0 <= p.a))
      rd.error("a", "disc leaves the upper quadrant");
  } else if (sc.type == "from_snapshot") {
    rd.string("path", sc.path, true);
  } else {
    rd.error("type", "expected gaussian_dipole, patch or from_snapshot, got \"" + sc.type + "\"");
    return;
  }
  rd.reject_unknown();
}

}  // namespace

ConfigErrors::ConfigErrors(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

SimConfig parse_config(const json& j) {
  std::vector<std::string> errors;
  SimConfig c;
  if (!j.is_object()) throw ConfigErrors({"<root>: expected a JSON object"});
  Reader rd(j, "", errors);

  rd.mark("scenario");
  if (!j.contains("scenario")) {
    rd.error("scenario", "missing required field");
  } else {
    parse_scenario(j.at("scenario"), c.scenario, errors);
  }
  const bool seeded = c.scenario.type != "from_snapshot";

  if (rd.number("h", c.h, seeded)) positive(rd, "h", c.h);
  if (rd.number("delta", c.delta, false)) positive(rd, "delta", c.delta);
  if (rd.number("mass_floor", c.mass_floor, false) && !(c.mass_floor >= 0.0 && c.mass_floor < 1.0))
    rd.error("mass_floor", "must lie in [0, 1)");
  if (rd.number("dt", c.dt, true)) positive(rd, "dt", c.dt);
  if (rd.number("t_end", c.t_end, true) && !(c.t_end >= 0.0 && std::isfinite(c.t_end)))
    rd.error("t_end", "must be nonnegative");
  if (rd.integer("record_every", c.record_every) && c.record_every < 1)
    rd.error("record_every", "must be >= 1");
  if (rd.integer("snap_every", c.snap_every) && c.snap_every < 0)
    rd.error("snap_every", "must be >= 0");
  if (rd.number("cfl", c.cfl, false)) positive(rd, "cfl", c.cfl);
  rd.boolean("cfl_check", c.cfl_check);
  if (rd.integer("identity_every", c.identity_every) && c.identity_every < 0)
    rd.error("identity_every", "must be >= 0");
  if (rd.number("clamp_abort_fraction", c.clamp_abort_fraction, false) &&
      !(c.clamp_abort_fraction >= 0.0))
    rd.error("clamp_abort_fraction", "must be nonnegative");
  rd.boolean("deterministic", c.deterministic);
  rd.string("out_dir", c.out_dir, false);
  rd.string("seed_meta", c.seed_meta, false);

  if (rd.number_list("k_list", c.diag.k_list, false)) {
    for (double k : c.diag.k_list)
      if (!(k >= 1.0)) rd.error("k_list", "exponents must be >= 1");
  }
  if (rd.number_list("p_list", c.diag.p_list, true)) {
    for (double p : c.diag.p_list)
      if (!(p >= 1.0)) rd.error("p_list", "exponents must be >= 1");
  }
  if (rd.number_list("R_list", c.diag.R_list, false)) {
    for (double R : c.diag.R_list)
      if (!(R > 0.0)) rd.error("R_list", "radii must be positive");
  }

  rd.mark("quadrature");
  if (j.contains("quadrature")) {
    const json& qj = j.at("quadrature");
    if (!qj.is_object()) {
      rd.error("quadrature", "expected an object");
    } else {
      Reader qr(qj, "quadrature", errors);
      auto& q = c.diag.quad;
      if (qr.number("axis_width", q.axis_width, false) && !(q.axis_width >= 0.0))
        qr.error("axis_width", "must be nonnegative");
      if (qr.number("grid_width", q.grid_width, false) && !(q.grid_width >= 0.0))
        qr.error("grid_width", "must be nonnegative");
      if (qr.number("axis_far", q.axis_far, false) && !(q.axis_far >= 1.0))
        qr.error("axis_far", "must be >= 1");
      if (qr.number("grid_far", q.grid_far, false) && !(q.grid_far >= 1.0))
        qr.error("grid_far", "must be >= 1");
      if (qr.number("rel_tol", q.rel_tol, false)) positive(qr, "rel_tol", q.rel_tol);
      qr.reject_unknown();
    }
  }
  rd.reject_unknown();
  c.diag.deterministic = c.deterministic;
  if (!errors.empty()) throw ConfigErrors(std::move(errors));
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigErrors({"<file>: cannot read " + path});
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigErrors({"<file>: " + path + ": " + e.what()});
  }
  return parse_config(j);
}

json to_json(const SimConfig& c) {
  json sc = {{"type", c.scenario.type}};
  if (c.scenario.type == "gaussian_dipole") {
    sc["r0"] = c.scenario.dipole.r0;
    sc["z0"] = c.scenario.dipole.z0;
    sc["sigma"] = c.scenario.dipole.sigma;
    sc["amp"] = c.scenario.dipole.amp;
  } else if (c.scenario.type == "patch") {
    sc["r0"] = c.scenario.patch.r0;
    sc["z0"] = c.scenario.patch.z0;
    sc["a"] = c.scenario.patch.a;
  } else {
    sc["path"] = c.scenario.path;
  }
  json p_list = json::array();
  for (double p : c.diag.p_list) {
    if (std::isinf(p)) {
      p_list.push_back("inf");
    } else {
      p_list.push_back(p);
    }
  }
  json j = {
      {"scenario", sc},
      {"dt", c.dt},
      {"t_end", c.t_end},
      {"mass_floor", c.mass_floor},
      {"record_every", c.record_every},
      {"snap_every", c.snap_every},
      {"cfl", c.cfl},
      {"cfl_check", c.cfl_check},
      {"identity_every", c.identity_every},
      {"clamp_abort_fraction", c.clamp_abort_fraction},
      {"deterministic", c.deterministic},
      {"out_dir", c.out_dir},
      {"seed_meta", c.seed_meta},
      {"k_list", c.diag.k_list},
      {"p_list", p_list},
      {"R_list", c.diag.R_list},
      {"quadrature",
       {{"axis_width", c.diag.quad.axis_width},
        {"grid_width", c.diag.quad.grid_width},
        {"axis_far", c.diag.quad.axis_far},
        {"grid_far", c.diag.quad.grid_far},
        {"rel_tol", c.diag.quad.rel_tol}}},
  };
  if (c.h > 0.0) j["h"] = c.h;
  if (c.delta > 0.0) j["delta"] = c.delta;
  return j;
}

Snapshot seed_scenario(const SimConfig& c) {
  Snapshot snap;
  if (c.scenario.type == "gaussian_dipole") {
    snap.system = seed_gaussian_dipole(c.scenario.dipole, c.h, c.mass_floor);
  } else if (c.scenario.type == "patch") {
    snap.system = seed_patch(c.scenario.patch, c.h, c.mass_floor);
  } else if (c.scenario.type == "from_snapshot") {
    snap = load_snapshot(c.scenario.path);
  } else {
    throw ConfigError("unknown scenario type " + c.scenario.type);
  }
  if (c.delta > 0.0) snap.system.delta = c.delta;
  if (!c.seed_meta.empty()) snap.system.meta += " | " + c.seed_meta;
  return snap;
}

}  // namespace axisym
