#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "axisym/diagnostics.hpp"
#include "axisym/particles.hpp"

namespace axisym {

/// Schema violations, one message per offending field path.
class ConfigErrors : public std::runtime_error {
 public:
  explicit ConfigErrors(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct ScenarioConfig {
  std::string type = "gaussian_dipole";  // gaussian_dipole | patch | from_snapshot
  DipoleParams dipole;
  PatchParams patch;
  std::string path;  // from_snapshot
};

struct SimConfig {
  ScenarioConfig scenario;
  double h = 0.0;
  double delta = 0.0;  // 0: 1.5 h (or the snapshot's value)
  double mass_floor = 1e-8;
  double dt = 0.02;
  double t_end = 0.0;
  long record_every = 1;
  long snap_every = 0;  // 0: initial and final snapshots only
  double cfl = 0.5;
  bool cfl_check = true;
  long identity_every = 50;  // records between half-plane grid evaluations; 0 = never
  double clamp_abort_fraction = 1e-3;
  bool deterministic = false;
  std::string out_dir = "out";
  std::string seed_meta;
  DiagnosticsConfig diag;
};

/// Parses and validates; throws ConfigErrors listing every problem.
SimConfig parse_config(const nlohmann::json& j);
SimConfig load_config(const std::string& path);

/// Fully resolved form; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const SimConfig& c);

/// Seeds the configured scenario. Returns the system and its start time.
Snapshot seed_scenario(const SimConfig& c);

}  // namespace axisym
