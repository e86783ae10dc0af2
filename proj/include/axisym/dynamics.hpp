#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "axisym/config.hpp"
#include "axisym/diagnostics.hpp"
#include "axisym/field.hpp"
#include "axisym/particles.hpp"

namespace axisym {

class StepRejected : public std::runtime_error {
 public:
  StepRejected(const std::string& what, double admissible_dt)
      : std::runtime_error(what), admissible_dt_(admissible_dt) {}
  double admissible_dt() const { return admissible_dt_; }

 private:
  double admissible_dt_;
};

struct SimState {
  double time = 0.0;
  ParticleSystem system;
  long clamp_count = 0;  // positions pushed back into the quadrant so far
};

struct StepOptions {
  double cfl = 0.5;
  bool cfl_check = true;
  bool deterministic = false;
};

/// Velocity at every particle (odd fold, self-induction included).
std::vector<VelocitySample> rhs(const SimState& state, bool deterministic = false);

/// Largest dt allowed by dt <= cfl delta / max|u|; infinite for a still field.
double admissible_dt(const ParticleSystem& sys, const std::vector<VelocitySample>& u,
                     double cfl);

/// One classical RK4 step. `k1`, when given, must be rhs(state).
/// Particles ending below z = 0 (or at r <= 0) are clamped back and counted.
SimState step_rk4(const SimState& state, double dt, const StepOptions& opt,
                  const std::vector<VelocitySample>* k1 = nullptr);

/// Same step with the velocity frozen to `field` (positions -> velocity).
using FrozenField = std::function<std::vector<VelocitySample>(const ParticleSystem&)>;
SimState step_rk4_frozen(const SimState& state, double dt, const FrozenField& field);

struct RunSinks {
  std::function<void(const DiagnosticsRecord&)> on_record;
  std::function<void(const ParticleSystem&, double time, long step)> on_snapshot;
};

struct RunResult {
  std::string status = "ok";  // ok | nan_abort | clamp_abort | cfl_reject
  std::string message;
  long steps = 0;
  long records = 0;
  SimState final_state;
};

/// Integrates a seeded system to cfg.t_end, emitting records and snapshots.
RunResult run(const SimConfig& cfg, Snapshot initial, const RunSinks& sinks);
RunResult run(const SimConfig& cfg, const RunSinks& sinks);

}  // namespace axisym
