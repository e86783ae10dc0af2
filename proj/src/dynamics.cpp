#include "axisym/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace axisym {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<VelocitySample> velocities(const ParticleSystem& sys, bool deterministic) {
  return self_field(sys, false, deterministic).u;
}

// Moves positions to base + c * k; returns the number of particles clamped.
long displace(const ParticleSystem& base, const std::vector<VelocitySample>& k,
              double c, ParticleSystem& out) {
  out.particles.resize(base.size());
  const double r_floor = axis_epsilon(base);
  long clamps = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto& p = out.particles[i];
    p = base.particles[i];
    p.r += c * k[i].ur;
    p.z += c * k[i].uz;
    const bool below = p.z < 0.0, across = p.r <= 0.0;
    if (below) p.z = std::numeric_limits<double>::min();
    if (across) p.r = r_floor;
    if (below || across) ++clamps;
  }
  return clamps;
}

bool has_nan(const ParticleSystem& sys) {
  for (const auto& p : sys.particles)
    if (!std::isfinite(p.r) || !std::isfinite(p.z)) return true;
  return false;
}

template <class Eval>
SimState rk4(const SimState& state, double dt, const std::vector<VelocitySample>& k1,
             Eval&& eval) {
  const ParticleSystem& x = state.system;
  ParticleSystem stage = x;
  displace(x, k1, 0.5 * dt, stage);
  const auto k2 = eval(stage);
  displace(x, k2, 0.5 * dt, stage);
  const auto k3 = eval(stage);
  displace(x, k3, dt, stage);
  const auto k4 = eval(stage);

  std::vector<VelocitySample> k(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    k[i].ur = (k1[i].ur + 2.0 * k2[i].ur + 2.0 * k3[i].ur + k4[i].ur) / 6.0;
    k[i].uz = (k1[i].uz + 2.0 * k2[i].uz + 2.0 * k3[i].uz + k4[i].uz) / 6.0;
  }
  SimState next;
  next.system = x;
  next.clamp_count = state.clamp_count + displace(x, k, dt, next.system);
  next.time = state.time + dt;
  return next;
}

// Record for a state the field can no longer be evaluated on.
DiagnosticsRecord abort_record(double t, const ParticleSystem& sys, const InitialData& init,
                               const DiagnosticsConfig& cfg, long clamps,
                               const std::string& status) {
  DiagnosticsRecord rec;
  rec.t = t;
  for (double k : cfg.k_list) rec.p_list.push_back(moment_pk(sys, k));
  rec.bigZ = vertical_Z(sys);
  rec.m0 = sys.total_mass();
  for (double R : cfg.R_list) rec.mR_list.push_back(mass_mR(sys, R));
  const OmegaNorms n = omega_norms(sys, cfg.p_list);
  rec.omega_sup = n.sup;
  rec.omega_lp = n.lp;
  rec.e0 = rec.dP2_bulk = rec.dP2_axis = rec.dZ_bulk = rec.dZ_axis = kNaN;
  rec.mass_axis_r = rec.mass_axis_z = rec.ur_axis_integral = kNaN;
  rec.mass_weighted_z = weighted_z_mass(sys);
  rec.gamma0 = init.gamma0;
  rec.ineq_resid = rec.lj_ratio = rec.p2_line = rec.z_line = kNaN;
  rec.clamp_count = clamps;
  rec.max_zeta = sys.max_zeta();
  rec.zprime_ratio.assign(cfg.R_list.size(), kNaN);
  rec.mR4_integral.assign(cfg.R_list.size(), kNaN);
  rec.status = status;
  return rec;
}

}  // namespace

std::vector<VelocitySample> rhs(const SimState& state, bool deterministic) {
  return velocities(state.system, deterministic);
}

double admissible_dt(const ParticleSystem& sys, const std::vector<VelocitySample>& u,
                     double cfl) {
  double umax = 0.0;
  for (const auto& s : u) umax = std::max(umax, std::hypot(s.ur, s.uz));
  if (umax == 0.0) return std::numeric_limits<double>::infinity();
  return cfl * sys.delta / umax;
}

SimState step_rk4(const SimState& state, double dt, const StepOptions& opt,
                  const std::vector<VelocitySample>* k1) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
  std::vector<VelocitySample> own;
  if (k1 == nullptr) {
    own = velocities(state.system, opt.deterministic);
    k1 = &own;
  }
  if (opt.cfl_check) {
    const double limit = admissible_dt(state.system, *k1, opt.cfl);
    if (dt > limit) {
      std::ostringstream msg;
      msg << "step rejected: dt = " << dt << " exceeds cfl * delta / max|u| = " << limit;
      throw StepRejected(msg.str(), limit);
    }
  }
  return rk4(state, dt, *k1, [&](const ParticleSystem& s) {
    return velocities(s, opt.deterministic);
  });
}

SimState step_rk4_frozen(const SimState& state, double dt, const FrozenField& field) {
  return rk4(state, dt, field(state.system), field);
}

RunResult run(const SimConfig& cfg, const RunSinks& sinks) {
  return run(cfg, seed_scenario(cfg), sinks);
}

RunResult run(const SimConfig& cfg, Snapshot initial, const RunSinks& sinks) {
  RunResult res;
  SimState state;
  state.time = initial.time;
  state.system = std::move(initial.system);
  const ParticleSystem& sys = state.system;
  const bool det = cfg.deterministic;
  if (!sys.empty() && !(sys.delta > 0.0))
    throw ConfigError("run: blob width delta must be positive");

  const double span = cfg.t_end - state.time;
  if (span < -1e-12 * std::max(1.0, std::abs(cfg.t_end)))
    throw ConfigError("run: t_end lies before the initial time");
  const long n_steps = span <= 0.0 ? 0 : static_cast<long>(std::ceil(span / cfg.dt - 1e-9));
  const double t0 = state.time;

  SelfField field = self_field(sys, true, det);
  InitialData init;
  init.a0 = sys.a0;
  init.e0 = sys.empty() ? 0.0 : energy_e0(sys, field);
  init.gamma0 = sys.total_mass() > 0.0 ? gamma_bound(sys) : kNaN;

  DiagnosticsRecord last;
  bool have_last = false;
  auto emit = [&](const DiagnosticsRecord& rec) {
    if (sinks.on_record) sinks.on_record(rec);
    last = rec;
    have_last = true;
    ++res.records;
  };
  auto record = [&]() {
    const bool grid = cfg.identity_every > 0 && res.records % cfg.identity_every == 0;
    emit(make_record(state.time, state.system, field, init, cfg.diag, grid,
                     state.clamp_count, have_last ? &last : nullptr));
  };
  auto snapshot = [&](long step) {
    if (sinks.on_snapshot) sinks.on_snapshot(state.system, state.time, step);
  };

  record();
  snapshot(0);
  bool field_is_current = true;  // `field` matches the current positions
  StepOptions opt{cfg.cfl, cfg.cfl_check, det};
  const long clamp_limit = static_cast<long>(cfg.clamp_abort_fraction * sys.size());

  for (long step = 1; step <= n_steps; ++step) {
    if (!field_is_current) field = self_field(state.system, false, det);
    try {
      state = step_rk4(state, cfg.dt, opt, &field.u);
    } catch (const StepRejected& e) {
      res.status = "cfl_reject";
      res.message = e.what();
      emit(abort_record(state.time, state.system, init, cfg.diag, state.clamp_count,
                        res.status));
      break;
    }
    state.time = t0 + step * cfg.dt;
    res.steps = step;
    if (has_nan(state.system)) {
      res.status = "nan_abort";
      res.message = "non-finite particle position";
    } else if (state.clamp_count > clamp_limit) {
      res.status = "clamp_abort";
      std::ostringstream msg;
      msg << state.clamp_count << " clamps exceed " << cfg.clamp_abort_fraction
          << " of N = " << state.system.size();
      res.message = msg.str();
    }
    if (res.status != "ok") {
      emit(abort_record(state.time, state.system, init, cfg.diag, state.clamp_count,
                        res.status));
      snapshot(step);
      break;
    }
    const bool is_record = step % cfg.record_every == 0 || step == n_steps;
    if (is_record) {
      field = self_field(state.system, true, det);
      record();
    }
    field_is_current = is_record;
    if ((cfg.snap_every > 0 && step % cfg.snap_every == 0) || step == n_steps)
      snapshot(step);
  }
  res.final_state = std::move(state);
  return res;
}

}  // namespace axisym
