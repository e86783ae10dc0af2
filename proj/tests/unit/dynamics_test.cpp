#include <doctest.h>

#include <cmath>
#include <sstream>

#include "axisym/config.hpp"
#include "axisym/dynamics.hpp"

using namespace axisym;

namespace {

// Rigid rotation about (1, 1): exact trajectories are circles.
std::vector<VelocitySample> rotation(const ParticleSystem& s) {
  std::vector<VelocitySample> u;
  for (const auto& p : s.particles) u.push_back({p.r, p.z, -(p.z - 1.0), p.r - 1.0});
  return u;
}

SimState one_particle(double r, double z) {
  SimState st;
  st.system.delta = 0.1;
  st.system.particles = {{r, z, 1.0, 0.01}};
  st.system.a0 = 1.0;
  return st;
}

double rotation_error(double dt) {
  SimState st = one_particle(1.5, 1.0);
  const int n = static_cast<int>(std::lround(1.0 / dt));
  for (int i = 0; i < n; ++i) st = step_rk4_frozen(st, dt, rotation);
  const auto& p = st.system.particles[0];
  return std::hypot(p.r - (1.0 + 0.5 * std::cos(1.0)), p.z - (1.0 + 0.5 * std::sin(1.0)));
}

SimConfig small_dipole(double t_end) {
  SimConfig c;
  c.h = 0.08;
  c.dt = 0.05;
  c.t_end = t_end;
  c.identity_every = 2;
  c.deterministic = true;
  c.diag.deterministic = true;
  return c;
}

std::vector<DiagnosticsRecord> collect(const SimConfig& c, RunResult* res = nullptr) {
  std::vector<DiagnosticsRecord> out;
  RunSinks sinks;
  sinks.on_record = [&](const DiagnosticsRecord& r) { out.push_back(r); };
  RunResult r = run(c, sinks);
  if (res) *res = r;
  return out;
}

}  // namespace

TEST_CASE("frozen-field RK4 is fourth order") {
  const double e1 = rotation_error(0.1), e2 = rotation_error(0.05);
  CHECK(std::log2(e1 / e2) > 3.8);
  CHECK(e2 < 1e-7);
}

TEST_CASE("a step moves positions only") {
  SimState st;
  st.system = seed_gaussian_dipole({}, 0.1, 1e-8);
  const SimState next = step_rk4(st, 0.02, {});
  REQUIRE(next.system.size() == st.system.size());
  CHECK(next.system.total_mass() == st.system.total_mass());
  CHECK(next.system.max_zeta() == st.system.max_zeta());
  CHECK(next.system.delta == st.system.delta);
  for (std::size_t i = 0; i < st.system.size(); ++i) {
    CHECK(next.system.particles[i].zeta == st.system.particles[i].zeta);
    CHECK(next.system.particles[i].mu == st.system.particles[i].mu);
  }
  CHECK(next.clamp_count == 0);
}

TEST_CASE("steps above the CFL limit are rejected") {
  SimState st;
  st.system = seed_gaussian_dipole({}, 0.1, 1e-8);
  const auto u = rhs(st);
  const double limit = admissible_dt(st.system, u, 0.5);
  CHECK(limit > 0.0);
  try {
    step_rk4(st, 2.0 * limit, {});
    FAIL("expected StepRejected");
  } catch (const StepRejected& e) {
    CHECK(e.admissible_dt() == doctest::Approx(limit));
  }
  StepOptions off;
  off.cfl_check = false;
  CHECK_NOTHROW(step_rk4(st, 2.0 * limit, off));
}

TEST_CASE("positions leaving the quadrant are clamped and counted") {
  SimState st = one_particle(1.0, 0.01);
  auto down = [](const ParticleSystem& s) {
    std::vector<VelocitySample> u;
    for (const auto& p : s.particles) u.push_back({p.r, p.z, -5.0, -1.0});
    return u;
  };
  const SimState next = step_rk4_frozen(st, 0.3, down);
  CHECK(next.clamp_count == 1);
  CHECK(next.system.particles[0].z > 0.0);
  CHECK(next.system.particles[0].r > 0.0);
}

TEST_CASE("t_end = 0 gives one record and two snapshots of the seed") {
  SimConfig c = small_dipole(0.0);
  int snaps = 0;
  RunSinks sinks;
  std::vector<DiagnosticsRecord> recs;
  sinks.on_record = [&](const DiagnosticsRecord& r) { recs.push_back(r); };
  sinks.on_snapshot = [&](const ParticleSystem&, double t, long step) {
    CHECK(t == 0.0);
    CHECK(step == 0);
    ++snaps;
  };
  const RunResult res = run(c, sinks);
  CHECK(res.status == "ok");
  CHECK(recs.size() == 1);
  CHECK(snaps >= 1);
}

TEST_CASE("short dipole run: monotone moments, conserved invariants") {
  RunResult res;
  const auto recs = collect(small_dipole(0.5), &res);
  CHECK(res.status == "ok");
  CHECK(res.steps == 10);
  REQUIRE(recs.size() == 11);
  for (std::size_t i = 1; i < recs.size(); ++i) {
    CHECK(recs[i].p_list[0] > recs[i - 1].p_list[0]);
    CHECK(recs[i].bigZ < recs[i - 1].bigZ);
    CHECK(recs[i].m0 == recs[0].m0);
    CHECK(recs[i].max_zeta == recs[0].max_zeta);
    CHECK(std::abs(recs[i].e0 / recs[0].e0 - 1.0) < 1e-3);
    CHECK(recs[i].ur_axis_integral >= recs[i].gamma0);
    CHECK(recs[i].dZ_bulk < 0.0);
    CHECK(recs[i].clamp_count == 0);
    CHECK(recs[i].t == doctest::Approx(0.05 * i).epsilon(1e-14));
  }
  CHECK(std::isfinite(recs[2].dZ_axis));
  CHECK(std::isnan(recs[1].dZ_axis));
}

TEST_CASE("deterministic runs repeat bit for bit") {
  const auto a = collect(small_dipole(0.2));
  const auto b = collect(small_dipole(0.2));
  REQUIRE(a.size() == b.size());
  std::stringstream sa, sb;
  for (const auto& r : a) write_csv_row(sa, r);
  for (const auto& r : b) write_csv_row(sb, r);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("snapshot reload reproduces the record bit for bit") {
  SimConfig c = small_dipole(0.1);
  ParticleSystem last;
  double last_t = 0.0;
  std::vector<DiagnosticsRecord> recs;
  RunSinks sinks;
  sinks.on_record = [&](const DiagnosticsRecord& r) { recs.push_back(r); };
  sinks.on_snapshot = [&](const ParticleSystem& s, double t, long) {
    last = s;
    last_t = t;
  };
  run(c, sinks);
  std::stringstream buf;
  write_snapshot(buf, last, last_t);
  const Snapshot back = read_snapshot(buf);

  const SelfField f1 = self_field(last, true, true);
  const SelfField f2 = self_field(back.system, true, true);
  const InitialData init{recs[0].max_zeta, recs[0].e0, recs[0].gamma0};
  const auto r1 = make_record(last_t, last, f1, init, c.diag, true, 0, nullptr);
  const auto r2 = make_record(back.time, back.system, f2, init, c.diag, true, 0, nullptr);
  std::stringstream s1, s2;
  write_csv_row(s1, r1);
  write_csv_row(s2, r2);
  CHECK(s1.str() == s2.str());
}

TEST_CASE("continuing from a snapshot keeps the time axis") {
  SimConfig c = small_dipole(0.3);
  Snapshot start;
  start.system = seed_scenario(c).system;
  start.time = 0.2;
  std::vector<DiagnosticsRecord> recs;
  RunSinks sinks;
  sinks.on_record = [&](const DiagnosticsRecord& r) { recs.push_back(r); };
  const RunResult res = run(c, start, sinks);
  CHECK(res.steps == 2);
  CHECK(recs.front().t == 0.2);
  CHECK(recs.back().t == doctest::Approx(0.3));
}
