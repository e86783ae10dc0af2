#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "axisym/field.hpp"
#include "axisym/kernel.hpp"
#include "axisym/parallel.hpp"
#include "axisym/particles.hpp"

using namespace axisym;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct azimuthal integration of the regularized 3D law for one ring of
// circulation g at (rb, zb), trapezoid rule on the periodic integrand.
struct RingOracle {
  double psi = 0.0, ur = 0.0, uz = 0.0;
};
RingOracle ring(double r, double z, double rb, double zb, double g, double delta) {
  const int n = 4096;
  double i1 = 0.0, i3 = 0.0, i3c = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * k / n;
    const double c = std::cos(t);
    const double q = r * r + rb * rb - 2.0 * r * rb * c + (z - zb) * (z - zb) + delta * delta;
    const double iq = 1.0 / std::sqrt(q);
    i1 += c * iq;
    i3 += c * iq * iq * iq;
    i3c += c * (r - rb * c) * iq * iq * iq;
  }
  const double h = 1.0 / n;  // mean over the circle; the half-range integral is pi times it
  i1 *= kPi * h;
  i3 *= kPi * h;
  i3c *= kPi * h;
  // u = (1/r) (d_z psi, -d_r psi)
  return {g / (2.0 * kPi) * r * rb * i1, -g * rb * (z - zb) / (2.0 * kPi) * i3,
          -g * rb / (2.0 * kPi * r) * (i1 - r * i3c)};
}

RingOracle folded(double r, double z, const ParticleSystem& s) {
  RingOracle out;
  for (const auto& p : s.particles) {
    const double g = p.zeta * p.mu;
    const RingOracle a = ring(r, z, p.r, p.z, g, s.delta);
    const RingOracle b = ring(r, z, p.r, -p.z, -g, s.delta);
    out.psi += a.psi + b.psi;
    out.ur += a.ur + b.ur;
    out.uz += a.uz + b.uz;
  }
  return out;
}

ParticleSystem three_rings() {
  ParticleSystem s;
  s.delta = 0.1;
  s.particles = {{1.0, 0.5, 1.0, 0.02}, {1.4, 0.8, -0.5, 0.03}, {0.6, 1.2, 2.0, 0.01}};
  s.a0 = 2.0;
  return s;
}

double rel(double a, double b, double scale) { return std::abs(a - b) / scale; }

}  // namespace

TEST_CASE("velocity and stream function match direct azimuthal integration") {
  const ParticleSystem s = three_rings();
  FieldRequest req;
  req.delta = s.delta;
  for (double r : {0.3, 0.95, 1.5, 3.0})
    for (double z : {0.1, 0.55, 1.0, 2.5}) req.probes.push_back({r, z});
  const auto u = induced_velocity(req, s);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const RingOracle o = folded(u[i].r, u[i].z, s);
    const double scale = std::hypot(o.ur, o.uz);
    CAPTURE(u[i].r);
    CAPTURE(u[i].z);
    CHECK(rel(u[i].ur, o.ur, scale) < 1e-11);
    CHECK(rel(u[i].uz, o.uz, scale) < 1e-11);
    const double psi = stream_function({u[i].r, u[i].z}, s, s.delta);
    CHECK(std::abs(psi - o.psi) < 1e-12 * std::abs(o.psi) + 1e-16);
  }
}

TEST_CASE("odd fold: u_z and psi vanish on z = 0") {
  const ParticleSystem s = three_rings();
  FieldRequest req;
  req.delta = s.delta;
  for (double r : {0.2, 0.8, 1.7}) req.probes.push_back({r, 0.0});
  for (const auto& v : induced_velocity(req, s)) {
    CHECK(std::abs(v.uz) < 1e-15);
    CHECK(std::abs(v.ur - axis_radial_velocity(v.r, s, s.delta)) < 1e-13 * std::abs(v.ur));
    CHECK(stream_function({v.r, 0.0}, s, s.delta) == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("near-axis probes are continuous with the axis formula") {
  const ParticleSystem s = three_rings();
  FieldRequest req;
  req.delta = s.delta;
  req.probes = {{1e-4, 0.7}, {1e-9, 0.7}};
  const auto u = induced_velocity(req, s);
  const double axis = axis_vertical_velocity(0.7, s, s.delta);
  CHECK(u[1].ur == 0.0);
  CHECK(u[1].uz == axis);
  CHECK(std::abs(u[0].uz - axis) < 1e-6 * std::abs(axis));
  CHECK(std::abs(u[0].ur) < 1e-3 * std::abs(axis));
}

TEST_CASE("point-ring axis velocity matches the oracle at the axis") {
  ParticleSystem s = three_rings();
  const double z = 0.9;
  ParticleSystem point = s;
  point.delta = 0.0;
  // On the axis only u_z survives; evaluate the oracle a hair away.
  const RingOracle o = folded(1e-4, z, point);
  CHECK(std::abs(axis_vertical_velocity(z, s) - o.uz) < 1e-7 * std::abs(o.uz));
}

TEST_CASE("vector axis overloads are bit-identical to the scalar calls") {
  const ParticleSystem s = seed_gaussian_dipole({}, 0.1, 1e-8);
  std::vector<double> x;
  for (int i = 1; i <= 37; ++i) x.push_back(0.07 * i);
  const auto ur = axis_radial_velocity(x, s, s.delta);
  const auto uz = axis_vertical_velocity(x, s);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(ur[i] == axis_radial_velocity(x[i], s, s.delta));
    CHECK(uz[i] == axis_vertical_velocity(x[i], s));
  }
}

TEST_CASE("self field agrees with per-probe summation") {
  const ParticleSystem s = seed_gaussian_dipole({}, 0.06, 1e-8);
  FieldRequest req;
  req.delta = s.delta;
  for (const auto& p : s.particles) req.probes.push_back({p.r, p.z});
  const auto ref = induced_velocity(req, s);
  double umax = 0.0;
  for (const auto& v : ref) umax = std::max(umax, std::hypot(v.ur, v.uz));
  for (bool det : {false, true}) {
    const SelfField f = self_field(s, true, det);
    REQUIRE(f.u.size() == s.size());
    REQUIRE(f.psi.size() == s.size());
    double worst = 0.0, worst_psi = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      worst = std::max(worst, std::hypot(f.u[i].ur - ref[i].ur, f.u[i].uz - ref[i].uz));
      const double psi = stream_function({s.particles[i].r, s.particles[i].z}, s, s.delta);
      worst_psi = std::max(worst_psi, std::abs(f.psi[i] - psi) / std::abs(psi));
    }
    CHECK(worst < 1e-13 * umax);
    CHECK(worst_psi < 1e-12);
  }
}

TEST_CASE("deterministic self field does not depend on the thread count") {
  const ParticleSystem s = seed_gaussian_dipole({}, 0.08, 1e-8);
  const int saved = current_threads();
  set_threads(1);
  const SelfField a = self_field(s, true, true);
  set_threads(3);
  const SelfField b = self_field(s, true, true);
  set_threads(saved);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(a.u[i].ur == b.u[i].ur);
    CHECK(a.u[i].uz == b.u[i].uz);
    CHECK(a.psi[i] == b.psi[i]);
  }
}

TEST_CASE("empty sources give a still field") {
  FieldRequest req;
  req.probes = {{1.0, 1.0}};
  req.delta = 0.1;
  const auto u = induced_velocity(req, ParticleSystem{});
  CHECK(u[0].ur == 0.0);
  CHECK(u[0].uz == 0.0);
  CHECK(self_field(ParticleSystem{}, true, false).u.empty());
}

TEST_CASE("unregularized evaluation on a source is reported") {
  ParticleSystem s = three_rings();
  s.delta = 0.0;
  FieldRequest req;
  req.delta = 0.0;
  req.probes = {{1.0, 0.5}};
  CHECK_THROWS_AS(induced_velocity(req, s), SingularEvaluation);
  CHECK_THROWS_AS(stream_function({1.0, 0.5}, s, 0.0), SingularEvaluation);
  req.probes = {{-1.0, 0.5}};
  CHECK_THROWS_AS(induced_velocity(req, three_rings()), DomainError);
}
