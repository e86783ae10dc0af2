#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "axisym/diagnostics.hpp"
#include "axisym/particles.hpp"

using namespace axisym;

namespace {

// \iint r^k zeta0 r dr dz of the Gaussian by tensor Gauss-Legendre panels.
double gaussian_moment(const DipoleParams& p, double k) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  const double w = 8.0 * p.sigma;
  const double r_lo = std::max(0.0, p.r0 - w), z_lo = std::max(0.0, p.z0 - w);
  const int panels = 16;
  const double hr = (p.r0 + w - r_lo) / panels, hz = (p.z0 + w - z_lo) / panels;
  auto inner = [&](double r) {
    double acc = 0.0;
    for (int j = 0; j < panels; ++j) {
      acc += GL::integrate(
          [&](double z) {
            const double d2 = (r - p.r0) * (r - p.r0) + (z - p.z0) * (z - p.z0);
            return p.amp * std::exp(-d2 / (p.sigma * p.sigma));
          },
          z_lo + j * hz, z_lo + (j + 1) * hz);
    }
    return std::pow(r, k + 1.0) * acc;
  };
  double total = 0.0;
  for (int i = 0; i < panels; ++i) total += GL::integrate(inner, r_lo + i * hr, r_lo + (i + 1) * hr);
  return total;
}

}  // namespace

TEST_CASE("midpoint seeding of a constant") {
  const ParticleSystem s = seed_grid([](double, double) { return 2.0; }, {1.0, 2.0, 0.5, 1.5},
                                     0.1, 0.0);
  CHECK(s.size() == 100);
  CHECK(s.delta == doctest::Approx(0.15));
  CHECK(s.a0 == 2.0);
  // 2 \iint r dr dz = 2 * 1.5 * 1
  CHECK(s.total_mass() == doctest::Approx(3.0).epsilon(1e-13));
  for (const auto& p : s.particles) {
    CHECK(p.r > 1.0);
    CHECK(p.r < 2.0);
    CHECK(p.mu == doctest::Approx(p.r * 0.01));
  }
}

TEST_CASE("mass floor drops cells and preserves the total") {
  auto f = [](double r, double) { return r < 1.1 ? 1e-12 : 1.0; };
  const BBox box{1.0, 2.0, 0.5, 1.5};
  const ParticleSystem all = seed_grid(f, box, 0.1, 0.0);
  const ParticleSystem kept = seed_grid(f, box, 0.1, 1e-8);
  CHECK(kept.size() == all.size() - 10);
  CHECK(kept.total_mass() == doctest::Approx(all.total_mass()).epsilon(1e-13));
}

TEST_CASE("seeding rejects bad input") {
  auto one = [](double, double) { return 1.0; };
  CHECK_THROWS_AS(seed_grid(one, {1.0, 2.0, 0.5, 1.5}, 0.0, 0.0), ConfigError);
  CHECK_THROWS_AS(seed_grid(one, {-1.0, 2.0, 0.5, 1.5}, 0.1, 0.0), ConfigError);
  CHECK_THROWS_AS(seed_grid(one, {1.0, 1.0, 0.5, 1.5}, 0.1, 0.0), ConfigError);
  CHECK_THROWS_AS(seed_patch({0.2, 1.0, 0.25}, 0.01, 0.0), ConfigError);
  CHECK_THROWS_AS(seed_gaussian_dipole({1.0, 0.5, -0.2, 1.0}, 0.01, 0.0), ConfigError);
}

TEST_CASE("zero amplitude dipole is empty") {
  DipoleParams p;
  p.amp = 0.0;
  const ParticleSystem s = seed_gaussian_dipole(p, 0.05, 1e-8);
  CHECK(s.empty());
  CHECK(s.total_mass() == 0.0);
}

TEST_CASE("dipole moments match quadrature of the continuous field") {
  const DipoleParams p;
  const ParticleSystem s = seed_gaussian_dipole(p, 0.0275, 1e-8);
  CHECK(s.a0 == p.amp);
  CHECK(std::abs(moment_pk(s, 2.0) / gaussian_moment(p, 2.0) - 1.0) < 1e-3);
  CHECK(std::abs(s.total_mass() / gaussian_moment(p, 0.0) - 1.0) < 1e-3);
  for (const auto& q : s.particles) {
    CHECK(q.r > 0.0);
    CHECK(q.z > 0.0);
  }
}

TEST_CASE("patch mass is the disc area times its centroid radius") {
  const PatchParams p{1.0, 0.5, 0.25};
  const ParticleSystem s = seed_patch(p, 0.005, 0.0);
  const double exact = std::numbers::pi * p.a * p.a * p.r0;
  CHECK(std::abs(s.total_mass() / exact - 1.0) < 5e-3);
  CHECK(s.a0 == 1.0);
}

TEST_CASE("snapshot round trip is bit exact") {
  ParticleSystem s = seed_gaussian_dipole({}, 0.1, 1e-8);
  s.delta = 0.1234567890123456789;
  std::stringstream buf;
  write_snapshot(buf, s, 1.0 / 3.0);
  const Snapshot back = read_snapshot(buf);
  CHECK(back.time == 1.0 / 3.0);
  CHECK(back.system.delta == s.delta);
  CHECK(back.system.a0 == s.a0);
  REQUIRE(back.system.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.system.particles[i].r == s.particles[i].r);
    CHECK(back.system.particles[i].z == s.particles[i].z);
    CHECK(back.system.particles[i].zeta == s.particles[i].zeta);
    CHECK(back.system.particles[i].mu == s.particles[i].mu);
  }
}

TEST_CASE("empty snapshot round trip") {
  std::stringstream buf;
  write_snapshot(buf, ParticleSystem{}, 0.0);
  CHECK(read_snapshot(buf).system.empty());
}

TEST_CASE("malformed snapshot is rejected") {
  std::stringstream bad("3 0.1 1.0 0.0\n1 2 3 4\n");
  CHECK_THROWS_AS(read_snapshot(bad), ConfigError);
}
