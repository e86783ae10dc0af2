#include "axisym/particles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "axisym/numeric.hpp"

namespace axisym {

double ParticleSystem::total_mass() const {
  CompensatedSum acc;
  for (const auto& p : particles) acc.add(p.zeta * p.mu);
  return acc.value();
}

double ParticleSystem::max_zeta() const {
  double m = 0.0;
  for (const auto& p : particles) m = std::max(m, p.zeta);
  return m;
}

ParticleSystem seed_grid(const ScalarField& zeta0, const BBox& bbox, double h,
                         double mass_floor) {
  if (!(h > 0.0)) throw ConfigError("seed_grid: h must be positive");
  if (!(bbox.r_hi > bbox.r_lo) || !(bbox.z_hi > bbox.z_lo))
    throw ConfigError("seed_grid: empty bounding box");
  if (bbox.r_lo < 0.0 || bbox.z_lo < 0.0)
    throw ConfigError("seed_grid: bounding box leaves the upper quadrant");
  if (h >= bbox.r_hi - bbox.r_lo || h >= bbox.z_hi - bbox.z_lo)
    throw ConfigError("seed_grid: h is not smaller than the box extent");
  if (!(mass_floor >= 0.0))
    throw ConfigError("seed_grid: mass_floor must be nonnegative");

  const auto nr = static_cast<long>(std::ceil((bbox.r_hi - bbox.r_lo) / h - 1e-9));
  const auto nz = static_cast<long>(std::ceil((bbox.z_hi - bbox.z_lo) / h - 1e-9));
  const double h2 = h * h;

  std::vector<Particle> cells;
  CompensatedSum total;
  for (long i = 0; i < nr; ++i) {
    const double r = bbox.r_lo + (i + 0.5) * h;
    for (long j = 0; j < nz; ++j) {
      const double z = bbox.z_lo + (j + 0.5) * h;
      const double zeta = zeta0(r, z);
      if (!(zeta >= 0.0)) {
        std::ostringstream msg;
        msg << "seed_grid: zeta0 negative or NaN at (" << r << ", " << z << ")";
        throw ConfigError(msg.str());
      }
      if (zeta == 0.0) continue;
      const double mu = r * h2;
      total.add(zeta * mu);
      cells.push_back({r, z, zeta, mu});
    }
  }

  ParticleSystem sys;
  sys.delta = 1.5 * h;
  const double m_all = total.value();
  if (m_all <= 0.0) return sys;

  const double cut = mass_floor * m_all;
  CompensatedSum kept;
  for (const auto& c : cells) {
    if (c.zeta * c.mu < cut) continue;
    kept.add(c.zeta * c.mu);
    sys.particles.push_back(c);
  }
  const double scale = m_all / kept.value();
  for (auto& p : sys.particles) p.mu *= scale;
  sys.a0 = sys.max_zeta();
  return sys;
}

namespace {

// Grid aligned to multiples of h so that nearby parameter choices share
// cell centers.
double align_down(double x, double h) {
  return std::max(0.0, h * std::floor(x / h));
}

std::string format_meta(const std::string& kind,
                        std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream os;
  os << kind;
  for (const auto& [k, v] : kv) os << ' ' << k << '=' << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

ParticleSystem seed_gaussian_dipole(const DipoleParams& p, double h,
                                    double mass_floor) {
  if (!(p.r0 > 0.0) || !(p.z0 > 0.0) || !(p.sigma > 0.0))
    throw ConfigError("gaussian_dipole: r0, z0 and sigma must be positive");
  if (!(p.amp >= 0.0))
    throw ConfigError("gaussian_dipole: amp must be nonnegative");

  // exp(-49) is far below any useful mass floor.
  const double reach = 7.0 * p.sigma;
  BBox box{align_down(p.r0 - reach, h), p.r0 + reach,
           align_down(p.z0 - reach, h), p.z0 + reach};
  const double inv_s2 = 1.0 / (p.sigma * p.sigma);
  ParticleSystem sys;
  if (p.amp > 0.0) {
    sys = seed_grid(
        [&](double r, double z) {
          const double d2 = (r - p.r0) * (r - p.r0) + (z - p.z0) * (z - p.z0);
          return p.amp * std::exp(-d2 * inv_s2);
        },
        box, h, mass_floor);
  } else {
    sys.delta = 1.5 * h;
  }
  sys.a0 = p.amp;
  sys.meta = format_meta("gaussian_dipole", {{"r0", p.r0},
                                             {"z0", p.z0},
                                             {"sigma", p.sigma},
                                             {"amp", p.amp},
                                             {"h", h},
                                             {"mass_floor", mass_floor}});
  return sys;
}

ParticleSystem seed_patch(const PatchParams& p, double h, double mass_floor) {
  if (!(p.a > 0.0)) throw ConfigError("patch: radius a must be positive");
  if (!(p.r0 > p.a) || !(p.z0 > p.a))
    throw ConfigError("patch: disc leaves the upper quadrant");
  if (!(h > 0.0)) throw ConfigError("patch: h must be positive");

  const double a2 = p.a * p.a;
  BBox box{align_down(p.r0 - p.a, h), p.r0 + p.a + h,
           align_down(p.z0 - p.a, h), p.z0 + p.a + h};
  ParticleSystem sys = seed_grid(
      [&](double r, double z) {
        const double d2 = (r - p.r0) * (r - p.r0) + (z - p.z0) * (z - p.z0);
        return d2 <= a2 ? 1.0 : 0.0;
      },
      box, h, mass_floor);
  sys.a0 = 1.0;
  sys.meta = format_meta("patch", {{"r0", p.r0},
                                   {"z0", p.z0},
                                   {"a", p.a},
                                   {"h", h},
                                   {"mass_floor", mass_floor}});
  return sys;
}

void write_snapshot(std::ostream& os, const ParticleSystem& sys, double time) {
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << sys.size() << ' ' << sys.delta << ' ' << sys.a0 << ' ' << time << '\n';
  for (const auto& p : sys.particles)
    os << p.r << ' ' << p.z << ' ' << p.zeta << ' ' << p.mu << '\n';
}

Snapshot read_snapshot(std::istream& is) {
  Snapshot snap;
  std::size_t count = 0;
  if (!(is >> count >> snap.system.delta >> snap.system.a0 >> snap.time))
    throw ConfigError("snapshot: malformed header");
  snap.system.particles.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto& p = snap.system.particles[i];
    if (!(is >> p.r >> p.z >> p.zeta >> p.mu)) {
      std::ostringstream msg;
      msg << "snapshot: malformed particle line " << i + 1;
      throw ConfigError(msg.str());
    }
  }
  snap.system.meta = "from_snapshot";
  return snap;
}

void save_snapshot(const std::string& path, const ParticleSystem& sys,
                   double time) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write snapshot " + path);
  write_snapshot(os, sys, time);
  if (!os) throw std::runtime_error("write failed for snapshot " + path);
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read snapshot " + path);
  Snapshot snap = read_snapshot(is);
  snap.system.meta = "from_snapshot " + path;
  return snap;
}

}  // namespace axisym
