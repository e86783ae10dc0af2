#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace axisym {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// One Lagrangian marker in the upper quadrant r > 0, z > 0.
/// zeta = omega/r and mu (volume weight ~ r dr dz) never change after seeding.
struct Particle {
  double r = 0.0;
  double z = 0.0;
  double zeta = 0.0;
  double mu = 0.0;
};

/// Upper-quadrant half of an odd-in-z vorticity field. The lower half is
/// implied: every evaluation adds the mirror particle (r, -z) with -zeta.
struct ParticleSystem {
  std::vector<Particle> particles;
  double delta = 0.0;  // blob width
  double a0 = 0.0;     // sup of omega0 / r
  std::string meta;

  std::size_t size() const { return particles.size(); }
  bool empty() const { return particles.empty(); }
  double total_mass() const;  // sum zeta mu, compensated
  double max_zeta() const;
};

struct BBox {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double z_lo = 0.0;
  double z_hi = 0.0;
};

using ScalarField = std::function<double(double r, double z)>;

/// Midpoint seeding: one particle per h x h cell, mu = r h^2.
/// The cell rows start at the low corner of `bbox`; the last row may stick
/// out past the high edge when the extent is not a multiple of h.
/// Cells with zeta mu < mass_floor * total are dropped and the survivors'
/// mu rescaled so the total still equals the midpoint quadrature.
/// delta is set to 1.5 h.
ParticleSystem seed_grid(const ScalarField& zeta0, const BBox& bbox, double h,
                         double mass_floor);

struct DipoleParams {
  double r0 = 1.0;
  double z0 = 0.5;
  double sigma = 0.2;
  double amp = 1.0;
};

/// zeta0 = amp exp(-((r-r0)^2 + (z-z0)^2)/sigma^2) on the upper quadrant.
ParticleSystem seed_gaussian_dipole(const DipoleParams& p, double h,
                                    double mass_floor);

struct PatchParams {
  double r0 = 1.0;
  double z0 = 0.5;
  double a = 0.25;
};

/// zeta0 = 1 on the disc of radius a about (r0, z0), 0 elsewhere.
ParticleSystem seed_patch(const PatchParams& p, double h, double mass_floor);

struct Snapshot {
  ParticleSystem system;
  double time = 0.0;
};

// Plain text: "count delta a0 time", then "r z zeta mu" per particle,
// printed with max_digits10 so load(save(x)) == x bit for bit.
void write_snapshot(std::ostream& os, const ParticleSystem& sys, double time);
Snapshot read_snapshot(std::istream& is);
void save_snapshot(const std::string& path, const ParticleSystem& sys,
                   double time);
Snapshot load_snapshot(const std::string& path);

}  // namespace axisym
