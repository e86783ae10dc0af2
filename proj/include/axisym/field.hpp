#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "axisym/particles.hpp"

namespace axisym {

class SingularEvaluation : public std::runtime_error {
 public:
  explicit SingularEvaluation(const std::string& what)
      : std::runtime_error(what) {}
};

struct Probe {
  double r = 0.0;
  double z = 0.0;
};

struct VelocitySample {
  double r = 0.0;
  double z = 0.0;
  double ur = 0.0;
  double uz = 0.0;
};

struct FieldRequest {
  std::vector<Probe> probes;
  double delta = 0.0;
  bool fold_odd = true;  // add the mirror (r, -z, -zeta) of every source
};

/// Probes closer to the axis than this get u_r = 0 and the blob-limit
/// axis_vertical_velocity, which keeps the field continuous in r.
double axis_epsilon(const ParticleSystem& sources);

/// Velocity at arbitrary probes by direct summation over the sources.
/// Each probe's sum is compensated and taken in source order, so results
/// do not depend on the thread count.
std::vector<VelocitySample> induced_velocity(const FieldRequest& req,
                                             const ParticleSystem& sources);

/// u_r(r, 0) of the folded field.
double axis_radial_velocity(double r, const ParticleSystem& sources,
                            double delta);

/// u_z(0, z) of the folded field,
///   -1/2 sum zeta mu rb^2 [ (rb^2 + (z-zb)^2 + d^2)^(-3/2) - (z -> z+zb) ].
/// The default d = 0 is the elementary point-ring formula; d = delta is the
/// r -> 0 limit of the blob kernel.
double axis_vertical_velocity(double z, const ParticleSystem& sources,
                              double delta = 0.0);

/// The two axis velocities at many points, parallel over points. Each value
/// is bit-identical to the single-point call.
std::vector<double> axis_radial_velocity(const std::vector<double>& r,
                                         const ParticleSystem& sources,
                                         double delta);
std::vector<double> axis_vertical_velocity(const std::vector<double>& z,
                                           const ParticleSystem& sources,
                                           double delta = 0.0);

/// Stokes stream function of the folded field, psi = 0 on both axes.
double stream_function(const Probe& probe, const ParticleSystem& sources,
                       double delta);

/// Velocity at every particle, plus psi there when requested.
struct SelfField {
  std::vector<VelocitySample> u;
  std::vector<double> psi;  // empty unless requested
};

/// Self-induced field of the system (fold_odd on, delta = sources.delta).
/// The default path visits each unordered pair once and scatters into
/// per-thread buffers; its rounding depends on the thread schedule.
/// `deterministic` switches to independent per-particle sums.
SelfField self_field(const ParticleSystem& sources, bool with_psi,
                     bool deterministic);

}  // namespace axisym
