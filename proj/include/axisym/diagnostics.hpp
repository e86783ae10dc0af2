#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "axisym/field.hpp"
#include "axisym/particles.hpp"

namespace axisym {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Panel layout of the axis and half-plane quadratures. Widths <= 0 mean
/// "derive from delta".
struct QuadratureConfig {
  double axis_width = 0.0;  // default 2 delta, 15-point Kronrod panels
  double grid_width = 0.0;  // default 2 delta, 4x4 Gauss panels
  double axis_far = 1000.0; // graded panels out to this multiple of the extent
  double grid_far = 30.0;
  double rel_tol = 1e-6;    // axis integrals above this error are flagged
};

struct DiagnosticsConfig {
  std::vector<double> k_list{2.0, 3.0};
  std::vector<double> p_list{1.0, 2.0, kInf};
  std::vector<double> R_list{1.0, 2.0};
  bool deterministic = false;
  QuadratureConfig quad;
};

double moment_pk(const ParticleSystem& sys, double k);
double vertical_Z(const ParticleSystem& sys);
double mass_mR(const ParticleSystem& sys, double R);
/// 2 sum psi_i zeta_i mu_i (full-plane energy through the odd fold).
double energy_e0(const ParticleSystem& sys, bool deterministic = false);
double energy_e0(const ParticleSystem& sys, const SelfField& field);

struct OmegaNorms {
  double sup = 0.0;
  std::vector<double> lp;  // ||omega||_{L^p(R^3)}, p = inf gives sup
};
OmegaNorms omega_norms(const ParticleSystem& sys, const std::vector<double>& p_list);

/// u_r(r,0) and u_z(0,z) sampled on the axis rules, with every line
/// integral the identities need.
struct AxisProfile {
  std::vector<double> r, ur;  // rule nodes on the r-axis
  std::vector<double> z, uz;  // rule nodes on the z-axis
  double ur_int = 0.0;        // \int u_r(r,0) dr
  double r_ur2 = 0.0;         // \int r u_r(r,0)^2 dr
  double r2_ur = 0.0;         // \int r^2 u_r(r,0) dr
  double neg_uz_int = 0.0;    // \int -u_z(0,z) dz
  double half_uz2 = 0.0;      // \int u_z(0,z)^2 / 2 dz
  double z_neg_uz = 0.0;      // \int z (-u_z(0,z)) dz
  double max_ur = 0.0;
  bool converged = true;
};
AxisProfile axis_profile(const ParticleSystem& sys, const QuadratureConfig& q);

/// \iint_{Pi+} u_r^2 / r dr dz on a tensor Gauss grid.
double half_plane_ur2_over_r(const ParticleSystem& sys, const QuadratureConfig& q);

struct TwoWays {
  double bulk = 0.0;
  double axis = 0.0;
  bool converged = true;
};
/// P2' as 2 sum r u_r zeta mu and as \int r u_r(r,0)^2 dr.
TwoWays dP2_two_ways(const ParticleSystem& sys, const QuadratureConfig& q,
                     bool deterministic = false);
/// Z' as sum u_z zeta mu and as -[\int u_z(0,z)^2/2 dz + \iint u_r^2/r].
TwoWays dZ_two_ways(const ParticleSystem& sys, const QuadratureConfig& q,
                    bool deterministic = false);

struct MassIdentities {
  double axis_r = 0.0;
  double axis_z = 0.0;
  double weighted_z = 0.0;
  double weighted_r = 0.0;
  bool converged = true;
};
MassIdentities mass_identities(const ParticleSystem& sys, const QuadratureConfig& q);
double weighted_z_mass(const ParticleSystem& sys);

/// Lower bound for \int u_r(r,0) dr from m0, A0 and Z(0).
double gamma_bound(double m0, double a0, double z0);
double gamma_bound(const ParticleSystem& initial);

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of log-log residuals
  std::size_t samples = 0;
};
/// Least-squares slope of log Q against log t over [t_lo, t_hi].
PowerFit fit_exponent(const std::vector<double>& t, const std::vector<double>& q,
                      double t_lo, double t_hi);

struct DiagnosticsRecord {
  double t = 0.0;
  std::vector<double> p_list;
  double bigZ = 0.0;
  double m0 = 0.0;
  std::vector<double> mR_list;
  double e0 = 0.0;
  double omega_sup = 0.0;
  std::vector<double> omega_lp;
  double dP2_bulk = 0.0;
  double dP2_axis = 0.0;
  double dZ_bulk = 0.0;
  double dZ_axis = 0.0;  // NaN when the half-plane grid was skipped
  double mass_axis_r = 0.0;
  double mass_axis_z = 0.0;
  double mass_weighted_z = 0.0;
  double gamma0 = 0.0;
  double ur_axis_integral = 0.0;
  double ineq_resid = 0.0;
  double lj_ratio = 0.0;
  long clamp_count = 0;
  double max_zeta = 0.0;
  double p2_line = 0.0;
  double z_line = 0.0;
  std::vector<double> zprime_ratio;  // (-Z') R^4 / m_R^4 per R
  std::vector<double> mR4_integral;  // running \int_0^t m_R^4 dt per R
  std::string status = "ok";
};

/// Quantities fixed by the initial data.
struct InitialData {
  double a0 = 0.0;
  double e0 = 0.0;
  double gamma0 = 0.0;
};

/// Builds one record. `field` is the self-induced field with psi.
/// `previous` (may be null) feeds the running time integrals.
DiagnosticsRecord make_record(double t, const ParticleSystem& sys,
                              const SelfField& field, const InitialData& init,
                              const DiagnosticsConfig& cfg, bool with_grid,
                              long clamp_count, const DiagnosticsRecord* previous);

std::vector<std::string> csv_header(const DiagnosticsConfig& cfg);
void write_csv_header(std::ostream& os, const DiagnosticsConfig& cfg);
void write_csv_row(std::ostream& os, const DiagnosticsRecord& rec);

}  // namespace axisym
