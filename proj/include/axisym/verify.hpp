#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "axisym/diagnostics.hpp"
#include "axisym/particles.hpp"

namespace axisym {

// Adaptive Gauss-Kronrod evaluation of the defining theta integrals. Slow;
// used only to check the closed forms.
double quadrature_F(double s);
double quadrature_F_prime(double s);
struct EllipticQuadrature {
  double bigK = 0.0;
  double bigE = 0.0;
};
EllipticQuadrature quadrature_elliptic(double m);

struct CheckRow {
  std::string name;
  double value = 0.0;
  double tol = 0.0;  // value must be <= tol; infinite for report-only rows
  bool pass = true;
  std::string note;
};

struct CheckReport {
  std::vector<CheckRow> rows;
  bool pass() const;
  void add(const std::string& name, double value, double tol, const std::string& note = "");
  void print(std::ostream& os) const;
};

using Tolerances = std::map<std::string, double>;

struct KernelSuiteOptions {
  Tolerances tol;  // overrides by row name
  // Swaps the elliptic argument convention (k where m is expected) in the
  // function under test; the suite must then fail.
  bool mutate_convention = false;
};
CheckReport run_kernel_suite(const KernelSuiteOptions& opt);
Tolerances default_kernel_tolerances();

/// Both sides of every identity on one system.
struct IdentityValues {
  double m0 = 0.0, P2 = 0.0, Z = 0.0;
  double dP2_bulk = 0.0, dP2_axis = 0.0;
  double dZ_bulk = 0.0, dZ_axis = 0.0;
  double axis_r = 0.0, axis_z = 0.0, weighted_z = 0.0, weighted_r = 0.0;
  double p2_line = 0.0, z_line = 0.0;
  bool converged = true;
};
IdentityValues identity_values(const ParticleSystem& sys, const QuadratureConfig& q,
                               bool deterministic);

/// Relative residuals keyed dP2, dZ, mass_sum, mass_z, p2_line, z_line.
std::map<std::string, double> identity_residuals(const IdentityValues& v);
Tolerances default_identity_tolerances();
CheckReport identity_report(const IdentityValues& v, const Tolerances& tol);

}  // namespace axisym
