#include "axisym/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "axisym/field.hpp"
#include "axisym/kernel.hpp"
#include "axisym/numeric.hpp"

namespace axisym {
namespace {

constexpr double kPi = std::numbers::pi;

// The integrand peaks in a layer of width sqrt(s) at theta = 0; panels
// grow by a factor of 10 from there.
template <class F>
double theta_integral(F&& f, double s) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double total = 0.0;
  double lo = 0.0;
  const double first = std::min(kPi, std::sqrt(s));
  while (lo < kPi) {
    const double hi = std::min(kPi, lo == 0.0 ? first : 10.0 * lo);
    total += GK::integrate(f, lo, hi, 12, 1e-11);
    lo = hi;
  }
  return total;
}

// With a = 2(1 - cos t) + s and c = s + 2, the constant 1/sqrt(c) integrates
// to zero against cos t; subtracting it removes the cancellation between
// the two halves of [0, pi]:
//   cos t / sqrt(a) -> 2 cos^2 t / (sqrt(a) sqrt(c) (sqrt(a) + sqrt(c))).
struct ThetaTerms {
  double base, x, y;
};
ThetaTerms theta_terms(double t, double s) {
  const double sh = std::sin(0.5 * t);
  const double a = 4.0 * sh * sh + s;
  const double c = s + 2.0;
  const double sa = std::sqrt(a), sc = std::sqrt(c);
  const double cs = std::cos(t);
  return {cs * cs / (sa * sc * (sa + sc)), 1.0 / sa, 1.0 / sc};
}

// Closed form evaluated with k passed where the parameter m belongs.
KernelEval mutated_eval(double s) {
  const double m = 4.0 / (s + 4.0);
  const double k = std::sqrt(m);
  const EllipticPair e = elliptic_ke(k);
  return {s, ((2.0 - m) * e.bigK - 2.0 * e.bigE) / k,
          -0.125 * k * ((2.0 - m) * e.bigE / (1.0 - m) - 2.0 * e.bigK)};
}

double rel(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); }

}  // namespace

double quadrature_F(double s) {
  if (!(s > 0.0)) throw DomainError("quadrature_F: s must be positive");
  return theta_integral([s](double t) { return 2.0 * theta_terms(t, s).base; }, s);
}

double quadrature_F_prime(double s) {
  if (!(s > 0.0)) throw DomainError("quadrature_F_prime: s must be positive");
  return theta_integral(
      [s](double t) {
        const ThetaTerms q = theta_terms(t, s);
        return -q.base * (q.x * q.x + q.x * q.y + q.y * q.y);
      },
      s);
}

EllipticQuadrature quadrature_elliptic(double m) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto k = [m](double t) { return 1.0 / std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); };
  auto e = [m](double t) { return std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); };
  return {GK::integrate(k, 0.0, 0.5 * kPi, 20, 1e-14),
          GK::integrate(e, 0.0, 0.5 * kPi, 20, 1e-14)};
}

bool CheckReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

void CheckReport::add(const std::string& name, double value, double tol,
                      const std::string& note) {
  rows.push_back({name, value, tol, value <= tol, note});
}

void CheckReport::print(std::ostream& os) const {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::left << std::setw(18) << "check" << std::setw(14) << "value"
     << std::setw(12) << "tolerance" << "result\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(18) << r.name << std::setw(14) << std::setprecision(4)
       << std::scientific << r.value << std::setw(12);
    if (std::isinf(r.tol)) {
      os << "report" << "-";
    } else {
      os << std::setprecision(1) << r.tol << (r.pass ? "PASS" : "FAIL");
    }
    if (!r.note.empty()) os << "  " << r.note;
    os << '\n';
    os.flags(flags);
  }
  os.precision(prec);
}

Tolerances default_kernel_tolerances() {
  return {{"oracle_F", 1e-9},       {"oracle_Fp", 1e-9},      {"asym_F_large", 1e-3},
          {"asym_F_small", 1e-4},   {"asym_Fp_large", 1e-2},  {"asym_Fp_small", 1e-2},
          {"fd_Fp", 1e-6},          {"legendre", 1e-10},      {"elliptic_quad", 1e-10},
          {"monotone", 0.0}};
}

CheckReport run_kernel_suite(const KernelSuiteOptions& opt) {
  Tolerances tol = default_kernel_tolerances();
  for (const auto& [k, v] : opt.tol) tol[k] = v;
  auto eval = [&](double s) { return opt.mutate_convention ? mutated_eval(s) : kernel_eval(s); };

  CheckReport rep;
  double worst_f = 0.0, worst_fp = 0.0;
  std::vector<KernelEval> sweep;
  for (int i = 0; i < 200; ++i) {
    const double s = std::pow(10.0, -6.0 + 12.0 * i / 199.0);
    const KernelEval e = eval(s);
    sweep.push_back(e);
    worst_f = std::max(worst_f, rel(e.f, quadrature_F(s)));
    worst_fp = std::max(worst_fp, rel(e.fp, quadrature_F_prime(s)));
  }
  rep.add("oracle_F", worst_f, tol["oracle_F"], "200 log-spaced s in [1e-6, 1e6]");
  rep.add("oracle_Fp", worst_fp, tol["oracle_Fp"]);

  const double f_large = eval(1e6).f * 1e9;
  rep.add("asym_F_large", rel(f_large, 0.5 * kPi), tol["asym_F_large"],
          "F(1e6) 1e9 vs pi/2 = 1.5707963");
  const double small_ref = 0.5 * std::log(1e8) + std::log(8.0) - 2.0;
  rep.add("asym_F_small", std::abs(eval(1e-8).f - small_ref), tol["asym_F_small"],
          "F(1e-8) vs log(1/s)/2 + log 8 - 2");
  rep.add("asym_Fp_large", rel(-eval(1e6).fp * std::pow(1e6, 2.5), 0.75 * kPi),
          tol["asym_Fp_large"], "-F'(1e6) s^(5/2) vs 3pi/4 = 2.3561945");
  rep.add("asym_Fp_small", rel(-eval(1e-6).fp, 0.5e6), tol["asym_Fp_small"],
          "-F'(1e-6) vs 1/(2s)");

  const double h = 1e-5;
  const double fd = (eval(1.0 + h).f - eval(1.0 - h).f) / (2.0 * h);
  rep.add("fd_Fp", rel(fd, eval(1.0).fp), tol["fd_Fp"], "centered difference at s = 1");

  long violations = 0;
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    if (!(sweep[i].f < sweep[i - 1].f)) ++violations;
    if (!(sweep[i].fp > sweep[i - 1].fp)) ++violations;
  }
  rep.add("monotone", static_cast<double>(violations), tol["monotone"],
          "F decreasing and F' increasing on the sweep");

  double legendre = 0.0;
  for (double m : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    const EllipticPair a = elliptic_ke(m);
    const EllipticPair b = elliptic_ke_complement(m);  // parameter 1 - m
    legendre = std::max(legendre, std::abs(a.bigE * b.bigK + b.bigE * a.bigK -
                                           a.bigK * b.bigK - 0.5 * kPi));
  }
  rep.add("legendre", legendre, tol["legendre"], "E K' + E' K - K K' = pi/2");

  const EllipticPair half = elliptic_ke(0.5);
  const EllipticQuadrature q = quadrature_elliptic(0.5);
  rep.add("elliptic_quad", std::max(rel(half.bigK, q.bigK), rel(half.bigE, q.bigE)),
          tol["elliptic_quad"], "K, E at m = 0.5");

  double env_small = 0.0, env_large = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double s = std::pow(10.0, -8.0 + 4.0 * i / 40.0);
    const double a = 0.5 * std::log(1.0 / s) + std::log(8.0) - 2.0;
    env_small = std::max(env_small, std::abs(eval(s).f - a) / (s * std::log(1.0 / s)));
    const double S = std::pow(10.0, 2.0 + 4.0 * i / 40.0);
    env_large = std::max(env_large, std::abs(eval(S).f * std::pow(S, 1.5) - 0.5 * kPi) * S);
  }
  const double inf = std::numeric_limits<double>::infinity();
  rep.add("env_small", env_small, inf, "sup |F - asym| / (s log(1/s)), s in [1e-8, 1e-4]");
  rep.add("env_large", env_large, inf, "sup |F s^(3/2) - pi/2| s, s in [1e2, 1e6]");
  return rep;
}

IdentityValues identity_values(const ParticleSystem& sys, const QuadratureConfig& q,
                               bool deterministic) {
  IdentityValues v;
  if (sys.empty()) return v;
  v.m0 = sys.total_mass();
  v.P2 = moment_pk(sys, 2.0);
  v.Z = vertical_Z(sys);
  const SelfField f = self_field(sys, false, deterministic);
  CompensatedSum p2b, zb;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& p = sys.particles[i];
    p2b.add(p.r * f.u[i].ur * p.zeta * p.mu);
    zb.add(f.u[i].uz * p.zeta * p.mu);
  }
  v.dP2_bulk = 2.0 * p2b.value();
  v.dZ_bulk = zb.value();
  const AxisProfile ax = axis_profile(sys, q);
  v.dP2_axis = ax.r_ur2;
  v.dZ_axis = -(ax.half_uz2 + half_plane_ur2_over_r(sys, q));
  v.axis_r = ax.ur_int;
  v.axis_z = ax.neg_uz_int;
  v.weighted_z = weighted_z_mass(sys);
  v.weighted_r = v.m0 - v.weighted_z;
  v.p2_line = ax.r2_ur;
  v.z_line = ax.z_neg_uz;
  v.converged = ax.converged;
  return v;
}

std::map<std::string, double> identity_residuals(const IdentityValues& v) {
  auto ratio = [](double num, double den) { return den == 0.0 ? std::abs(num) : std::abs(num / den); };
  return {{"dP2", ratio(v.dP2_bulk - v.dP2_axis, v.dP2_bulk)},
          {"dZ", ratio(v.dZ_bulk - v.dZ_axis, v.dZ_bulk)},
          {"mass_sum", ratio(v.axis_r + v.axis_z - v.m0, v.m0)},
          {"mass_z", ratio(v.axis_z - v.weighted_z, v.m0)},
          {"p2_line", ratio(v.p2_line - v.P2, v.P2)},
          {"z_line", ratio(v.z_line - v.Z, v.Z)}};
}

Tolerances default_identity_tolerances() {
  return {{"dP2", 1e-2}, {"dZ", 2e-2}, {"mass_sum", 1e-3},
          {"mass_z", 1e-3}, {"p2_line", 1e-2}, {"z_line", 1e-2}};
}

CheckReport identity_report(const IdentityValues& v, const Tolerances& tol) {
  Tolerances t = default_identity_tolerances();
  for (const auto& [k, x] : tol) t[k] = x;
  const auto res = identity_residuals(v);
  CheckReport rep;
  rep.add("dP2", res.at("dP2"), t["dP2"], "2 sum r u_r w  vs  int r u_r(r,0)^2");
  rep.add("dZ", res.at("dZ"), t["dZ"], "sum u_z w  vs  -(int u_z(0,z)^2/2 + iint u_r^2/r)");
  rep.add("mass_sum", res.at("mass_sum"), t["mass_sum"], "int u_r(r,0) + int -u_z(0,z)  vs  m0");
  rep.add("mass_z", res.at("mass_z"), t["mass_z"], "int -u_z(0,z)  vs  sum z/|x| w");
  rep.add("p2_line", res.at("p2_line"), t["p2_line"], "int r^2 u_r(r,0)  vs  P2");
  rep.add("z_line", res.at("z_line"), t["z_line"], "int z (-u_z(0,z))  vs  Z");
  rep.add("quadrature", v.converged ? 0.0 : 1.0, 0.0, "axis quadrature error estimates");
  return rep;
}

}  // namespace axisym
