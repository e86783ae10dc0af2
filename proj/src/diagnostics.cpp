#include "axisym/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "axisym/kernel.hpp"
#include "axisym/numeric.hpp"
#include "axisym/quadrature.hpp"

namespace axisym {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class F>
double particle_sum(const ParticleSystem& sys, F&& f) {
  CompensatedSum acc;
  for (const auto& p : sys.particles) acc.add(f(p) * p.zeta * p.mu);
  return acc.value();
}

struct Extent {
  double r_hi = 0.0;
  double z_hi = 0.0;
};

Extent extent_of(const ParticleSystem& sys) {
  Extent e;
  for (const auto& p : sys.particles) {
    e.r_hi = std::max(e.r_hi, p.r);
    e.z_hi = std::max(e.z_hi, p.z);
  }
  return e;
}

void require_blob(const ParticleSystem& sys, const char* who) {
  if (!(sys.delta > 0.0))
    throw DomainError(std::string(who) + ": blob width must be positive");
}

std::string number_label(double x) {
  std::ostringstream os;
  if (std::isinf(x)) {
    os << "inf";
  } else {
    os << std::setprecision(6) << x;
  }
  return os.str();
}

}  // namespace

double moment_pk(const ParticleSystem& sys, double k) {
  if (k == 2.0) return particle_sum(sys, [](const Particle& p) { return p.r * p.r; });
  return particle_sum(sys, [k](const Particle& p) { return std::pow(p.r, k); });
}

double vertical_Z(const ParticleSystem& sys) {
  return particle_sum(sys, [](const Particle& p) { return p.z; });
}

double mass_mR(const ParticleSystem& sys, double R) {
  if (R < 0.0) throw DomainError("mass_mR: R must be nonnegative");
  return particle_sum(sys, [R](const Particle& p) { return p.r <= R ? 1.0 : 0.0; });
}

double energy_e0(const ParticleSystem& sys, const SelfField& field) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < sys.size(); ++i)
    acc.add(field.psi[i] * sys.particles[i].zeta * sys.particles[i].mu);
  return 2.0 * acc.value();
}

double energy_e0(const ParticleSystem& sys, bool deterministic) {
  if (sys.empty()) return 0.0;
  require_blob(sys, "energy_e0");
  return energy_e0(sys, self_field(sys, true, deterministic));
}

OmegaNorms omega_norms(const ParticleSystem& sys, const std::vector<double>& p_list) {
  OmegaNorms out;
  for (const auto& p : sys.particles) out.sup = std::max(out.sup, p.zeta * p.r);
  for (double p : p_list) {
    if (!(p >= 1.0)) throw DomainError("omega_norms: p must be >= 1");
    if (std::isinf(p)) {
      out.lp.push_back(out.sup);
      continue;
    }
    CompensatedSum acc;
    for (const auto& q : sys.particles) acc.add(std::pow(q.zeta * q.r, p) * q.mu);
    out.lp.push_back(std::pow(4.0 * std::numbers::pi * acc.value(), 1.0 / p));
  }
  return out;
}

AxisProfile axis_profile(const ParticleSystem& sys, const QuadratureConfig& q) {
  AxisProfile out;
  if (sys.empty()) return out;
  require_blob(sys, "axis_profile");
  const Extent ext = extent_of(sys);
  const double width = q.axis_width > 0.0 ? q.axis_width : 2.0 * sys.delta;
  const double far = q.axis_far * (ext.r_hi + ext.z_hi);

  const LineRule rr = half_line_rule(width, ext.r_hi + 2.0 * width, far,
                                     PanelRule::kronrod15);
  const LineRule zr = half_line_rule(width, ext.z_hi + 2.0 * width, far,
                                     PanelRule::kronrod15);
  out.r = rr.x;
  out.z = zr.x;
  out.ur = axis_radial_velocity(out.r, sys, sys.delta);
  out.uz = axis_vertical_velocity(out.z, sys);

  const std::size_t nr = out.r.size(), nz = out.z.size();
  std::vector<double> v1(nr), v2(nr), v3(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    const double x = out.r[i], u = out.ur[i];
    v1[i] = u;
    v2[i] = x * u * u;
    v3[i] = x * x * u;
    out.max_ur = std::max(out.max_ur, std::abs(u));
  }
  std::vector<double> w1(nz), w2(nz), w3(nz);
  for (std::size_t i = 0; i < nz; ++i) {
    const double x = out.z[i], u = out.uz[i];
    w1[i] = -u;
    w2[i] = 0.5 * u * u;
    w3[i] = -x * u;
  }
  auto take = [&](const LineRule& rule, const std::vector<double>& v, double& dst) {
    const LineIntegral li = apply_rule(rule, v);
    dst = li.value;
    if (li.error > q.rel_tol * std::abs(li.value)) out.converged = false;
  };
  take(rr, v1, out.ur_int);
  take(rr, v2, out.r_ur2);
  take(rr, v3, out.r2_ur);
  take(zr, w1, out.neg_uz_int);
  take(zr, w2, out.half_uz2);
  take(zr, w3, out.z_neg_uz);
  return out;
}

double half_plane_ur2_over_r(const ParticleSystem& sys, const QuadratureConfig& q) {
  if (sys.empty()) return 0.0;
  require_blob(sys, "half_plane_ur2_over_r");
  const Extent ext = extent_of(sys);
  const double width = q.grid_width > 0.0 ? q.grid_width : 2.0 * sys.delta;
  const double far = q.grid_far * (ext.r_hi + ext.z_hi);
  const LineRule rr = half_line_rule(width, ext.r_hi + 3.0 * width, far, PanelRule::gauss4);
  const LineRule zr = half_line_rule(width, ext.z_hi + 3.0 * width, far, PanelRule::gauss4);

  FieldRequest req;
  req.delta = sys.delta;
  req.fold_odd = true;
  req.probes.reserve(rr.x.size() * zr.x.size());
  for (double r : rr.x)
    for (double z : zr.x) req.probes.push_back({r, z});
  const auto u = induced_velocity(req, sys);

  CompensatedSum acc;
  std::size_t k = 0;
  for (std::size_t i = 0; i < rr.x.size(); ++i) {
    CompensatedSum col;
    for (std::size_t j = 0; j < zr.x.size(); ++j, ++k)
      col.add(zr.w[j] * u[k].ur * u[k].ur);
    acc.add(rr.w[i] / rr.x[i] * col.value());
  }
  return acc.value();
}

TwoWays dP2_two_ways(const ParticleSystem& sys, const QuadratureConfig& q,
                     bool deterministic) {
  TwoWays out;
  if (sys.empty()) return out;
  const SelfField f = self_field(sys, false, deterministic);
  CompensatedSum acc;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& p = sys.particles[i];
    acc.add(p.r * f.u[i].ur * p.zeta * p.mu);
  }
  out.bulk = 2.0 * acc.value();
  const AxisProfile ax = axis_profile(sys, q);
  out.axis = ax.r_ur2;
  out.converged = ax.converged;
  return out;
}

TwoWays dZ_two_ways(const ParticleSystem& sys, const QuadratureConfig& q,
                    bool deterministic) {
  TwoWays out;
  if (sys.empty()) return out;
  const SelfField f = self_field(sys, false, deterministic);
  CompensatedSum acc;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& p = sys.particles[i];
    acc.add(f.u[i].uz * p.zeta * p.mu);
  }
  out.bulk = acc.value();
  const AxisProfile ax = axis_profile(sys, q);
  out.axis = -(ax.half_uz2 + half_plane_ur2_over_r(sys, q));
  out.converged = ax.converged;
  return out;
}

double weighted_z_mass(const ParticleSystem& sys) {
  return particle_sum(sys, [](const Particle& p) { return p.z / std::hypot(p.r, p.z); });
}

MassIdentities mass_identities(const ParticleSystem& sys, const QuadratureConfig& q) {
  MassIdentities out;
  if (sys.empty()) return out;
  const AxisProfile ax = axis_profile(sys, q);
  out.axis_r = ax.ur_int;
  out.axis_z = ax.neg_uz_int;
  out.weighted_z = weighted_z_mass(sys);
  out.weighted_r = particle_sum(
      sys, [](const Particle& p) { return 1.0 - p.z / std::hypot(p.r, p.z); });
  out.converged = ax.converged;
  return out;
}

double gamma_bound(double m0, double a0, double z0) {
  if (!(m0 > 0.0) || !(a0 > 0.0) || !(z0 > 0.0))
    throw DomainError("gamma_bound: needs positive mass, A0 and Z(0)");
  const double k = std::sqrt(a0) * m0 / (2.0 * z0 * std::sqrt(z0));
  const double root = std::sqrt(1.0 + k * k);
  // 1 - k/sqrt(1+k^2) without cancellation for large k.
  return 0.25 * m0 / (root * (root + k));
}

double gamma_bound(const ParticleSystem& initial) {
  return gamma_bound(initial.total_mass(), initial.a0, vertical_Z(initial));
}

PowerFit fit_exponent(const std::vector<double>& t, const std::vector<double>& q,
                      double t_lo, double t_hi) {
  if (t.size() != q.size()) throw std::invalid_argument("fit_exponent: length mismatch");
  if (!(t_lo > 0.0) || !(t_hi > t_lo))
    throw std::invalid_argument("fit_exponent: window must satisfy 0 < t_lo < t_hi");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(q[i] > 0.0))
      throw std::invalid_argument("fit_exponent: nonpositive value in window");
    x.push_back(std::log(t[i]));
    y.push_back(std::log(q[i]));
  }
  PowerFit fit;
  fit.samples = x.size();
  if (x.size() < 5)
    throw std::invalid_argument("fit_exponent: fewer than 5 samples in window");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - fit.intercept - fit.slope * x[i];
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / x.size());
  return fit;
}

DiagnosticsRecord make_record(double t, const ParticleSystem& sys,
                              const SelfField& field, const InitialData& init,
                              const DiagnosticsConfig& cfg, bool with_grid,
                              long clamp_count, const DiagnosticsRecord* previous) {
  DiagnosticsRecord rec;
  rec.t = t;
  for (double k : cfg.k_list) rec.p_list.push_back(moment_pk(sys, k));
  rec.bigZ = vertical_Z(sys);
  rec.m0 = sys.total_mass();
  for (double R : cfg.R_list) rec.mR_list.push_back(mass_mR(sys, R));
  const OmegaNorms norms = omega_norms(sys, cfg.p_list);
  rec.omega_sup = norms.sup;
  rec.omega_lp = norms.lp;
  rec.gamma0 = init.gamma0;
  rec.clamp_count = clamp_count;
  rec.max_zeta = sys.max_zeta();

  if (sys.empty()) {
    rec.zprime_ratio.assign(cfg.R_list.size(), kNaN);
    rec.mR4_integral.assign(cfg.R_list.size(), 0.0);
    rec.dZ_axis = with_grid ? 0.0 : kNaN;
    rec.ineq_resid = 0.0;
    rec.lj_ratio = kNaN;
    return rec;
  }

  rec.e0 = energy_e0(sys, field);
  CompensatedSum p2b, zb;
  double max_ur = 0.0;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& p = sys.particles[i];
    p2b.add(p.r * field.u[i].ur * p.zeta * p.mu);
    zb.add(field.u[i].uz * p.zeta * p.mu);
    max_ur = std::max(max_ur, std::abs(field.u[i].ur));
  }
  rec.dP2_bulk = 2.0 * p2b.value();
  rec.dZ_bulk = zb.value();

  const AxisProfile ax = axis_profile(sys, cfg.quad);
  rec.dP2_axis = ax.r_ur2;
  rec.mass_axis_r = ax.ur_int;
  rec.mass_axis_z = ax.neg_uz_int;
  rec.mass_weighted_z = weighted_z_mass(sys);
  rec.ur_axis_integral = ax.ur_int;
  rec.p2_line = ax.r2_ur;
  rec.z_line = ax.z_neg_uz;
  rec.dZ_axis = with_grid ? -(ax.half_uz2 + half_plane_ur2_over_r(sys, cfg.quad)) : kNaN;
  if (!ax.converged) rec.status = "quad_warn";
  max_ur = std::max(max_ur, ax.max_ur);

  // Full-plane forms: P2 over Pi is twice the upper-quadrant moment and its
  // derivative twice dP2_bulk.
  const double p2 = moment_pk(sys, 2.0);
  const double a0 = init.a0;
  rec.ineq_resid = 2.0 * std::sqrt(a0 * init.e0) * std::sqrt(2.0 * p2) - 2.0 * rec.dP2_bulk;
  rec.lj_ratio = max_ur / (std::cbrt(rec.e0) * std::sqrt(a0) * std::pow(2.0 * p2, 1.0 / 6.0));

  for (std::size_t k = 0; k < cfg.R_list.size(); ++k) {
    const double R = cfg.R_list[k];
    const double mR = rec.mR_list[k];
    rec.zprime_ratio.push_back(mR > 0.0 ? -rec.dZ_bulk * std::pow(R / mR, 4) : kNaN);
    double integral = 0.0;
    if (previous != nullptr && k < previous->mR4_integral.size()) {
      const double m_prev = previous->mR_list[k];
      integral = previous->mR4_integral[k] +
                 0.5 * (t - previous->t) * (std::pow(m_prev, 4) + std::pow(mR, 4));
    }
    rec.mR4_integral.push_back(integral);
  }
  return rec;
}

std::vector<std::string> csv_header(const DiagnosticsConfig& cfg) {
  std::vector<std::string> h{"t"};
  for (double k : cfg.k_list) h.push_back("P" + number_label(k));
  h.insert(h.end(), {"Z", "m0"});
  for (double R : cfg.R_list) h.push_back("mR_" + number_label(R));
  h.insert(h.end(), {"E0", "omega_sup"});
  for (double p : cfg.p_list) h.push_back("omega_L" + number_label(p));
  h.insert(h.end(), {"dP2_bulk", "dP2_axis", "dZ_bulk", "dZ_axis", "mass_axis_r",
                     "mass_axis_z", "mass_weighted_z", "gamma0", "ur_axis_integral",
                     "ineq_resid", "lj_ratio", "clamp_count", "max_zeta", "p2_line",
                     "z_line"});
  for (double R : cfg.R_list) h.push_back("zprime_ratio_" + number_label(R));
  for (double R : cfg.R_list) h.push_back("mR4_integral_" + number_label(R));
  h.push_back("status");
  return h;
}

void write_csv_header(std::ostream& os, const DiagnosticsConfig& cfg) {
  const auto h = csv_header(cfg);
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
  os << '\n';
}

void write_csv_row(std::ostream& os, const DiagnosticsRecord& rec) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  bool first = true;
  auto put = [&](double v) {
    if (!first) os << ',';
    first = false;
    os << v;
  };
  put(rec.t);
  for (double v : rec.p_list) put(v);
  put(rec.bigZ);
  put(rec.m0);
  for (double v : rec.mR_list) put(v);
  put(rec.e0);
  put(rec.omega_sup);
  for (double v : rec.omega_lp) put(v);
  for (double v : {rec.dP2_bulk, rec.dP2_axis, rec.dZ_bulk, rec.dZ_axis, rec.mass_axis_r,
                   rec.mass_axis_z, rec.mass_weighted_z, rec.gamma0, rec.ur_axis_integral,
                   rec.ineq_resid, rec.lj_ratio})
    put(v);
  os << ',' << rec.clamp_count;
  for (double v : {rec.max_zeta, rec.p2_line, rec.z_line}) put(v);
  for (double v : rec.zprime_ratio) put(v);
  for (double v : rec.mR4_integral) put(v);
  os << ',' << rec.status << '\n';
  os.precision(old);
}

}  // namespace axisym
