#include "axisym/field.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

#include <omp.h>

#include "axisym/kernel.hpp"
#include "axisym/numeric.hpp"

namespace axisym {
namespace {

constexpr double kPi = std::numbers::pi;

// Source data laid out for the inner loops.
struct Sources {
  std::vector<double> r, z, w, sqrt_r, inv_r;

  explicit Sources(const ParticleSystem& sys) {
    const std::size_t n = sys.size();
    r.resize(n);
    z.resize(n);
    w.resize(n);
    sqrt_r.resize(n);
    inv_r.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto& p = sys.particles[j];
      r[j] = p.r;
      z[j] = p.z;
      w[j] = p.zeta * p.mu;
      sqrt_r[j] = std::sqrt(p.r);
      inv_r[j] = 1.0 / p.r;
    }
  }
  std::size_t size() const { return r.size(); }
};

struct ProbeSums {
  double ur = 0.0;
  double uz = 0.0;
  double psi = 0.0;
  bool singular = false;
};

// Kernel arguments are gathered in blocks so the elliptic evaluations
// vectorize; slots [0, B) hold direct pairs, [B, 2B) the mirrors.
constexpr std::size_t kBlock = 128;

struct Scratch {
  double s[2 * kBlock];
  double f[2 * kBlock];
  double fp[2 * kBlock];
};

// Unscaled per-source terms; the probe-only prefactors are applied once.
//   ur  = 1/(pi r)  sum w (z-zb)/sqrt(r rb) F'(D)
//   uz  = -1/(pi r) sum w sqrt(r rb) [F/(4r) + ((r-rb)/(r rb) - D/(2r)) F']
//   psi = 1/(2 pi)  sum w sqrt(r rb) F(D)
ProbeSums probe_sums(double r, double z, const Sources& src, double delta,
                     bool fold, bool with_psi) {
  ProbeSums out;
  CompensatedSum ur, uz, psi;
  Scratch sc;
  const double d2 = delta * delta;
  const double sr = std::sqrt(r);
  const double ir = 1.0 / r;
  const double half_ir = 0.5 * ir;
  const double quarter_ir = 0.25 * ir;
  const std::size_t n = src.size();
  for (std::size_t j0 = 0; j0 < n; j0 += kBlock) {
    const std::size_t len = std::min(kBlock, n - j0);
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t j = j0 + k;
      const double inv_rr = ir * src.inv_r[j];
      const double dr = r - src.r[j];
      const double dz = z - src.z[j];
      const double dzm = z + src.z[j];
      const double base = dr * dr + d2;
      sc.s[k] = (base + dz * dz) * inv_rr;
      sc.s[kBlock + k] = (base + dzm * dzm) * inv_rr;
    }
    for (std::size_t k = 0; k < len; ++k) {
      if (!(sc.s[k] > 0.0)) {
        out.singular = true;
        return out;
      }
    }
    detail::kernel_eval_batch(sc.s, sc.f, sc.fp, len);
    if (fold)
      detail::kernel_eval_batch(sc.s + kBlock, sc.f + kBlock, sc.fp + kBlock, len);
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t j = j0 + k;
      const double w = src.w[j];
      const double srr = sr * src.sqrt_r[j];
      const double radial = (r - src.r[j]) * ir * src.inv_r[j];
      const double dz = z - src.z[j];
      const double s0 = sc.s[k];
      double tr = dz / srr * sc.fp[k];
      double tz = srr * (sc.f[k] * quarter_ir + (radial - s0 * half_ir) * sc.fp[k]);
      double tp = srr * sc.f[k];
      if (fold) {
        const std::size_t km = kBlock + k;
        const double dzm = z + src.z[j];
        const double sm = sc.s[km];
        tr -= dzm / srr * sc.fp[km];
        tz -= srr * (sc.f[km] * quarter_ir + (radial - sm * half_ir) * sc.fp[km]);
        tp -= srr * sc.f[km];
      }
      ur.add(w * tr);
      uz.add(w * tz);
      if (with_psi) psi.add(w * tp);
    }
  }
  out.ur = ur.value() * ir / kPi;
  out.uz = -uz.value() * ir / kPi;
  out.psi = psi.value() / (2.0 * kPi);
  return out;
}

double axis_uz(double z, const ParticleSystem& sources, double delta,
               bool fold) {
  CompensatedSum acc;
  const double d2 = delta * delta;
  for (const auto& p : sources.particles) {
    const double b2 = p.r * p.r + d2;
    const double dz = z - p.z;
    const double q = b2 + dz * dz;
    double t = p.r * p.r / (q * std::sqrt(q));
    if (fold) {
      const double dzm = z + p.z;
      const double qm = b2 + dzm * dzm;
      t -= p.r * p.r / (qm * std::sqrt(qm));
    }
    acc.add(p.zeta * p.mu * t);
  }
  return -0.5 * acc.value();
}

void require_finite_delta(double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw DomainError("blob width must be finite and nonnegative");
}

}  // namespace

double axis_epsilon(const ParticleSystem& sources) {
  double rmax = 0.0;
  for (const auto& p : sources.particles) rmax = std::max(rmax, p.r);
  return 1e-6 * rmax;
}

std::vector<VelocitySample> induced_velocity(const FieldRequest& req,
                                             const ParticleSystem& sources) {
  require_finite_delta(req.delta);
  const std::size_t np = req.probes.size();
  std::vector<VelocitySample> out(np);
  for (std::size_t i = 0; i < np; ++i) {
    if (!(req.probes[i].r >= 0.0))
      throw DomainError("induced_velocity: probe with negative r");
    out[i].r = req.probes[i].r;
    out[i].z = req.probes[i].z;
  }
  if (sources.empty()) return out;

  const Sources src(sources);
  const double eps = axis_epsilon(sources);
  std::atomic<bool> singular{false};
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < np; ++i) {
    auto& o = out[i];
    if (o.r < eps) {
      o.ur = 0.0;
      o.uz = axis_uz(o.z, sources, req.delta, req.fold_odd);
      continue;
    }
    const ProbeSums s = probe_sums(o.r, o.z, src, req.delta, req.fold_odd, false);
    if (s.singular) singular = true;
    o.ur = s.ur;
    o.uz = s.uz;
  }
  if (singular)
    throw SingularEvaluation("induced_velocity: probe coincides with a source at delta = 0");
  return out;
}

namespace {

double axis_ur_sum(double r, const Sources& src, double delta) {
  // u_r(r,0) = (2/pi) sum w zb/(r sqrt(r rb)) (-F'(D)), D at z = 0.
  Scratch sc;
  CompensatedSum acc;
  const double d2 = delta * delta;
  const double ir = 1.0 / r;
  const double sr = std::sqrt(r);
  const std::size_t n = src.size();
  for (std::size_t j0 = 0; j0 < n; j0 += kBlock) {
    const std::size_t len = std::min(kBlock, n - j0);
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t j = j0 + k;
      const double dr = r - src.r[j];
      sc.s[k] = (dr * dr + src.z[j] * src.z[j] + d2) * ir * src.inv_r[j];
    }
    for (std::size_t k = 0; k < len; ++k) {
      if (!(sc.s[k] > 0.0))
        throw SingularEvaluation("axis_radial_velocity: probe on a source at delta = 0");
    }
    detail::kernel_eval_batch(sc.s, sc.f, sc.fp, len);
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t j = j0 + k;
      acc.add(src.w[j] * src.z[j] / (sr * src.sqrt_r[j]) * (-sc.fp[k]));
    }
  }
  return 2.0 / kPi * acc.value() * ir;
}

}  // namespace

double axis_radial_velocity(double r, const ParticleSystem& sources,
                            double delta) {
  if (!(r > 0.0)) throw DomainError("axis_radial_velocity: r must be positive");
  require_finite_delta(delta);
  if (sources.empty()) return 0.0;
  return axis_ur_sum(r, Sources(sources), delta);
}

std::vector<double> axis_radial_velocity(const std::vector<double>& r,
                                         const ParticleSystem& sources,
                                         double delta) {
  require_finite_delta(delta);
  for (double x : r)
    if (!(x > 0.0)) throw DomainError("axis_radial_velocity: r must be positive");
  std::vector<double> out(r.size(), 0.0);
  if (sources.empty()) return out;
  const Sources src(sources);
  std::atomic<bool> singular{false};
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < r.size(); ++i) {
    try {
      out[i] = axis_ur_sum(r[i], src, delta);
    } catch (const SingularEvaluation&) {
      singular = true;
    }
  }
  if (singular)
    throw SingularEvaluation("axis_radial_velocity: probe on a source at delta = 0");
  return out;
}

std::vector<double> axis_vertical_velocity(const std::vector<double>& z,
                                           const ParticleSystem& sources,
                                           double delta) {
  require_finite_delta(delta);
  std::vector<double> out(z.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < z.size(); ++i)
    out[i] = axis_uz(z[i], sources, delta, true);
  return out;
}

double axis_vertical_velocity(double z, const ParticleSystem& sources,
                              double delta) {
  require_finite_delta(delta);
  return axis_uz(z, sources, delta, true);
}

double stream_function(const Probe& probe, const ParticleSystem& sources,
                       double delta) {
  if (!(probe.r >= 0.0)) throw DomainError("stream_function: negative r");
  require_finite_delta(delta);
  if (probe.r == 0.0 || sources.empty()) return 0.0;
  const Sources src(sources);
  const ProbeSums s = probe_sums(probe.r, probe.z, src, delta, true, true);
  if (s.singular)
    throw SingularEvaluation("stream_function: probe coincides with a source at delta = 0");
  return s.psi;
}

SelfField self_field(const ParticleSystem& sources, bool with_psi,
                     bool deterministic) {
  const std::size_t n = sources.size();
  SelfField out;
  out.u.resize(n);
  if (with_psi) out.psi.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.u[i].r = sources.particles[i].r;
    out.u[i].z = sources.particles[i].z;
  }
  if (n == 0) return out;
  const double delta = sources.delta;
  require_finite_delta(delta);
  const Sources src(sources);
  const double eps = axis_epsilon(sources);
  std::atomic<bool> singular{false};

  if (deterministic) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t i = 0; i < n; ++i) {
      const ProbeSums s = probe_sums(src.r[i], src.z[i], src, delta, true, with_psi);
      if (s.singular) singular = true;
      out.u[i].ur = s.ur;
      out.u[i].uz = s.uz;
      if (with_psi) out.psi[i] = s.psi;
    }
  } else {
    // Each unordered pair {i, j} shares D and the mirror D, so both
    // directions cost one pair of kernel evaluations.
    struct Acc {
      CompensatedSum ur, uz, psi;
    };
    const int nthreads = omp_get_max_threads();
    std::vector<std::vector<Acc>> bufs(nthreads);
    const double d2 = delta * delta;
#pragma omp parallel num_threads(nthreads)
    {
      auto& buf = bufs[omp_get_thread_num()];
      buf.assign(n, Acc{});
      Scratch sc;
#pragma omp for schedule(dynamic, 8)
      for (std::size_t i = 0; i < n; ++i) {
        const double ri = src.r[i], zi = src.z[i], wi = src.w[i];
        const double qi = 0.25 * src.inv_r[i], hi = 0.5 * src.inv_r[i];
        for (std::size_t j0 = i; j0 < n; j0 += kBlock) {
          const std::size_t len = std::min(kBlock, n - j0);
          for (std::size_t k = 0; k < len; ++k) {
            const std::size_t j = j0 + k;
            const double inv_rr = src.inv_r[i] * src.inv_r[j];
            const double dr = ri - src.r[j];
            const double dz = zi - src.z[j];
            const double dzm = zi + src.z[j];
            const double base = dr * dr + d2;
            sc.s[k] = (base + dz * dz) * inv_rr;
            sc.s[len + k] = (base + dzm * dzm) * inv_rr;
          }
          bool bad = false;
          for (std::size_t k = 0; k < len; ++k) bad |= !(sc.s[k] > 0.0);
          if (bad) {
            singular = true;
            break;
          }
          detail::kernel_eval_batch(sc.s, sc.f, sc.fp, 2 * len);
          for (std::size_t k = 0; k < len; ++k) {
            const std::size_t j = j0 + k;
            const double wj = src.w[j];
            const double srr = src.sqrt_r[i] * src.sqrt_r[j];
            const double radial = (ri - src.r[j]) * src.inv_r[i] * src.inv_r[j];
            const double dz = zi - src.z[j];
            const double dzm = zi + src.z[j];
            const double s0 = sc.s[k], sm = sc.s[len + k];
            const double f0 = sc.f[k], fm = sc.f[len + k];
            const double g0 = sc.fp[k], gm = sc.fp[len + k];
            const double df = f0 - fm;
            const double dg = g0 - gm;
            const double sg = s0 * g0 - sm * gm;
            // Effect of j on i.
            buf[i].ur.add(wj * (dz * g0 - dzm * gm) / srr);
            buf[i].uz.add(wj * srr * (qi * df + radial * dg - hi * sg));
            if (with_psi) buf[i].psi.add(wj * srr * df);
            if (j == i) continue;
            // Effect of i on j: dz and dr change sign, D is symmetric.
            const double qj = 0.25 * src.inv_r[j], hj = 0.5 * src.inv_r[j];
            buf[j].ur.add(wi * (-dz * g0 - dzm * gm) / srr);
            buf[j].uz.add(wi * srr * (qj * df - radial * dg - hj * sg));
            if (with_psi) buf[j].psi.add(wi * srr * df);
          }
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      CompensatedSum ur, uz, psi;
      for (const auto& b : bufs) {
        ur.add(b[i].ur.sum);
        ur.add(b[i].ur.comp);
        uz.add(b[i].uz.sum);
        uz.add(b[i].uz.comp);
        psi.add(b[i].psi.sum);
        psi.add(b[i].psi.comp);
      }
      out.u[i].ur = ur.value() * src.inv_r[i] / kPi;
      out.u[i].uz = -uz.value() * src.inv_r[i] / kPi;
      if (with_psi) out.psi[i] = psi.value() / (2.0 * kPi);
    }
  }
  if (singular)
    throw SingularEvaluation("self_field: coincident particles at delta = 0");
  for (std::size_t i = 0; i < n; ++i) {
    if (src.r[i] < eps) {
      out.u[i].ur = 0.0;
      out.u[i].uz = axis_uz(src.z[i], sources, delta, true);
    }
  }
  return out;
}

}  // namespace axisym
