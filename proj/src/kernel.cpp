#include "axisym/kernel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace axisym {
namespace {

constexpr double kPi = std::numbers::pi;

// Below this parameter the closed form loses digits to cancellation
// ((2-m)K - 2E = O(m^2)); a power series in m is used instead.
constexpr double kSeriesMaxParameter = 0.1;
constexpr int kSeriesTerms = 18;

// Fixed AGM step count of the batched path; enough for mc >= 1e-12.
// Smaller s go through the scalar loop.
constexpr int kBatchAgmSteps = 7;
constexpr double kBatchMinS = 1e-11;

// F(m)  = (pi/2) k  sum_{n>=1} a_n m^n,            a_n = c_n^2 n/(n+1)
// F'(m) = -(pi/8) k sum_{n>=1} a_n (n+1/2) m^(n+1), c_n = binom(2n,n)/4^n
struct SeriesCoefficients {
  std::array<double, kSeriesTerms> f{};
  std::array<double, kSeriesTerms> fp{};
};

constexpr SeriesCoefficients make_series() {
  SeriesCoefficients out;
  double c = 1.0;
  for (int n = 1; n <= kSeriesTerms; ++n) {
    c *= (2.0 * n - 1.0) / (2.0 * n);
    const double a = c * c * n / (n + 1.0);
    out.f[n - 1] = a;
    out.fp[n - 1] = a * (n + 0.5);
  }
  return out;
}

constexpr SeriesCoefficients kSeries = make_series();

struct Agm {
  double bigK;
  double bigE;
  int iterations;
};

// AGM(1, sqrt(mc)); E from the Gauss sum E = K (1 - sum 2^(n-1) c_n^2).
// c_n = (a-b)/2 loses relative accuracy only once it is far too small to
// matter in the sum, so no division is needed inside the loop.
inline Agm agm(double m, double mc) noexcept {
  double a = 1.0;
  double b = std::sqrt(mc);
  double weight = 0.5;
  double sum = weight * m;
  int it = 0;
  while (it < 32) {
    const double c = 0.5 * (a - b);
    weight *= 2.0;
    sum += weight * c * c;
    ++it;
    if (c <= 1e-8 * a) {
      // Remaining correction to a is c^2/(4a), below double resolution.
      a -= c;
      break;
    }
    b = std::sqrt(a * b);
    a -= c;
  }
  const double bigK = kPi / (2.0 * a);
  return {bigK, bigK * (1.0 - sum), it};
}

inline KernelEval series_eval(double s, double m) noexcept {
  double f = kSeries.f[kSeriesTerms - 1];
  double fp = kSeries.fp[kSeriesTerms - 1];
  for (int i = kSeriesTerms - 2; i >= 0; --i) {
    f = f * m + kSeries.f[i];
    fp = fp * m + kSeries.fp[i];
  }
  const double k = std::sqrt(m);
  return {s, 0.5 * kPi * k * m * f, -0.125 * kPi * k * m * m * fp};
}

void require_positive(double s, const char* who) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    std::ostringstream msg;
    msg << who << ": similarity variable must be positive and finite, got " << s;
    throw DomainError(msg.str());
  }
}

}  // namespace

EllipticPair elliptic_ke(double m) {
  if (!(m >= 0.0 && m < 1.0)) {
    std::ostringstream msg;
    msg << "elliptic_ke: parameter m must lie in [0,1), got " << m;
    throw DomainError(msg.str());
  }
  const Agm r = agm(m, 1.0 - m);
  return {m, r.bigK, r.bigE, r.iterations};
}

EllipticPair elliptic_ke_complement(double mc) {
  if (!(mc > 0.0 && mc <= 1.0)) {
    std::ostringstream msg;
    msg << "elliptic_ke_complement: complementary parameter must lie in (0,1], got " << mc;
    throw DomainError(msg.str());
  }
  const double m = 1.0 - mc;
  const Agm r = agm(m, mc);
  return {m, r.bigK, r.bigE, r.iterations};
}

namespace detail {

KernelEval kernel_eval_unchecked(double s) noexcept {
  const double sp4 = s + 4.0;
  const double inv_prod = 1.0 / (s * sp4);
  const double inv = s * inv_prod;  // 1/(s+4)
  const double m = 4.0 * inv;
  if (m <= kSeriesMaxParameter) return series_eval(s, m);
  // mc from s directly: 1 - m cancels badly as s -> 0.
  const double mc = s * inv;
  const double inv_mc = sp4 * sp4 * inv_prod;
  const Agm e = agm(m, mc);
  const double q = std::sqrt(sp4);
  const double k = 2.0 * inv * q;
  const double f = 0.5 * q * ((2.0 - m) * e.bigK - 2.0 * e.bigE);
  const double fp = -0.125 * k * ((2.0 - m) * e.bigE * inv_mc - 2.0 * e.bigK);
  return {s, f, fp};
}

void kernel_eval_batch(const double* s, double* f, double* fp,
                       std::size_t n) noexcept {
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) {
    const double si = s[i];
    const double sp4 = si + 4.0;
    const double inv_prod = 1.0 / (si * sp4);
    const double inv = si * inv_prod;
    const double m = 4.0 * inv;
    const double mc = si * inv;
    const double inv_mc = sp4 * sp4 * inv_prod;

    double a = 1.0;
    double b = std::sqrt(mc);
    double weight = 0.5;
    double sum = weight * m;
#pragma GCC unroll 8
    for (int it = 0; it < kBatchAgmSteps; ++it) {
      const double c = 0.5 * (a - b);
      weight *= 2.0;
      sum += weight * c * c;
      b = std::sqrt(a * b);
      a -= c;
    }
    const double bigK = kPi / (2.0 * a);
    const double bigE = bigK * (1.0 - sum);
    const double q = std::sqrt(sp4);
    const double k = 2.0 * inv * q;
    const double f_agm = 0.5 * q * ((2.0 - m) * bigK - 2.0 * bigE);
    const double fp_agm = -0.125 * k * ((2.0 - m) * bigE * inv_mc - 2.0 * bigK);

    double sf = kSeries.f[kSeriesTerms - 1];
    double sfp = kSeries.fp[kSeriesTerms - 1];
#pragma GCC unroll 32
    for (int j = kSeriesTerms - 2; j >= 0; --j) {
      sf = sf * m + kSeries.f[j];
      sfp = sfp * m + kSeries.fp[j];
    }
    const double f_ser = 0.5 * kPi * k * m * sf;
    const double fp_ser = -0.125 * kPi * k * m * m * sfp;

    const double sel = m <= kSeriesMaxParameter ? 1.0 : 0.0;
    f[i] = f_agm + sel * (f_ser - f_agm);
    fp[i] = fp_agm + sel * (fp_ser - fp_agm);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] < kBatchMinS) {
      const KernelEval e = kernel_eval_unchecked(s[i]);
      f[i] = e.f;
      fp[i] = e.fp;
    }
  }
}

}  // namespace detail

KernelEval kernel_eval(double s) {
  require_positive(s, "kernel_eval");
  return detail::kernel_eval_unchecked(s);
}

double kernel_F(double s) {
  require_positive(s, "kernel_F");
  return detail::kernel_eval_unchecked(s).f;
}

double kernel_F_prime(double s) {
  require_positive(s, "kernel_F_prime");
  return detail::kernel_eval_unchecked(s).fp;
}

double desing_D(double r, double z, double rbar, double zbar, double delta) {
  if (!(r > 0.0) || !(rbar > 0.0)) {
    std::ostringstream msg;
    msg << "desing_D: radii must be positive, got r=" << r << " rbar=" << rbar;
    throw DomainError(msg.str());
  }
  if (!(delta >= 0.0)) throw DomainError("desing_D: delta must be non-negative");
  const double dr = r - rbar;
  const double dz = z - zbar;
  return (dr * dr + dz * dz + delta * delta) / (r * rbar);
}

}  // namespace axisym
