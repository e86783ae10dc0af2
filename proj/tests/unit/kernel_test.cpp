#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "axisym/kernel.hpp"
#include "axisym/verify.hpp"

using namespace axisym;

namespace {

// F(s) and F'(s) from 30-digit adaptive quadrature of the defining theta
// integral, frozen.
struct Frozen {
  double s, f, fp;
};
const Frozen kFrozen[] = {
    {1e-6, 6.9871984432612603428, -499998.47115082182496},
    {1e-3, 3.5342941126089187741, -499.11887713798547675},
    {0.1, 1.2847427829660807516, -4.5560743867446808062},
    {1.0, 0.39317514837200473104, -0.2858286194840832238},
    {4.0, 0.11288854241046769779, -0.03038634843483302537},
    {10.0, 0.0382886702851151426, -0.0048711732127665617981},
    {1e3, 0.000049524386672701172548, -7.4138488009461533477e-8},
    {1e6, 1.570791614420642402e-9, -2.3561827092714355051e-15},
};

// K(m), E(m) to 20 digits, frozen.
struct FrozenKE {
  double m, k, e;
};
const FrozenKE kFrozenKE[] = {
    {0.0, 1.5707963267948966192, 1.5707963267948966192},
    {0.1, 1.6124413487202193982, 1.5307576368977632025},
    {0.5, 1.8540746773013719184, 1.3506438810476755025},
    {0.9, 2.5780921133481731882, 1.1047747327040733261},
};

// Parameter 1 - 1e-6, addressed through the exact complement.
constexpr double kNearOneK = 8.2940514636154400079;
constexpr double kNearOneE = 1.0000038970261720612;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("kernel matches frozen high-precision values") {
  for (const auto& v : kFrozen) {
    CAPTURE(v.s);
    const KernelEval e = kernel_eval(v.s);
    CHECK(rel(e.f, v.f) < 1e-12);
    CHECK(rel(e.fp, v.fp) < 1e-12);
    CHECK(kernel_F(v.s) == e.f);
    CHECK(kernel_F_prime(v.s) == e.fp);
  }
}

TEST_CASE("elliptic integrals match frozen values") {
  for (const auto& v : kFrozenKE) {
    CAPTURE(v.m);
    const EllipticPair p = elliptic_ke(v.m);
    CHECK(rel(p.bigK, v.k) < 1e-13);
    CHECK(rel(p.bigE, v.e) < 1e-13);
    const EllipticPair c = elliptic_ke_complement(1.0 - v.m);
    CHECK(rel(c.bigK, v.k) < 1e-13);
  }
  const EllipticPair near = elliptic_ke_complement(1e-6);
  CHECK(rel(near.bigK, kNearOneK) < 1e-13);
  CHECK(rel(near.bigE, kNearOneE) < 1e-13);
}

TEST_CASE("complement form keeps accuracy as m -> 1") {
  // K ~ log(4/sqrt(mc)) + O(mc log mc).
  const double mc = 1e-14;
  const EllipticPair p = elliptic_ke_complement(mc);
  CHECK(std::abs(p.bigK - std::log(4.0 / std::sqrt(mc))) < 1e-11);
  CHECK(std::abs(p.bigE - 1.0) < 1e-11);
}

TEST_CASE("quadrature oracle reproduces the frozen values") {
  for (const auto& v : kFrozen) {
    CAPTURE(v.s);
    CHECK(rel(quadrature_F(v.s), v.f) < 1e-10);
    CHECK(rel(quadrature_F_prime(v.s), v.fp) < 1e-10);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(kernel_F(0.0), DomainError);
  CHECK_THROWS_AS(kernel_F(-1.0), DomainError);
  CHECK_THROWS_AS(kernel_F_prime(std::nan("")), DomainError);
  CHECK_THROWS_AS(elliptic_ke(1.0), DomainError);
  CHECK_THROWS_AS(elliptic_ke(-0.1), DomainError);
  CHECK_THROWS_AS(desing_D(0.0, 1.0, 1.0, 1.0, 0.1), DomainError);
}

TEST_CASE("desingularized similarity variable") {
  CHECK(desing_D(1.0, 0.0, 1.0, 0.0, 0.0) == 0.0);
  CHECK(desing_D(2.0, 1.0, 1.0, 0.0, 0.5) == doctest::Approx((1.0 + 1.0 + 0.25) / 2.0));
}

TEST_CASE("batched evaluation agrees with the scalar path") {
  std::vector<double> s;
  for (int i = 0; i <= 400; ++i) s.push_back(std::pow(10.0, -14.0 + 22.0 * i / 400.0));
  s.push_back(3.999999);  // around the series/AGM switch at m = 0.1
  s.push_back(36.0);
  s.push_back(36.000001);
  std::vector<double> f(s.size()), fp(s.size());
  detail::kernel_eval_batch(s.data(), f.data(), fp.data(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CAPTURE(s[i]);
    const KernelEval e = kernel_eval(s[i]);
    CHECK(rel(f[i], e.f) < 1e-13);
    CHECK(rel(fp[i], e.fp) < 1e-13);
  }
}

TEST_CASE("Legendre relation across the parameter range") {
  for (int i = 1; i < 100; ++i) {
    const double m = i / 100.0;
    const EllipticPair a = elliptic_ke(m);
    const EllipticPair b = elliptic_ke_complement(m);
    CHECK(std::abs(a.bigE * b.bigK + b.bigE * a.bigK - a.bigK * b.bigK -
                   0.5 * std::numbers::pi) < 1e-13);
  }
}

TEST_CASE("kernel suite passes and the convention mutation is caught") {
  const CheckReport good = run_kernel_suite({});
  CHECK(good.pass());
  KernelSuiteOptions bad;
  bad.mutate_convention = true;
  CHECK_FALSE(run_kernel_suite(bad).pass());
}

TEST_CASE("F is positive and decreasing, F' negative and increasing") {
  double prev_f = INFINITY, prev_fp = -INFINITY;
  for (int i = 0; i <= 1000; ++i) {
    const double s = std::pow(10.0, -10.0 + 20.0 * i / 1000.0);
    const KernelEval e = kernel_eval(s);
    CHECK(e.f > 0.0);
    CHECK(e.fp < 0.0);
    CHECK(e.f < prev_f);
    CHECK(e.fp > prev_fp);
    prev_f = e.f;
    prev_fp = e.fp;
  }
}
