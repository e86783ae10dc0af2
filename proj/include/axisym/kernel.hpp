#pragma once

// Stream-function kernel of a vortex ring in the axisymmetric no-swirl
// Biot-Savart law:
//
//   F(s) = \int_0^\pi cos(t) / sqrt(2(1 - cos t) + s) dt,   s > 0,
//
// evaluated through complete elliptic integrals of parameter m = 4/(s+4).

#include <cstddef>
#include <stdexcept>
#include <string>

namespace axisym {

class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Complete elliptic integrals K(m), E(m) for parameter m = k^2.
struct EllipticPair {
  double m = 0.0;
  double bigK = 0.0;
  double bigE = 0.0;
  int iterations = 0;  // AGM steps taken
};

/// Value and derivative of F at one similarity variable.
struct KernelEval {
  double s = 0.0;
  double f = 0.0;
  double fp = 0.0;
};

/// K(m) and E(m) by the arithmetic-geometric mean. Throws DomainError
/// unless 0 <= m < 1.
EllipticPair elliptic_ke(double m);

/// Same integrals, addressed by the complementary parameter mc = 1 - m.
/// Use this when mc is known more accurately than m (m close to 1).
EllipticPair elliptic_ke_complement(double mc);

double kernel_F(double s);
double kernel_F_prime(double s);

/// F and F' sharing one elliptic evaluation.
KernelEval kernel_eval(double s);

/// Desingularized similarity variable ((r-rb)^2 + (z-zb)^2 + delta^2)/(r rb).
double desing_D(double r, double z, double rbar, double zbar, double delta);

namespace detail {

// Unchecked fast path used by the pairwise sums. `s` must be > 0.
KernelEval kernel_eval_unchecked(double s) noexcept;

// Branch-free evaluation over arrays, same accuracy as the scalar path.
void kernel_eval_batch(const double* s, double* f, double* fp,
                       std::size_t n) noexcept;

}  // namespace detail

}  // namespace axisym
