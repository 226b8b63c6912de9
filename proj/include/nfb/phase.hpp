#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nfb {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Parameter of the disk automorphism z -> (z - a) / (1 - conj(a) z).
// Valid parameters lie strictly inside the unit disk; |a| >= 1 - 1e-12 is
// rejected so downstream weight/phase formulas stay well conditioned.
class MoebiusParameter {
 public:
  MoebiusParameter() = default;

  MoebiusParameter(double re, double im) : re_(re), im_(im) {
    const double r = std::hypot(re, im);
    if (r >= 1.0 - 1e-12) {
      throw std::invalid_argument(
          "MoebiusParameter: |a| = " + std::to_string(r) +
          " must be < 1 - 1e-12");
    }
    r_ = r;
    arg_ = (r == 0.0) ? 0.0 : std::atan2(im, re);
    if (arg_ < 0.0) arg_ += two_pi;
  }

  explicit MoebiusParameter(std::complex<double> a)
      : MoebiusParameter(a.real(), a.imag()) {}

  double re() const { return re_; }
  double im() const { return im_; }
  std::complex<double> value() const { return {re_, im_}; }
  // |a| and the angle t_a in [0, 2*pi)
  double modulus() const { return r_; }
  double argument() const { return arg_; }
  bool is_zero() const { return r_ == 0.0; }

  MoebiusParameter negated() const { return MoebiusParameter(-re_, -im_); }

 private:
  double re_ = 0.0;
  double im_ = 0.0;
  double r_ = 0.0;
  double arg_ = 0.0;
};

inline std::complex<double> moebius(const MoebiusParameter& a,
                                    std::complex<double> z) {
  return (z - a.value()) / (1.0 - std::conj(a.value()) * z);
}

// Warped angular variable: the continuous branch of arg(moebius(a, e^{it}))
// that agrees with t at a = 0.  Strictly increasing, increases by 2*pi per
// period, derivative equal to poisson_weight.  Branch-free closed form: the
// arctan argument has denominator >= 1 - |a| > 0.
inline double phase(const MoebiusParameter& a, double t) {
  if (a.is_zero()) return t;
  const double r = a.modulus();
  const double u = t - a.argument();
  return t + 2.0 * std::atan(r * std::sin(u) / (1.0 - r * std::cos(u)));
}

// Derivative of the phase; also the change-of-variable weight of the warped
// inner product.  Ranges over [(1-|a|)/(1+|a|), (1+|a|)/(1-|a|)].
inline double poisson_weight(const MoebiusParameter& a, double t) {
  if (a.is_zero()) return 1.0;
  const double r = a.modulus();
  const double u = t - a.argument();
  return (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(u) + r * r);
}

// Inverse of phase(a, .).  The inverse automorphism has parameter -a, so the
// candidate is phase(-a, s); a single 2*pi correction pins the branch with
// phase(a, result) == s.  No iteration involved.
inline double phase_inverse(const MoebiusParameter& a, double s) {
  if (a.is_zero()) return s;
  double t = phase(a.negated(), s);
  const double residual = phase(a, t) - s;
  const double k = std::round(residual / two_pi);
  if (k != 0.0) t -= two_pi * k;
  return t;
}

}  // namespace nfb
