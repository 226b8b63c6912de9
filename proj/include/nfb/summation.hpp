#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfb/sampling.hpp"

namespace nfb {

// Window lengths lambda_n used by the delayed means.  Admissible sequences
// satisfy lambda_1 = 1, 1 <= lambda_n <= n and 0 <= lambda_{n+1}-lambda_n <= 1.
class VPSchedule {
 public:
  enum class Rule { One, Half, Full, Custom };

  static VPSchedule one(std::size_t n_max) {
    return VPSchedule(Rule::One, std::vector<std::size_t>(n_max, 1), "one");
  }
  static VPSchedule half(std::size_t n_max) {
    std::vector<std::size_t> v(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) v[n - 1] = (n + 1) / 2;
    return VPSchedule(Rule::Half, std::move(v), "half");
  }
  static VPSchedule full(std::size_t n_max) {
    std::vector<std::size_t> v(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) v[n - 1] = n;
    return VPSchedule(Rule::Full, std::move(v), "full");
  }
  static VPSchedule custom(std::vector<std::size_t> values,
                           std::string name = "custom") {
    return VPSchedule(Rule::Custom, std::move(values), std::move(name));
  }

  std::size_t lambda(std::size_t n) const {
    if (n < 1 || n > values_.size()) {
      throw std::invalid_argument("VPSchedule: order out of range");
    }
    return values_[n - 1];
  }
  std::size_t max_order() const { return values_.size(); }
  Rule rule() const { return rule_; }
  const std::string& name() const { return name_; }

 private:
  VPSchedule(Rule rule, std::vector<std::size_t> values, std::string name)
      : rule_(rule), values_(std::move(values)), name_(std::move(name)) {
    if (values_.empty()) {
      throw std::invalid_argument("VPSchedule: empty sequence");
    }
    if (values_[0] != 1) {
      throw std::invalid_argument("VPSchedule: lambda_1 must be 1");
    }
    for (std::size_t n = 1; n <= values_.size(); ++n) {
      const std::size_t l = values_[n - 1];
      if (l < 1 || l > n) {
        throw std::invalid_argument(
            "VPSchedule: need 1 <= lambda_n <= n at n = " + std::to_string(n));
      }
      if (n > 1) {
        const std::size_t prev = values_[n - 2];
        if (l < prev || l > prev + 1) {
          throw std::invalid_argument(
              "VPSchedule: lambda may grow by at most 1 per step at n = " +
              std::to_string(n));
        }
      }
    }
  }

  Rule rule_;
  std::vector<std::size_t> values_;
  std::string name_;
};

// Frequency weights of the delayed mean of order n: averaging the partial
// sums S_{n-lambda} .. S_{n-1} weights frequency k by
//   1                      for |k| <= n - lambda,
//   (n - |k|) / lambda     for n - lambda < |k| <= n - 1.
struct MultiplierWeights {
  std::size_t order = 0;   // n
  std::size_t lambda = 0;  // lambda_n
  std::vector<double> w;   // w[j] is the weight of |k| = j, j = 0..n-1

  double at(long k) const {
    const std::size_t j = std::size_t(k < 0 ? -k : k);
    return j < w.size() ? w[j] : 0.0;
  }
};

inline MultiplierWeights vp_weights(std::size_t n, const VPSchedule& schedule) {
  const std::size_t lambda = schedule.lambda(n);
  MultiplierWeights mw;
  mw.order = n;
  mw.lambda = lambda;
  mw.w.resize(n);
  const std::size_t flat = n - lambda;
  for (std::size_t j = 0; j < n; ++j) {
    mw.w[j] = (j <= flat) ? 1.0 : double(n - j) / double(lambda);
  }
  return mw;
}

inline Complex partial_sum(const CoefficientVector& c, std::size_t n,
                           double x) {
  if (long(n) > c.degree()) {
    throw std::invalid_argument("partial_sum: order exceeds coefficient degree");
  }
  const Complex z = std::polar(1.0, phase(c.parameter(), x));
  const Complex zc = std::conj(z);
  Complex pos = c.at(long(n));
  for (long k = long(n) - 1; k >= 0; --k) pos = pos * z + c.at(k);
  Complex neg = 0.0;
  for (long k = long(n); k >= 1; --k) neg = (neg + c.at(-k)) * zc;
  return pos + neg;
}

inline Complex vp_mean(const CoefficientVector& c, std::size_t n,
                       const VPSchedule& schedule, double x) {
  if (long(n) - 1 > c.degree()) {
    throw std::invalid_argument("vp_mean: order exceeds coefficient degree");
  }
  const MultiplierWeights mw = vp_weights(n, schedule);
  const Complex z = std::polar(1.0, phase(c.parameter(), x));
  const Complex zc = std::conj(z);
  const long top = long(n) - 1;
  Complex pos = mw.w[std::size_t(top)] * c.at(top);
  for (long k = top - 1; k >= 0; --k) {
    pos = pos * z + mw.w[std::size_t(k)] * c.at(k);
  }
  Complex neg = 0.0;
  for (long k = top; k >= 1; --k) {
    neg = (neg + mw.w[std::size_t(k)] * c.at(-k)) * zc;
  }
  return pos + neg;
}

// Closed form of the delayed-mean kernel numerator
//   K(t) = sin(lambda t) sin((2n - lambda) t) / sin^2 t,
// extended by its limit lambda*(2n - lambda) across the removable
// singularities at t = 0 mod pi.  The symbol sum_k w_k e^{ikt} of the
// multiplier weights equals K(t/2)/lambda.
inline double vp_kernel(std::size_t n, std::size_t lambda_n, double t) {
  if (lambda_n < 1 || lambda_n > n) {
    throw std::invalid_argument("vp_kernel: need 1 <= lambda_n <= n");
  }
  const double p = double(lambda_n);
  const double q = double(2 * n - lambda_n);
  // K(k*pi + e) = sin(p e) sin(q e) / sin^2 e for every integer k
  const double e = std::remainder(t, pi);
  const double s = std::sin(e);
  if (s == 0.0) return p * q;
  return std::sin(p * e) * std::sin(q * e) / (s * s);
}

// (1/2pi) integral of |sum_k w_k e^{ikt}| dt: the sup-norm operator norm of
// the delayed mean, computed by periodic trapezoid on 64n points using the
// closed-form symbol.  Independent of the warp parameter.
inline double lebesgue_constant(std::size_t n, std::size_t lambda_n) {
  if (lambda_n < 1 || lambda_n > n) {
    throw std::invalid_argument("lebesgue_constant: need 1 <= lambda_n <= n");
  }
  const std::size_t m = 64 * n;
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double t = two_pi * double(j) / double(m);
    acc += std::abs(vp_kernel(n, lambda_n, 0.5 * t));
  }
  return acc / (double(m) * double(lambda_n));
}

// Precomputed warped exponentials over an evaluation grid; evaluates partial
// sums and delayed means for many orders without recomputing the phase.
class PhaseGrid {
 public:
  PhaseGrid(const MoebiusParameter& a, std::span<const double> x) {
    z_.reserve(x.size());
    for (double t : x) z_.push_back(std::polar(1.0, phase(a, t)));
  }

  static std::vector<double> uniform_points(std::size_t m) {
    std::vector<double> x(m);
    for (std::size_t j = 0; j < m; ++j) x[j] = two_pi * double(j) / double(m);
    return x;
  }

  std::size_t size() const { return z_.size(); }

  // sum_{|k| <= band} w[|k|] c_k z^k at every grid point
  std::vector<Complex> weighted_values(const CoefficientVector& c,
                                       std::span<const double> w) const {
    const long band = long(w.size()) - 1;
    if (band > c.degree()) {
      throw std::invalid_argument("PhaseGrid: band exceeds coefficient degree");
    }
    std::vector<Complex> out(z_.size());
    for (std::size_t j = 0; j < z_.size(); ++j) {
      const Complex z = z_[j];
      const Complex zc = std::conj(z);
      Complex pos = w[std::size_t(band)] * c.at(band);
      for (long k = band - 1; k >= 0; --k) {
        pos = pos * z + w[std::size_t(k)] * c.at(k);
      }
      Complex neg = 0.0;
      for (long k = band; k >= 1; --k) {
        neg = (neg + w[std::size_t(k)] * c.at(-k)) * zc;
      }
      out[j] = pos + neg;
    }
    return out;
  }

  std::vector<Complex> partial_sum_values(const CoefficientVector& c,
                                          std::size_t n) const {
    std::vector<double> w(n + 1, 1.0);
    return weighted_values(c, w);
  }

  std::vector<Complex> vp_values(const CoefficientVector& c, std::size_t n,
                                 const VPSchedule& schedule) const {
    const MultiplierWeights mw = vp_weights(n, schedule);
    return weighted_values(c, mw.w);
  }

 private:
  std::vector<Complex> z_;
};

}  // namespace nfb
