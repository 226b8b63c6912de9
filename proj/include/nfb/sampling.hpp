#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nfb/phase.hpp"

namespace nfb {

using Complex = std::complex<double>;
using Evaluator = std::function<Complex(double)>;

// Values of a 2*pi-periodic function on the uniform grid x_j = 2*pi*j/M.
// An optional evaluator allows exact resampling at arbitrary points (corpus
// entries and table-backed functions provide one).
class SampledFunction {
 public:
  explicit SampledFunction(std::vector<Complex> values, Evaluator f = {})
      : values_(std::move(values)), eval_(std::move(f)) {
    if (values_.size() < 4) {
      throw std::invalid_argument("SampledFunction: need at least 4 samples");
    }
  }

  static SampledFunction from_evaluator(const Evaluator& f, std::size_t m) {
    if (m < 4) throw std::invalid_argument("SampledFunction: grid too small");
    std::vector<Complex> v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = f(two_pi * double(j) / double(m));
    return SampledFunction(std::move(v), f);
  }

  std::size_t size() const { return values_.size(); }
  std::span<const Complex> values() const { return values_; }
  const Complex& operator[](std::size_t j) const { return values_[j]; }
  double grid_point(std::size_t j) const {
    return two_pi * double(j) / double(values_.size());
  }
  bool has_evaluator() const { return bool(eval_); }
  Complex eval(double x) const {
    if (!eval_) {
      throw std::logic_error("SampledFunction: no evaluator attached");
    }
    return eval_(x);
  }

 private:
  std::vector<Complex> values_;
  Evaluator eval_;
};

inline double uniform_norm(const SampledFunction& f) {
  double m = 0.0;
  for (const Complex& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

// Weighted discrete inner product <f, g> = (1/M) sum_j f_j conj(g_j) p_a(x_j),
// the periodic-trapezoid form of (1/2pi) integral f conj(g) p_a dx.  The
// warped exponentials e^{ik phase(a, x)} are orthonormal for it.
inline Complex inner_product(const MoebiusParameter& a,
                             const SampledFunction& f,
                             const SampledFunction& g) {
  if (f.size() != g.size()) {
    throw std::invalid_argument("inner_product: grid size mismatch");
  }
  const std::size_t m = f.size();
  Complex acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    acc += f[j] * std::conj(g[j]) * poisson_weight(a, f.grid_point(j));
  }
  return acc / double(m);
}

// Coefficients c_k, |k| <= degree, of the expansion in the warped basis.
class CoefficientVector {
 public:
  CoefficientVector(const MoebiusParameter& a, std::vector<Complex> coeffs)
      : a_(a), c_(std::move(coeffs)) {
    if (c_.empty() || c_.size() % 2 == 0) {
      throw std::invalid_argument(
          "CoefficientVector: expected 2*degree+1 coefficients");
    }
  }

  long degree() const { return long(c_.size() / 2); }
  const MoebiusParameter& parameter() const { return a_; }
  Complex at(long k) const {
    if (k < -degree() || k > degree()) {
      throw std::invalid_argument("CoefficientVector: index exceeds degree");
    }
    return c_[std::size_t(k + degree())];
  }
  std::span<const Complex> raw() const { return c_; }  // index k + degree

 private:
  MoebiusParameter a_;
  std::vector<Complex> c_;
};

// c_k = (1/2pi) integral f(x) e^{-ik phase(a,x)} p_a(x) dx, computed in the
// warped variable: sample F(s_j) = f(phase_inverse(a, s_j)) on the uniform
// s-grid and take the plain DFT bins |k| <= degree.  The twiddle e^{-ik s_j}
// is an exact table lookup (k*j mod M), so the result equals the defining sum
// to rounding.  Requires grid >= 4*degree + 4 so the kept band is oversampled.
inline CoefficientVector coefficients(const MoebiusParameter& a,
                                      const Evaluator& f, long degree,
                                      std::size_t grid) {
  if (degree < 0) throw std::invalid_argument("coefficients: negative degree");
  if (grid < std::size_t(4 * degree + 4)) {
    throw std::invalid_argument("coefficients: grid must be >= 4*degree + 4");
  }
  const std::size_t m = grid;
  std::vector<Complex> samples(m);
  for (std::size_t j = 0; j < m; ++j) {
    samples[j] = f(phase_inverse(a, two_pi * double(j) / double(m)));
  }
  std::vector<Complex> twiddle(m);
  for (std::size_t j = 0; j < m; ++j) {
    twiddle[j] = std::polar(1.0, -two_pi * double(j) / double(m));
  }
  std::vector<Complex> c(std::size_t(2 * degree + 1));
  for (long k = -degree; k <= degree; ++k) {
    const std::size_t step = std::size_t(((k % long(m)) + long(m)) % long(m));
    std::size_t idx = 0;
    Complex acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += samples[j] * twiddle[idx];
      idx += step;
      if (idx >= m) idx -= m;
    }
    c[std::size_t(k + degree)] = acc / double(m);
  }
  return CoefficientVector(a, std::move(c));
}

// sum_{|k| <= degree} c_k e^{ik phase(a, x)} via two Horner chains.
inline Complex evaluate_series(const CoefficientVector& c, double x) {
  const long n = c.degree();
  const Complex z = std::polar(1.0, phase(c.parameter(), x));
  const Complex zc = std::conj(z);
  Complex pos = c.at(n);
  for (long k = n - 1; k >= 0; --k) pos = pos * z + c.at(k);
  Complex neg = 0.0;
  for (long k = n; k >= 1; --k) neg = (neg + c.at(-k)) * zc;
  return pos + neg;
}

// Exact trigonometric interpolation through M uniform samples.  For even M
// the shared Nyquist bin is split between +-M/2, which keeps real data real.
// Used to turn user-supplied tables into evaluators.
inline Evaluator make_trig_evaluator(const SampledFunction& f) {
  const std::size_t m = f.size();
  const long half = long(m) / 2;
  std::vector<Complex> bins(m);
  std::vector<Complex> twiddle(m);
  for (std::size_t j = 0; j < m; ++j) {
    twiddle[j] = std::polar(1.0, -two_pi * double(j) / double(m));
  }
  for (std::size_t k = 0; k < m; ++k) {
    Complex acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += f[j] * twiddle[idx];
      idx += k;
      if (idx >= m) idx -= m;
    }
    bins[k] = acc / double(m);
  }
  // reindex to signed frequencies -half..half
  const bool even = (m % 2 == 0);
  std::vector<Complex> c(std::size_t(2 * half + 1));
  for (long k = -half; k <= half; ++k) {
    std::size_t bin = std::size_t(((k % long(m)) + long(m)) % long(m));
    Complex v = bins[bin];
    if (even && (k == half || k == -half)) v *= 0.5;
    c[std::size_t(k + half)] = v;
  }
  return [c, half](double x) {
    const Complex z = std::polar(1.0, x);
    const Complex zc = std::conj(z);
    Complex pos = c[std::size_t(2 * half)];
    for (long k = half - 1; k >= 0; --k) pos = pos * z + c[std::size_t(k + half)];
    Complex neg = 0.0;
    for (long k = half; k >= 1; --k) neg = (neg + c[std::size_t(half - k)]) * zc;
    return pos + neg;
  };
}

}  // namespace nfb
