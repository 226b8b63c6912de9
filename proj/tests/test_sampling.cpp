#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nfb/sampling.hpp"

using namespace nfb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Evaluator expcos = [](double x) { return Complex(std::exp(std::cos(x)), 0.0); };

}  // namespace

TEST_CASE("sampled function basics") {
  REQUIRE_THROWS_AS(SampledFunction({Complex(1.0), Complex(2.0)}),
                    std::invalid_argument);
  const SampledFunction f = SampledFunction::from_evaluator(expcos, 8);
  REQUIRE(f.size() == 8);
  REQUIRE_THAT(f.grid_point(2), WithinRel(pi / 2.0, 1e-15));
  REQUIRE_THAT(f[0].real(), WithinRel(std::exp(1.0), 1e-15));
  REQUIRE(f.has_evaluator());
  REQUIRE_THAT(f.eval(0.3).real(), WithinRel(std::exp(std::cos(0.3)), 1e-15));
  const SampledFunction bare(std::vector<Complex>(4, Complex(1.0)));
  REQUIRE_FALSE(bare.has_evaluator());
  REQUIRE_THROWS_AS(bare.eval(0.0), std::logic_error);
}

TEST_CASE("uniform norm picks the largest magnitude") {
  const SampledFunction f(
      {Complex(0.5, 0.0), Complex(0.0, -2.5), Complex(1.0, 1.0), Complex(0.0)});
  REQUIRE_THAT(uniform_norm(f), WithinRel(2.5, 1e-15));
}

TEST_CASE("inner product reduces to the plain mean at a = 0") {
  const MoebiusParameter a0(0.0, 0.0);
  const SampledFunction f = SampledFunction::from_evaluator(
      [](double x) { return Complex(std::cos(x), std::sin(2 * x)); }, 64);
  const SampledFunction g = SampledFunction::from_evaluator(
      [](double x) { return Complex(std::sin(x), 0.5); }, 64);
  Complex expect = 0.0;
  for (std::size_t j = 0; j < 64; ++j) expect += f[j] * std::conj(g[j]);
  expect /= 64.0;
  REQUIRE_THAT(std::abs(inner_product(a0, f, g) - expect), WithinAbs(0.0, 1e-15));
  const SampledFunction h = SampledFunction::from_evaluator(expcos, 32);
  REQUIRE_THROWS_AS(inner_product(a0, f, h), std::invalid_argument);
}

TEST_CASE("warped exponentials are orthonormal in the weighted product") {
  const MoebiusParameter a(0.5, -0.2);
  const std::size_t m = 512;
  std::vector<SampledFunction> basis;
  for (long k = -3; k <= 3; ++k) {
    basis.push_back(SampledFunction::from_evaluator(
        [&a, k](double x) { return std::polar(1.0, double(k) * phase(a, x)); },
        m));
  }
  for (long j = -3; j <= 3; ++j) {
    for (long k = -3; k <= 3; ++k) {
      const Complex g =
          inner_product(a, basis[std::size_t(j + 3)], basis[std::size_t(k + 3)]);
      const double target = (j == k) ? 1.0 : 0.0;
      REQUIRE_THAT(std::abs(g - target), WithinAbs(0.0, 1e-12));
    }
  }
}

TEST_CASE("coefficient vector shape and access") {
  const MoebiusParameter a(0.1, 0.0);
  REQUIRE_THROWS_AS(CoefficientVector(a, std::vector<Complex>(4)),
                    std::invalid_argument);
  CoefficientVector c(a, {Complex(1.0), Complex(2.0), Complex(3.0)});
  REQUIRE(c.degree() == 1);
  REQUIRE(c.at(-1) == Complex(1.0));
  REQUIRE(c.at(0) == Complex(2.0));
  REQUIRE(c.at(1) == Complex(3.0));
  REQUIRE_THROWS_AS(c.at(2), std::invalid_argument);
}

TEST_CASE("coefficients require an oversampled grid") {
  const MoebiusParameter a(0.2, 0.2);
  REQUIRE_THROWS_AS(coefficients(a, expcos, 16, 67), std::invalid_argument);
  REQUIRE_NOTHROW(coefficients(a, expcos, 16, 68));
}

TEST_CASE("classical coefficients recover a known band-limited function") {
  const MoebiusParameter a0(0.0, 0.0);
  Evaluator f = [](double x) {
    return Complex(3.0, 0.0) + 2.0 * std::polar(1.0, x) -
           Complex(0.0, 1.0) * std::polar(1.0, -2.0 * x);
  };
  const CoefficientVector c = coefficients(a0, f, 4, 64);
  REQUIRE_THAT(std::abs(c.at(0) - Complex(3.0, 0.0)), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(std::abs(c.at(1) - Complex(2.0, 0.0)), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(std::abs(c.at(-2) - Complex(0.0, -1.0)), WithinAbs(0.0, 1e-14));
  for (long k : {-4L, -3L, -1L, 2L, 3L, 4L}) {
    REQUIRE_THAT(std::abs(c.at(k)), WithinAbs(0.0, 1e-14));
  }
}

TEST_CASE("classical coefficients of exp(cos x) are Bessel values") {
  const CoefficientVector c =
      coefficients(MoebiusParameter(0.0, 0.0), expcos, 3, 256);
  // I_3(1), 40-digit reference
  REQUIRE_THAT(c.at(3).real(), WithinRel(0.022168424924331902476, 1e-13));
  REQUIRE_THAT(c.at(3).imag(), WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(std::abs(c.at(-3) - c.at(3)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("warped analysis matches the defining discrete sum") {
  // reference value computed with 60-digit arithmetic and an independent
  // bisection inverse of the phase: cusp |sin((x-1/2)/2)|^{1/2}, a = 0.3,
  // M = 64.  The cusp sits off the node set; a node exactly on the cusp
  // would amplify one ulp of node placement to sqrt(ulp) in the summand.
  const MoebiusParameter a(0.3, 0.0);
  Evaluator cusp = [](double x) {
    return Complex(std::sqrt(std::abs(std::sin(0.5 * (x - 0.5)))), 0.0);
  };
  const CoefficientVector c = coefficients(a, cusp, 2, 64);
  REQUIRE_THAT(c.at(2).real(), WithinRel(0.02365222967682498962, 1e-12));
  REQUIRE_THAT(c.at(2).imag(), WithinRel(0.03576739120772923764, 1e-12));
}

TEST_CASE("warped analysis converges to the weighted integral") {
  // reference: (1/2pi) integral exp(cos x) e^{-3i phase(x)} weight(x) dx at
  // a = 0.4 + 0.1i, 30-digit quadrature
  const MoebiusParameter a(0.4, 0.1);
  const CoefficientVector c = coefficients(a, expcos, 3, 4096);
  REQUIRE_THAT(c.at(3).real(), WithinRel(0.010788514048020686196, 1e-12));
  REQUIRE_THAT(c.at(3).imag(), WithinRel(-0.022301376380038475435, 1e-12));
}

TEST_CASE("analysis and synthesis round-trip warped polynomials") {
  std::mt19937 rng(411);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const MoebiusParameter a(-0.45, 0.35);
  std::vector<Complex> raw(2 * 7 + 1);
  for (Complex& v : raw) v = Complex(u(rng), u(rng));
  const CoefficientVector truth(a, raw);
  Evaluator f = [&truth](double x) { return evaluate_series(truth, x); };
  for (std::size_t grid : {std::size_t(32), std::size_t(33), std::size_t(256)}) {
    const CoefficientVector got = coefficients(a, f, 7, grid);
    for (long k = -7; k <= 7; ++k) {
      REQUIRE_THAT(std::abs(got.at(k) - truth.at(k)), WithinAbs(0.0, 1e-12));
    }
  }
}

TEST_CASE("series evaluation matches the direct sum") {
  std::mt19937 rng(97);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const MoebiusParameter a(0.6, 0.1);
  std::vector<Complex> raw(2 * 5 + 1);
  for (Complex& v : raw) v = Complex(u(rng), u(rng));
  const CoefficientVector c(a, raw);
  for (double x : {0.0, 0.7, 3.9, 6.0}) {
    Complex direct = 0.0;
    for (long k = -5; k <= 5; ++k) {
      direct += c.at(k) * std::polar(1.0, double(k) * phase(a, x));
    }
    REQUIRE_THAT(std::abs(evaluate_series(c, x) - direct), WithinAbs(0.0, 1e-14));
  }
}

TEST_CASE("trig interpolation reproduces samples and smooth functions") {
  const SampledFunction f = SampledFunction::from_evaluator(expcos, 64);
  const Evaluator interp = make_trig_evaluator(f);
  for (std::size_t j = 0; j < 64; ++j) {
    REQUIRE_THAT(std::abs(interp(f.grid_point(j)) - f[j]), WithinAbs(0.0, 1e-12));
  }
  for (double x : {0.05, 1.13, 4.71}) {
    REQUIRE_THAT(std::abs(interp(x) - expcos(x)), WithinAbs(0.0, 1e-10));
  }
}

TEST_CASE("trig interpolation splits the shared top bin on even grids") {
  // cos(4x) on 8 points lands exactly on the shared +-4 bin
  const SampledFunction f = SampledFunction::from_evaluator(
      [](double x) { return Complex(std::cos(4.0 * x), 0.0); }, 8);
  const Evaluator interp = make_trig_evaluator(f);
  for (double x : {0.3, 1.0, 2.2}) {
    REQUIRE_THAT(interp(x).real(), WithinAbs(std::cos(4.0 * x), 1e-13));
    REQUIRE_THAT(interp(x).imag(), WithinAbs(0.0, 1e-13));
  }
}
