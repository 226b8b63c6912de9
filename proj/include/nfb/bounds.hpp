#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "nfb/holder.hpp"
#include "nfb/summation.hpp"

namespace nfb {

// The decay estimates split at the endpoint pair (alpha, beta) = (1, 0),
// where an extra (1 + log lambda_n) factor appears.
enum class RateBranch { Regular, LogAugmented };

inline RateBranch rate_branch(double alpha, double beta) {
  return (alpha == 1.0 && beta == 0.0) ? RateBranch::LogAugmented
                                       : RateBranch::Regular;
}

inline const char* branch_label(RateBranch b) {
  return b == RateBranch::LogAugmented ? "alpha=1-and-beta=0"
                                       : "alpha<1-or-beta>0";
}

// Bound on the sup-norm operator norm of the delayed mean:
// sup_norm * (3 + log((2n - lambda)/lambda)), natural log.
inline double lebesgue_constant_bound(std::size_t n, std::size_t lambda_n,
                                      double sup_norm = 1.0) {
  if (lambda_n < 1 || lambda_n > n) {
    throw std::invalid_argument("lebesgue_constant_bound: bad lambda");
  }
  return sup_norm *
         (3.0 + std::log(double(2 * n - lambda_n) / double(lambda_n)));
}

// Uniform error bound (12/(1-|a|)) omega_alpha(1/lambda_n), augmented by
// (1 + log lambda_n) on the endpoint branch.
inline double uniform_error_bound(const MoebiusParameter& a, std::size_t n,
                                  std::size_t lambda_n,
                                  const ModulusSpec& omega_alpha,
                                  RateBranch branch) {
  if (lambda_n < 1 || lambda_n > n) {
    throw std::invalid_argument("uniform_error_bound: bad lambda");
  }
  double b = 12.0 / (1.0 - a.modulus()) * omega_alpha(1.0 / double(lambda_n));
  if (branch == RateBranch::LogAugmented) {
    b *= 1.0 + std::log(double(lambda_n));
  }
  return b;
}

// Gauge-norm error bound
//   (12/(1-|a|)) * rho(1/n) * omega_alpha(1/lambda_n) * log(2n/lambda_n)
// with rho = omega_beta/omega_alpha in the primary orientation and the
// reciprocal when flip_ratio is set; endpoint branch gains (1+log lambda_n).
inline double holder_error_bound(const MoebiusParameter& a, std::size_t n,
                                 std::size_t lambda_n,
                                 const ModulusSpec& omega_alpha,
                                 const ModulusSpec& omega_beta,
                                 RateBranch branch, bool flip_ratio = false) {
  if (lambda_n < 1 || lambda_n > n) {
    throw std::invalid_argument("holder_error_bound: bad lambda");
  }
  const double inv_n = 1.0 / double(n);
  const double ratio = flip_ratio ? omega_alpha(inv_n) / omega_beta(inv_n)
                                  : omega_beta(inv_n) / omega_alpha(inv_n);
  double b = 12.0 / (1.0 - a.modulus()) * ratio *
             omega_alpha(1.0 / double(lambda_n)) *
             std::log(2.0 * double(n) / double(lambda_n));
  if (branch == RateBranch::LogAugmented) {
    b *= 1.0 + std::log(double(lambda_n));
  }
  return b;
}

// Transfer of a uniform error to a gauge-norm error for an operator with
// norm op_norm:
//   err * (1 + 2/phi(1/n)) + 2 * sup_{0 < delta <= 1/n} omega_f(delta)/phi(delta) * (1 + op_norm)
// with the sup taken over a dyadic subdivision of (0, 1/n].
inline double phi_norm_transfer_bound(double op_norm, double err_uniform,
                                      const ModulusSpec& omega_f,
                                      const ModulusSpec& phi, std::size_t n) {
  if (n < 1) throw std::invalid_argument("phi_norm_transfer_bound: n >= 1");
  const double inv_n = 1.0 / double(n);
  double sup = 0.0;
  double delta = inv_n;
  for (int j = 0; j <= 40; ++j, delta *= 0.5) {
    const double p = phi(delta);
    if (p > 0.0) sup = std::max(sup, omega_f(delta) / p);
  }
  return err_uniform * (1.0 + 2.0 / phi(inv_n)) + 2.0 * sup * (1.0 + op_norm);
}

// --- Discrete trigonometric minimax ----------------------------------------

struct BestApproxResult {
  double value = 0.0;  // max residual of the final approximant on the grid
  double lower = 0.0;  // levelled reference error: certified lower bracket
  double upper = 0.0;
  bool converged = false;
  int iterations = 0;
  std::size_t grid = 0;
};

namespace detail {

// Multi-point exchange over the sample grid.  The approximating family
// {1, cos kx, sin kx : k <= degree} alternates on 2*degree + 2 reference
// points; each pass solves the levelled interpolation system, then rebuilds
// the reference from the residual's alternating local maxima.
inline BestApproxResult trig_minimax(const std::vector<double>& samples,
                                     std::size_t degree) {
  const std::size_t mg = samples.size();
  BestApproxResult res;
  res.grid = mg;

  if (degree == 0) {
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    res.value = res.lower = res.upper = 0.5 * (*hi - *lo);
    res.converged = true;
    return res;
  }

  const std::size_t d = 2 * degree + 1;
  const std::size_t p = d + 1;
  if (mg < 2 * p) {
    throw std::invalid_argument("trig_minimax: grid too small for degree");
  }

  double scale = 0.0;
  for (double v : samples) scale = std::max(scale, std::abs(v));
  const double floor_tol = 1e-14 * (1.0 + scale);

  std::vector<Complex> z(mg);
  for (std::size_t i = 0; i < mg; ++i) {
    z[i] = std::polar(1.0, two_pi * double(i) / double(mg));
  }

  // staggered start: evenly spaced points are blind to frequencies that are
  // multiples of p, so odd positions shift by half a gap
  std::vector<std::size_t> ref(p);
  const std::size_t stagger = mg / (2 * p);
  for (std::size_t i = 0; i < p; ++i) {
    ref[i] = (i * mg) / p + (i % 2 == 1 ? stagger : 0);
  }

  std::vector<double> resid(mg);
  Eigen::MatrixXd A(p, p);
  Eigen::VectorXd rhs(p);

  for (int iter = 1; iter <= 100; ++iter) {
    res.iterations = iter;
    for (std::size_t i = 0; i < p; ++i) {
      const double x = two_pi * double(ref[i]) / double(mg);
      A(long(i), 0) = 1.0;
      for (std::size_t k = 1; k <= degree; ++k) {
        A(long(i), long(2 * k - 1)) = std::cos(double(k) * x);
        A(long(i), long(2 * k)) = std::sin(double(k) * x);
      }
      A(long(i), long(d)) = (i % 2 == 0) ? 1.0 : -1.0;
      rhs(long(i)) = samples[ref[i]];
    }
    const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(rhs);
    const double level = std::abs(coef(long(d)));

    // residual over the whole grid
    double maxerr = 0.0;
    for (std::size_t i = 0; i < mg; ++i) {
      Complex acc = Complex(coef(long(2 * degree - 1)), -coef(long(2 * degree)));
      for (std::size_t k = degree - 1; k >= 1; --k) {
        acc = acc * z[i] + Complex(coef(long(2 * k - 1)), -coef(long(2 * k)));
      }
      const double t = coef(0) + (acc * z[i]).real();
      resid[i] = samples[i] - t;
      maxerr = std::max(maxerr, std::abs(resid[i]));
    }
    res.lower = level;
    res.upper = maxerr;
    res.value = maxerr;
    if (maxerr - level <= 1e-10 * std::max(level, maxerr) + floor_tol) {
      res.converged = true;
      return res;
    }

    // circular local maxima of |residual|
    struct Cand {
      std::size_t idx;
      double r;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < mg; ++i) {
      const double cur = std::abs(resid[i]);
      const double prev = std::abs(resid[(i + mg - 1) % mg]);
      const double next = std::abs(resid[(i + 1) % mg]);
      if (cur >= prev && cur > next && cur > floor_tol) {
        cands.push_back({i, resid[i]});
      }
    }

    // merge adjacent (circularly) same-sign candidates, keeping the larger
    bool changed = true;
    while (changed && cands.size() > 1) {
      changed = false;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        const std::size_t nx = (i + 1) % cands.size();
        if (nx == i) break;
        if ((cands[i].r > 0) == (cands[nx].r > 0)) {
          cands.erase(cands.begin() +
                      long(std::abs(cands[i].r) >= std::abs(cands[nx].r) ? nx
                                                                         : i));
          changed = true;
          break;
        }
      }
    }

    if (cands.size() < p) {
      // Sign structure collapsed (symmetric data can make whole runs of the
      // residual one-signed).  Rebuild from local extrema of the signed
      // residual in both directions, zeros included.
      cands.clear();
      for (std::size_t i = 0; i < mg; ++i) {
        const double cur = resid[i];
        const double prev = resid[(i + mg - 1) % mg];
        const double next = resid[(i + 1) % mg];
        if ((cur >= prev && cur > next) || (cur <= prev && cur < next)) {
          cands.push_back({i, cur});
        }
      }
      if (cands.size() < p) {
        res.converged = false;  // flat residual; report the bracket
        return res;
      }
      if ((cands.size() - p) % 2 == 1) {
        std::size_t weakest = 0;
        for (std::size_t i = 1; i < cands.size(); ++i) {
          if (std::abs(cands[i].r) < std::abs(cands[weakest].r)) weakest = i;
        }
        cands.erase(cands.begin() + long(weakest));
      }
    }

    // trim to p points: drop the weakest candidate and its weaker neighbor,
    // which preserves circular alternation
    while (cands.size() > p) {
      std::size_t weakest = 0;
      for (std::size_t i = 1; i < cands.size(); ++i) {
        if (std::abs(cands[i].r) < std::abs(cands[weakest].r)) weakest = i;
      }
      const std::size_t prev = (weakest + cands.size() - 1) % cands.size();
      const std::size_t next = (weakest + 1) % cands.size();
      const std::size_t other =
          std::abs(cands[prev].r) <= std::abs(cands[next].r) ? prev : next;
      const std::size_t hi = std::max(weakest, other);
      const std::size_t lo = std::min(weakest, other);
      cands.erase(cands.begin() + long(hi));
      cands.erase(cands.begin() + long(lo));
    }

    for (std::size_t i = 0; i < p; ++i) ref[i] = cands[i].idx;
  }
  res.converged = false;
  return res;
}

}  // namespace detail

// Best uniform approximation by the warped polynomial space of the given
// degree, computed as the discrete minimax of f(phase_inverse(a, .)) on a
// uniform grid (>= 16*degree points).  The result certifies the discrete
// problem: lower <= discrete minimax <= upper, equal at convergence.
inline BestApproxResult best_approximation(
    const MoebiusParameter& a, const std::function<double(double)>& f,
    std::size_t degree, std::size_t grid) {
  if (grid < std::max<std::size_t>(16 * degree, 64)) {
    throw std::invalid_argument(
        "best_approximation: grid must be >= max(16*degree, 64)");
  }
  std::vector<double> samples(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    samples[i] = f(phase_inverse(a, two_pi * double(i) / double(grid)));
  }
  return detail::trig_minimax(samples, degree);
}

// --- Measured-versus-bound drivers ------------------------------------------

inline double loglog_slope(std::span<const double> xs,
                           std::span<const double> ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] > 0.0) || !(xs[i] > 0.0)) continue;
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = double(k);
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Drift of the running maximum over the final doubling of n: compares the
// running max up to n_last/2 against the overall max.
inline double running_max_drift(std::span<const std::size_t> ns,
                                std::span<const double> ratios) {
  if (ns.size() != ratios.size() || ns.size() < 2) {
    throw std::invalid_argument("running_max_drift: need matched series");
  }
  const std::size_t n_last = *std::max_element(ns.begin(), ns.end());
  double up_to_half = 0.0, overall = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    overall = std::max(overall, ratios[i]);
    if (2 * ns[i] <= n_last) up_to_half = std::max(up_to_half, ratios[i]);
  }
  if (up_to_half <= 0.0) return overall > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return (overall - up_to_half) / up_to_half;
}

struct NearBestRow {
  std::size_t n = 0;
  std::size_t lambda = 0;
  double err_uniform = 0.0;
  double best = 0.0;   // minimax error of the comparable degree
  double bound = 0.0;  // (3 + log((2n-lambda)/lambda)) * best
  double ratio = 0.0;
  bool degenerate = false;  // bound vanished; err checked against ~0 instead
};

struct NearBestReport {
  std::vector<NearBestRow> rows;
  double sup_ratio = 0.0;
  double drift = 0.0;  // running-max drift over the final doubling
  bool degenerate_ok = true;
};

// Measures ||f - V_n|| against the near-best yardstick
// (3 + log((2n-lambda)/lambda)) * E_{n-lambda} over the given orders.
inline NearBestReport verify_near_best(const MoebiusParameter& a,
                                       const std::function<double(double)>& f,
                                       const VPSchedule& schedule,
                                       std::span<const std::size_t> n_values,
                                       std::size_t grid) {
  if (n_values.empty()) {
    throw std::invalid_argument("verify_near_best: empty order list");
  }
  const std::size_t n_max = *std::max_element(n_values.begin(), n_values.end());
  if (grid < 4 * n_max + 4) {
    throw std::invalid_argument("verify_near_best: grid must be >= 4*max(n)+4");
  }
  Evaluator fe = [&f](double x) { return Complex(f(x), 0.0); };
  const CoefficientVector c = coefficients(a, fe, long(n_max) - 1, grid);
  const std::vector<double> x = PhaseGrid::uniform_points(grid);
  const PhaseGrid pg(a, x);
  std::vector<double> fx(grid);
  for (std::size_t j = 0; j < grid; ++j) fx[j] = f(x[j]);

  NearBestReport rep;
  std::vector<double> ratios;
  std::vector<std::size_t> ns;
  for (std::size_t n : n_values) {
    NearBestRow row;
    row.n = n;
    row.lambda = schedule.lambda(n);
    const std::vector<Complex> v = pg.vp_values(c, n, schedule);
    for (std::size_t j = 0; j < grid; ++j) {
      row.err_uniform = std::max(row.err_uniform, std::abs(fx[j] - v[j]));
    }
    const std::size_t deg = n - row.lambda;
    row.best =
        best_approximation(a, f, deg, std::max<std::size_t>(16 * deg, 64))
            .value;
    row.bound = lebesgue_constant_bound(n, row.lambda) * row.best;
    if (row.bound > 1e-14) {
      row.ratio = row.err_uniform / row.bound;
      ratios.push_back(row.ratio);
      ns.push_back(n);
      rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
    } else {
      row.degenerate = true;
      rep.degenerate_ok = rep.degenerate_ok && row.err_uniform <= 1e-10;
    }
    rep.rows.push_back(row);
  }
  rep.drift = ratios.size() >= 2 ? running_max_drift(ns, ratios) : 0.0;
  return rep;
}

struct ErrorReport {
  std::size_t n = 0;
  std::size_t lambda = 0;
  MoebiusParameter a;
  double err_uniform = 0.0;
  double err_holder = 0.0;
  double bound_uniform = 0.0;
  double bound_holder = 0.0;
  double ratio_uniform = 0.0;
  double ratio_holder = 0.0;
  RateBranch branch = RateBranch::Regular;
};

// Measures uniform and gauge-norm errors of the delayed means against the
// decay bounds, for every requested order.  Coefficients are computed once at
// the largest degree and shared.
inline std::vector<ErrorReport> verify_rates(
    const MoebiusParameter& a, const Evaluator& f,
    const ModulusSpec& omega_alpha, const ModulusSpec& omega_beta,
    const VPSchedule& schedule, std::span<const std::size_t> n_values,
    std::size_t grid, bool coarse_shifts = false, bool flip_ratio = false) {
  if (n_values.empty()) {
    throw std::invalid_argument("verify_rates: empty order list");
  }
  const std::size_t n_max = *std::max_element(n_values.begin(), n_values.end());
  if (grid < 4 * n_max + 4) {
    throw std::invalid_argument("verify_rates: grid must be >= 4*max(n)+4");
  }
  const CoefficientVector c = coefficients(a, f, long(n_max) - 1, grid);
  const std::vector<double> x = PhaseGrid::uniform_points(grid);
  const PhaseGrid pg(a, x);
  std::vector<Complex> fx(grid);
  for (std::size_t j = 0; j < grid; ++j) fx[j] = f(x[j]);

  const RateBranch branch =
      rate_branch(omega_alpha.alpha(), omega_beta.alpha());

  std::vector<ErrorReport> out;
  for (std::size_t n : n_values) {
    ErrorReport r;
    r.n = n;
    r.lambda = schedule.lambda(n);
    r.a = a;
    r.branch = branch;
    std::vector<Complex> resid = pg.vp_values(c, n, schedule);
    for (std::size_t j = 0; j < grid; ++j) {
      resid[j] = fx[j] - resid[j];
      r.err_uniform = std::max(r.err_uniform, std::abs(resid[j]));
    }
    r.err_holder =
        holder_norm(SampledFunction(std::move(resid)), omega_beta, coarse_shifts);
    r.bound_uniform = uniform_error_bound(a, n, r.lambda, omega_alpha, branch);
    r.bound_holder = holder_error_bound(a, n, r.lambda, omega_alpha,
                                        omega_beta, branch, flip_ratio);
    r.ratio_uniform = r.bound_uniform > 0.0 ? r.err_uniform / r.bound_uniform : 0.0;
    r.ratio_holder = r.bound_holder > 0.0 ? r.err_holder / r.bound_holder : 0.0;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace nfb
