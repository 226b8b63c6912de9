#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nfb/sampling.hpp"

namespace nfb {

// Majorant omega(delta) used as a smoothness gauge.  Families:
//   power      omega(delta) = delta^alpha, alpha in [0, 1]
//              (alpha = 0 degenerates to the constant gauge 1, the
//              oscillation norm; it deliberately does not vanish at 0)
//   power_log  omega(delta) = delta^alpha * (1 + |log delta|)^gamma
//   table      piecewise-linear through user points (delta_i, omega_i) with
//              strictly increasing delta_i; below the first point the value
//              scales linearly towards (0, 0), above the last it is constant.
class ModulusSpec {
 public:
  enum class Family { Power, PowerLog, Table };

  static ModulusSpec power(double alpha) {
    check_exponent(alpha);
    ModulusSpec m;
    m.family_ = Family::Power;
    m.alpha_ = alpha;
    return m;
  }

  static ModulusSpec power_log(double alpha, double gamma) {
    check_exponent(alpha);
    ModulusSpec m;
    m.family_ = Family::PowerLog;
    m.alpha_ = alpha;
    m.gamma_ = gamma;
    return m;
  }

  static ModulusSpec table(std::vector<double> deltas,
                           std::vector<double> values) {
    if (deltas.size() != values.size() || deltas.empty()) {
      throw std::invalid_argument("ModulusSpec: table shape mismatch");
    }
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (!(deltas[i] > 0.0)) {
        throw std::invalid_argument("ModulusSpec: table deltas must be > 0");
      }
      if (i > 0 && !(deltas[i] > deltas[i - 1])) {
        throw std::invalid_argument(
            "ModulusSpec: table deltas must be strictly increasing");
      }
      if (values[i] < 0.0) {
        throw std::invalid_argument("ModulusSpec: table values must be >= 0");
      }
    }
    ModulusSpec m;
    m.family_ = Family::Table;
    m.alpha_ = std::numeric_limits<double>::quiet_NaN();
    m.deltas_ = std::move(deltas);
    m.values_ = std::move(values);
    return m;
  }

  double operator()(double delta) const {
    switch (family_) {
      case Family::Power:
        if (delta <= 0.0) return alpha_ == 0.0 ? 1.0 : 0.0;
        return std::pow(delta, alpha_);
      case Family::PowerLog: {
        if (delta <= 0.0) return 0.0;
        const double base = alpha_ == 0.0 ? 1.0 : std::pow(delta, alpha_);
        return base * std::pow(1.0 + std::abs(std::log(delta)), gamma_);
      }
      case Family::Table: {
        if (delta <= 0.0) return 0.0;
        if (delta <= deltas_.front()) {
          return values_.front() * delta / deltas_.front();
        }
        if (delta >= deltas_.back()) return values_.back();
        const auto it =
            std::upper_bound(deltas_.begin(), deltas_.end(), delta);
        const std::size_t i = std::size_t(it - deltas_.begin());
        const double t =
            (delta - deltas_[i - 1]) / (deltas_[i] - deltas_[i - 1]);
        return values_[i - 1] + t * (values_[i] - values_[i - 1]);
      }
    }
    return 0.0;
  }

  Family family() const { return family_; }
  double alpha() const { return alpha_; }  // NaN for tables
  double gamma() const { return gamma_; }

  std::string describe() const {
    switch (family_) {
      case Family::Power:
        return "power(" + std::to_string(alpha_) + ")";
      case Family::PowerLog:
        return "power_log(" + std::to_string(alpha_) + "," +
               std::to_string(gamma_) + ")";
      case Family::Table:
        return "table[" + std::to_string(deltas_.size()) + "]";
    }
    return "";
  }

 private:
  static void check_exponent(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw std::invalid_argument("ModulusSpec: exponent must be in [0, 1]");
    }
  }

  Family family_ = Family::Power;
  double alpha_ = 1.0;
  double gamma_ = 0.0;
  std::vector<double> deltas_;
  std::vector<double> values_;
};

namespace detail {

// Computes max_i |f[(i+j) mod M] - f[i]| for many shifts j.  Data that is
// real up to rounding (the typical case: real functions, Hermitian residuals)
// goes through a branch-free real scan.
class ShiftScanner {
 public:
  explicit ShiftScanner(std::span<const Complex> v) : v_(v) {
    real_ = true;
    for (const Complex& z : v) {
      if (std::abs(z.imag()) > 1e-12) {
        real_ = false;
        break;
      }
    }
    if (real_) {
      re_.reserve(v.size());
      for (const Complex& z : v) re_.push_back(z.real());
    }
  }

  double operator()(std::size_t j) const {
    const std::size_t m = v_.size();
    double best = 0.0;
    if (real_) {
      const double* r = re_.data();
      for (std::size_t i = 0; i + j < m; ++i) {
        best = std::max(best, std::abs(r[i + j] - r[i]));
      }
      for (std::size_t i = m - j; i < m; ++i) {
        best = std::max(best, std::abs(r[i + j - m] - r[i]));
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        best = std::max(best, std::abs(v_[(i + j) % m] - v_[i]));
      }
    }
    return best;
  }

 private:
  std::span<const Complex> v_;
  bool real_ = false;
  std::vector<double> re_;
};

inline std::vector<std::size_t> shift_set(std::size_t m, bool coarse) {
  std::vector<std::size_t> js;
  if (coarse) {
    for (std::size_t j = 1; j <= m / 2; j *= 2) js.push_back(j);
  } else {
    for (std::size_t j = 1; j <= m / 2; ++j) js.push_back(j);
  }
  return js;
}

}  // namespace detail

// Discrete modulus of continuity: max over grid shifts d <= delta of
// max_x |f(x + d) - f(x)|.  Circular distances beyond pi repeat pairs, so
// shifts run up to M/2.  Nondecreasing in delta by construction.
inline double modulus_of_continuity(const SampledFunction& f, double delta) {
  if (delta <= 0.0) return 0.0;
  const std::size_t m = f.size();
  const double h = two_pi / double(m);
  const std::size_t j_max =
      std::min<std::size_t>(std::size_t(std::floor(delta / h + 1e-9)), m / 2);
  const detail::ShiftScanner scan(f.values());
  double best = 0.0;
  for (std::size_t j = 1; j <= j_max; ++j) best = std::max(best, scan(j));
  return best;
}

struct HolderMeasurement {
  double uniform_norm = 0.0;
  double seminorm = 0.0;
  std::size_t grid = 0;
  std::vector<double> delta_grid;  // shift magnitudes the sup ran over

  double norm() const { return uniform_norm + seminorm; }
};

// Discrete seminorm sup |f(t)-f(s)| / omega(|t-s|) over grid pairs; the sup
// runs over all M/2 distinct circular shifts, or over dyadic shifts only when
// coarse_shifts is set.
inline HolderMeasurement measure_holder(const SampledFunction& f,
                                        const ModulusSpec& omega,
                                        bool coarse_shifts = false) {
  const std::size_t m = f.size();
  HolderMeasurement out;
  out.grid = m;
  out.uniform_norm = uniform_norm(f);
  const double h = two_pi / double(m);
  const detail::ShiftScanner scan(f.values());
  for (std::size_t j : detail::shift_set(m, coarse_shifts)) {
    const double d = h * double(j);
    out.delta_grid.push_back(d);
    const double w = omega(d);
    if (w <= 0.0) continue;
    out.seminorm = std::max(out.seminorm, scan(j) / w);
  }
  return out;
}

inline double holder_seminorm(const SampledFunction& f,
                              const ModulusSpec& omega,
                              bool coarse_shifts = false) {
  return measure_holder(f, omega, coarse_shifts).seminorm;
}

inline double holder_norm(const SampledFunction& f, const ModulusSpec& omega,
                          bool coarse_shifts = false) {
  const HolderMeasurement hm = measure_holder(f, omega, coarse_shifts);
  return hm.norm();
}

// --- Leindler-class membership -------------------------------------------
//
// A gauge omega belongs to the class with parameter alpha when
//  (i)  some alpha' > alpha and mu >= 1 give
//       2^{mu alpha'} omega(2^{-n-mu}) > 2 omega(2^{-n}) for all n, and
//  (ii) every v >= 1 admits a threshold N(v) with
//       2^{v alpha} omega(2^{-n-v}) < 2 omega(2^{-n}) for all n > N(v).
// Condition (ii) is implemented in the direction the decay estimates consume;
// witnesses for the opposite (as-printed) direction are reported alongside.

struct GrowthWitness {
  double alpha_prime = 0.0;
  int mu = 0;
  bool found = false;
};

struct DecayWitness {
  int v = 0;
  int threshold = 0;          // least N(v) for the operative '<' direction
  bool found = false;
  int threshold_reversed = 0;  // same search with '>' instead
  bool found_reversed = false;
};

struct MembershipReport {
  double alpha = 0.0;
  int n_max = 0;
  std::vector<GrowthWitness> growth;
  std::vector<DecayWitness> decay;
  std::vector<std::string> axiom_violations;
  bool growth_ok = false;  // every tested alpha' produced a witness
  bool decay_ok = false;   // every v produced a threshold
  bool axioms_ok = false;
};

inline MembershipReport class_membership_check(const ModulusSpec& omega,
                                               double alpha, int n_max = 40) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("class_membership_check: alpha outside [0, 1]");
  }
  if (n_max < 2) {
    throw std::invalid_argument("class_membership_check: n_max too small");
  }
  MembershipReport rep;
  rep.alpha = alpha;
  rep.n_max = n_max;

  // modulus axioms on the dyadic points 2^{-n}
  const bool constant_gauge =
      omega.family() == ModulusSpec::Family::Power && omega.alpha() == 0.0;
  for (int n = 0; n < n_max; ++n) {
    const double big = omega(std::pow(2.0, -n));
    const double small = omega(std::pow(2.0, -(n + 1)));
    if (small > big * (1.0 + 1e-12)) {
      rep.axiom_violations.push_back("not nondecreasing at delta = 2^-" +
                                     std::to_string(n + 1));
    }
    if (big > 2.0 * small * (1.0 + 1e-12)) {
      rep.axiom_violations.push_back("not subadditive at delta = 2^-" +
                                     std::to_string(n + 1));
    }
  }
  if (!constant_gauge && !(omega(std::pow(2.0, -n_max)) <
                           0.5 * omega(1.0) + 1e-300)) {
    rep.axiom_violations.push_back("does not vanish towards delta = 0");
  }
  rep.axioms_ok = rep.axiom_violations.empty();

  // condition (i)
  std::vector<double> primes;
  for (double cand : {alpha + 0.1, alpha + 0.25, 1.0}) {
    if (cand > alpha && cand <= 1.0) {
      bool dup = false;
      for (double p : primes) dup = dup || std::abs(p - cand) < 1e-15;
      if (!dup) primes.push_back(cand);
    }
  }
  std::sort(primes.begin(), primes.end());
  for (double ap : primes) {
    GrowthWitness gw;
    gw.alpha_prime = ap;
    for (int mu = 1; mu <= 20 && !gw.found; ++mu) {
      bool ok = true;
      for (int n = 1; n <= n_max && ok; ++n) {
        ok = std::pow(2.0, mu * ap) * omega(std::pow(2.0, -(n + mu))) >
             2.0 * omega(std::pow(2.0, -n));
      }
      if (ok) {
        gw.mu = mu;
        gw.found = true;
      }
    }
    rep.growth.push_back(gw);
  }
  rep.growth_ok = !rep.growth.empty();
  for (const GrowthWitness& gw : rep.growth) rep.growth_ok &= gw.found;

  // condition (ii), both inequality directions
  for (int v = 1; v <= 8; ++v) {
    DecayWitness dw;
    dw.v = v;
    const double factor = std::pow(2.0, v * alpha);
    for (int cap = 1; cap < n_max && !dw.found; ++cap) {
      bool ok = true;
      for (int n = cap + 1; n <= n_max && ok; ++n) {
        ok = factor * omega(std::pow(2.0, -(n + v))) <
             2.0 * omega(std::pow(2.0, -n));
      }
      if (ok) {
        dw.threshold = cap;
        dw.found = true;
      }
    }
    for (int cap = 1; cap < n_max && !dw.found_reversed; ++cap) {
      bool ok = true;
      for (int n = cap + 1; n <= n_max && ok; ++n) {
        ok = factor * omega(std::pow(2.0, -(n + v))) >
             2.0 * omega(std::pow(2.0, -n));
      }
      if (ok) {
        dw.threshold_reversed = cap;
        dw.found_reversed = true;
      }
    }
    rep.decay.push_back(dw);
  }
  rep.decay_ok = true;
  for (const DecayWitness& dw : rep.decay) rep.decay_ok &= dw.found;
  return rep;
}

// --- Warp distortion of the modulus ---------------------------------------
//
// Composing with the inverse warped variable changes the modulus of
// continuity by at most the factors (1-|a|)/2 from below and 2/(1-|a|) from
// above.  Measured discretely for each requested delta.

struct ModulusEquivalenceRow {
  double delta = 0.0;
  double omega_f = 0.0;       // modulus of f itself
  double omega_warped = 0.0;  // modulus of f(phase_inverse(a, .))
  double ratio = 1.0;         // omega_warped / omega_f (1 when both vanish)
  bool within = true;
};

struct ModulusEquivalenceReport {
  double lower = 0.0;  // (1-|a|)/2
  double upper = 0.0;  // 2/(1-|a|)
  std::vector<ModulusEquivalenceRow> rows;
  double worst_low = std::numeric_limits<double>::infinity();
  double worst_high = 0.0;
  bool ok = true;
};

inline ModulusEquivalenceReport modulus_equivalence_check(
    const MoebiusParameter& a, const SampledFunction& f,
    std::span<const double> deltas) {
  const std::size_t m = f.size();
  std::vector<Complex> warped(m);
  for (std::size_t j = 0; j < m; ++j) {
    warped[j] = f.eval(phase_inverse(a, two_pi * double(j) / double(m)));
  }
  const SampledFunction g(std::move(warped));

  ModulusEquivalenceReport rep;
  rep.lower = 0.5 * (1.0 - a.modulus());
  rep.upper = 2.0 / (1.0 - a.modulus());
  for (double d : deltas) {
    ModulusEquivalenceRow row;
    row.delta = d;
    row.omega_f = modulus_of_continuity(f, d);
    row.omega_warped = modulus_of_continuity(g, d);
    if (row.omega_f <= 1e-14 && row.omega_warped <= 1e-14) {
      row.ratio = 1.0;
      row.within = true;
    } else if (row.omega_f <= 1e-14) {
      row.ratio = std::numeric_limits<double>::infinity();
      row.within = false;
    } else {
      row.ratio = row.omega_warped / row.omega_f;
      row.within = row.ratio >= rep.lower && row.ratio <= rep.upper;
    }
    rep.worst_low = std::min(rep.worst_low, row.ratio);
    rep.worst_high = std::max(rep.worst_high, row.ratio);
    rep.ok = rep.ok && row.within;
    rep.rows.push_back(row);
  }
  return rep;
}

// --- Dyadic ratio sums -----------------------------------------------------
//
// For gauges omega_alpha, omega_beta with beta < alpha the ratio
// r(k) = omega_beta(2^-k) / omega_alpha(2^-k) grows geometrically, so the
// head sum sum_{k<=n} r(k) is bounded by a constant times r(n); the reverse
// ratio decays, so its infinite tail from n is bounded by a constant times
// its first term.  Reports the empirical constants
//   k_head = max_n (sum_{k=1}^n r(k)) / r(n)
//   k_tail = max_n (sum_{k>=n} 1/r(k)) / (1/r(n))   (tail truncated once
// terms stop contributing at double precision).

struct DyadicSumReport {
  int n_max = 0;
  double k_head = 0.0;
  double k_tail = 0.0;
  bool tail_converged = true;
};

inline DyadicSumReport dyadic_sum_check(const ModulusSpec& omega_alpha,
                                        const ModulusSpec& omega_beta,
                                        int n_max = 40) {
  if (n_max < 2) {
    throw std::invalid_argument("dyadic_sum_check: n_max too small");
  }
  const double a = omega_alpha.alpha();
  const double b = omega_beta.alpha();
  if (!std::isnan(a) && !std::isnan(b) && !(b < a)) {
    throw std::invalid_argument(
        "dyadic_sum_check: requires beta < alpha (strict)");
  }

  const auto ratio = [&](int k) {
    const double d = std::pow(2.0, -k);
    return omega_beta(d) / omega_alpha(d);
  };

  DyadicSumReport rep;
  rep.n_max = n_max;

  double head = 0.0;
  std::vector<double> r(std::size_t(n_max) + 1, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    r[std::size_t(n)] = ratio(n);
    head += r[std::size_t(n)];
    rep.k_head = std::max(rep.k_head, head / r[std::size_t(n)]);
  }

  for (int n = 1; n <= n_max; ++n) {
    const double first = 1.0 / r[std::size_t(n)];
    double tail = 0.0;
    bool converged = false;
    for (int k = n; k <= n_max + 4000; ++k) {
      const double term = 1.0 / ratio(k);
      tail += term;
      if (term < 1e-18 * tail) {
        converged = true;
        break;
      }
    }
    rep.tail_converged = rep.tail_converged && converged;
    rep.k_tail = std::max(rep.k_tail, tail / first);
  }
  return rep;
}

}  // namespace nfb
