#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "nfb/bounds.hpp"
#include "nfb/corpus.hpp"
#include "nfb/errors.hpp"

namespace nfb {

using OrderedJson = nlohmann::ordered_json;

// Everything the command-line surface can set.  The four sweepable
// dimensions (a, schedule, corpus, gauge exponents) are lists; non-sweep
// commands require singletons.
struct Options {
  std::vector<double> a_re{0.5};
  std::vector<double> a_im{};
  std::vector<std::string> schedule{"full"};
  std::size_t n_start = 16;
  std::size_t n_stop = 256;
  bool n_geom = true;
  std::size_t grid = 2048;
  std::vector<std::string> corpus{"cusp50"};
  std::vector<double> alpha{};  // empty: use corpus certified exponent
  std::vector<double> beta{};   // empty: alpha / 2
  std::string modulus_family = "power";
  double gamma = 1.0;
  std::string out;
  std::string format = "csv";
  unsigned jobs = 1;
  bool coarse_shifts = false;
  bool flip_ratio = false;
};

// 17 significant digits: round-trip exact for binary64.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) throw io_error("write failed: " + path);
}

inline std::vector<std::size_t> make_orders(std::size_t start, std::size_t stop,
                                            bool geometric) {
  if (start < 1 || stop < start) {
    throw std::invalid_argument("order range: need 1 <= n_start <= n_stop");
  }
  std::vector<std::size_t> out;
  if (geometric) {
    for (std::size_t n = start; n <= stop; n *= 2) out.push_back(n);
  } else {
    for (std::size_t n = start; n <= stop; ++n) out.push_back(n);
  }
  return out;
}

// "one" | "half" | "full" | "file:PATH" (one integer per line, n = 1..)
inline VPSchedule make_schedule(const std::string& spec, std::size_t n_max) {
  if (spec == "one") return VPSchedule::one(n_max);
  if (spec == "half") return VPSchedule::half(n_max);
  if (spec == "full") return VPSchedule::full(n_max);
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw io_error("cannot open schedule file: " + path);
    std::vector<std::size_t> v;
    std::string line;
    while (std::getline(in, line)) {
      const auto start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      std::istringstream ss(line);
      long val;
      if (!(ss >> val) || val < 0) {
        throw std::invalid_argument("schedule file " + path +
                                    ": expected nonnegative integers");
      }
      v.push_back(std::size_t(val));
    }
    if (v.size() < n_max) {
      throw std::invalid_argument("schedule file " + path + ": need at least " +
                                  std::to_string(n_max) + " entries");
    }
    v.resize(n_max);
    return VPSchedule::custom(std::move(v), "file:" + path);
  }
  throw std::invalid_argument("unknown schedule rule: " + spec);
}

inline CorpusEntry resolve_corpus(const std::string& name) {
  if (name.rfind("file:", 0) == 0) return load_table_corpus(name.substr(5));
  const CorpusEntry* e = find_corpus_entry(name);
  if (!e) throw std::invalid_argument("unknown corpus entry: " + name);
  return *e;
}

struct GaugePair {
  ModulusSpec omega_alpha = ModulusSpec::power(1.0);
  ModulusSpec omega_beta = ModulusSpec::power(0.5);
  double alpha = 1.0;
  double beta = 0.5;
};

inline GaugePair make_gauges(const std::string& family, double alpha,
                             double beta, double gamma) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1]");
  }
  if (!(beta >= 0.0 && beta < alpha)) {
    throw std::invalid_argument("beta must lie in [0, alpha)");
  }
  GaugePair g;
  g.alpha = alpha;
  g.beta = beta;
  if (family == "power") {
    g.omega_alpha = ModulusSpec::power(alpha);
    g.omega_beta = ModulusSpec::power(beta);
  } else if (family == "powerlog") {
    g.omega_alpha = ModulusSpec::power_log(alpha, gamma);
    g.omega_beta = ModulusSpec::power_log(beta, gamma);
  } else {
    throw std::invalid_argument("unknown modulus family: " + family);
  }
  return g;
}

namespace detail {

inline void require_singletons(const Options& o) {
  if (o.a_re.size() > 1 || o.a_im.size() > 1 || o.schedule.size() > 1 ||
      o.corpus.size() > 1 || o.alpha.size() > 1 || o.beta.size() > 1) {
    throw std::invalid_argument(
        "list-valued options are only accepted by the sweep command");
  }
}

inline MoebiusParameter single_a(const Options& o) {
  const double re = o.a_re.empty() ? 0.0 : o.a_re.front();
  const double im = o.a_im.empty() ? 0.0 : o.a_im.front();
  return MoebiusParameter(re, im);
}

inline std::string default_out(const Options& o, const char* stem) {
  if (!o.out.empty()) return o.out;
  return std::string(stem) + (o.format == "json" ? ".json" : ".csv");
}

}  // namespace detail

// --- basis -------------------------------------------------------------

// Tabulates the warped angle, its derivative weight, and the inverse
// round-trip defect over the uniform grid.
inline std::string cmd_basis(const Options& o) {
  detail::require_singletons(o);
  const MoebiusParameter a = detail::single_a(o);
  if (o.grid < 4) throw std::invalid_argument("basis: grid too small");
  const std::string path = detail::default_out(o, "basis");
  if (o.format == "json") {
    OrderedJson rows = OrderedJson::array();
    for (std::size_t j = 0; j < o.grid; ++j) {
      const double t = two_pi * double(j) / double(o.grid);
      const double th = phase(a, t);
      OrderedJson row;
      row["t"] = t;
      row["theta"] = th;
      row["p"] = poisson_weight(a, t);
      row["inv_roundtrip"] = phase_inverse(a, th) - t;
      rows.push_back(row);
    }
    write_file(path, rows.dump(2) + "\n");
  } else {
    std::string csv = "t,theta,p,inv_roundtrip\n";
    for (std::size_t j = 0; j < o.grid; ++j) {
      const double t = two_pi * double(j) / double(o.grid);
      const double th = phase(a, t);
      csv += format_double(t) + "," + format_double(th) + "," +
             format_double(poisson_weight(a, t)) + "," +
             format_double(phase_inverse(a, th) - t) + "\n";
    }
    write_file(path, csv);
  }
  return path;
}

// --- approx / sweep cells ------------------------------------------------

struct CellOutcome {
  bool ok = false;
  std::string message;
  std::string csv;
  OrderedJson rows = OrderedJson::array();
  std::string corpus_name;
  double alpha = 0.0;
  double beta = 0.0;
  double slope_uniform = std::numeric_limits<double>::quiet_NaN();
  double slope_holder = std::numeric_limits<double>::quiet_NaN();
};

inline const char* approx_csv_header() {
  return "n,lambda_n,err_uniform,err_holder_beta,bound_uniform,bound_holder,"
         "ratio_uniform,ratio_holder,branch\n";
}

inline CellOutcome run_approx_cell(const Options& o, double a_re, double a_im,
                                   const std::string& schedule_name,
                                   const std::string& corpus_name,
                                   double alpha_opt, double beta_opt) {
  CellOutcome out;
  const MoebiusParameter a(a_re, a_im);
  const std::vector<std::size_t> orders =
      make_orders(o.n_start, o.n_stop, o.n_geom);
  const std::size_t n_max = orders.back();
  if (o.grid < 4 * n_max + 4) {
    throw std::invalid_argument("grid must be >= 4*n_stop + 4 for approx runs");
  }
  const VPSchedule schedule = make_schedule(schedule_name, n_max);
  const CorpusEntry entry = resolve_corpus(corpus_name);
  const CertificationResult cert =
      check_certification(entry, std::min<std::size_t>(o.grid, 2048));
  if (!cert.ok) throw numeric_error(cert.message);

  const double alpha =
      std::isnan(alpha_opt) ? entry.certified_alpha : alpha_opt;
  const double beta = std::isnan(beta_opt) ? 0.5 * alpha : beta_opt;
  const GaugePair g = make_gauges(o.modulus_family, alpha, beta, o.gamma);

  const std::vector<ErrorReport> reports =
      verify_rates(a, entry.evaluator(), g.omega_alpha, g.omega_beta, schedule,
                   orders, o.grid, o.coarse_shifts, o.flip_ratio);

  std::vector<double> ns, eu, eh;
  out.csv = approx_csv_header();
  for (const ErrorReport& r : reports) {
    ns.push_back(double(r.n));
    eu.push_back(r.err_uniform);
    eh.push_back(r.err_holder);
    out.csv += std::to_string(r.n) + "," + std::to_string(r.lambda) + "," +
               format_double(r.err_uniform) + "," +
               format_double(r.err_holder) + "," +
               format_double(r.bound_uniform) + "," +
               format_double(r.bound_holder) + "," +
               format_double(r.ratio_uniform) + "," +
               format_double(r.ratio_holder) + "," + branch_label(r.branch) +
               "\n";
    OrderedJson row;
    row["n"] = r.n;
    row["lambda_n"] = r.lambda;
    row["err_uniform"] = r.err_uniform;
    row["err_holder_beta"] = r.err_holder;
    row["bound_uniform"] = r.bound_uniform;
    row["bound_holder"] = r.bound_holder;
    row["ratio_uniform"] = r.ratio_uniform;
    row["ratio_holder"] = r.ratio_holder;
    row["branch"] = branch_label(r.branch);
    out.rows.push_back(row);
  }
  out.slope_uniform = loglog_slope(ns, eu);
  out.slope_holder = loglog_slope(ns, eh);
  out.corpus_name = entry.name;
  out.alpha = alpha;
  out.beta = beta;
  out.ok = true;
  return out;
}

inline std::string cmd_approx(const Options& o) {
  detail::require_singletons(o);
  const double are = o.a_re.empty() ? 0.0 : o.a_re.front();
  const double aim = o.a_im.empty() ? 0.0 : o.a_im.front();
  const double al = o.alpha.empty() ? std::numeric_limits<double>::quiet_NaN()
                                    : o.alpha.front();
  const double be = o.beta.empty() ? std::numeric_limits<double>::quiet_NaN()
                                   : o.beta.front();
  const CellOutcome cell = run_approx_cell(
      o, are, aim, o.schedule.empty() ? "full" : o.schedule.front(),
      o.corpus.empty() ? "cusp50" : o.corpus.front(), al, be);
  const std::string path = detail::default_out(o, "approx");
  if (o.format == "json") {
    OrderedJson doc;
    doc["a_re"] = are;
    doc["a_im"] = aim;
    doc["corpus"] = cell.corpus_name;
    doc["alpha"] = cell.alpha;
    doc["beta"] = cell.beta;
    doc["slope_uniform"] = cell.slope_uniform;
    doc["slope_holder"] = cell.slope_holder;
    doc["rows"] = cell.rows;
    write_file(path, doc.dump(2) + "\n");
  } else {
    write_file(path, cell.csv);
  }
  return path;
}

// --- lebesgue --------------------------------------------------------------

inline std::string cmd_lebesgue(const Options& o) {
  detail::require_singletons(o);
  const std::vector<std::size_t> orders =
      make_orders(o.n_start, o.n_stop, o.n_geom);
  const VPSchedule schedule = make_schedule(
      o.schedule.empty() ? "full" : o.schedule.front(), orders.back());
  const std::string path = detail::default_out(o, "lebesgue");
  if (o.format == "json") {
    OrderedJson rows = OrderedJson::array();
    for (std::size_t n : orders) {
      const std::size_t l = schedule.lambda(n);
      const double lc = lebesgue_constant(n, l);
      const double b = lebesgue_constant_bound(n, l);
      OrderedJson row;
      row["n"] = n;
      row["lambda_n"] = l;
      row["lebesgue"] = lc;
      row["bound"] = b;
      row["ratio"] = lc / b;
      rows.push_back(row);
    }
    write_file(path, rows.dump(2) + "\n");
  } else {
    std::string csv = "n,lambda_n,lebesgue,bound,ratio\n";
    for (std::size_t n : orders) {
      const std::size_t l = schedule.lambda(n);
      const double lc = lebesgue_constant(n, l);
      const double b = lebesgue_constant_bound(n, l);
      csv += std::to_string(n) + "," + std::to_string(l) + "," +
             format_double(lc) + "," + format_double(b) + "," +
             format_double(lc / b) + "\n";
    }
    write_file(path, csv);
  }
  return path;
}

// --- verify ------------------------------------------------------------

struct VerifyCheck {
  std::string name;
  bool pass = false;
  OrderedJson measured;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool pass = true;

  void add(VerifyCheck c) {
    pass = pass && c.pass;
    checks.push_back(std::move(c));
  }
};

namespace detail {

inline VerifyCheck check_orthonormality(const MoebiusParameter& extra_a) {
  VerifyCheck c;
  c.name = "orthonormality";
  const std::size_t m = 4096;
  const long band = 16;
  std::vector<MoebiusParameter> as = {
      MoebiusParameter(0.0, 0.0), MoebiusParameter(0.3, 0.0),
      MoebiusParameter(0.6 * std::cos(pi / 4), 0.6 * std::sin(pi / 4)),
      MoebiusParameter(0.0, 0.9), extra_a};
  double worst = 0.0;
  for (const MoebiusParameter& a : as) {
    std::vector<double> w(m);
    std::vector<Complex> e(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double x = two_pi * double(j) / double(m);
      w[j] = poisson_weight(a, x);
      e[j] = std::polar(1.0, phase(a, x));
    }
    std::vector<std::vector<Complex>> basis(std::size_t(2 * band + 1));
    for (long k = -band; k <= band; ++k) {
      std::vector<Complex> v(m);
      for (std::size_t j = 0; j < m; ++j) v[j] = std::pow(e[j], double(k));
      basis[std::size_t(k + band)] = std::move(v);
    }
    for (long j = -band; j <= band; ++j) {
      for (long k = -band; k <= band; ++k) {
        Complex acc = 0.0;
        const auto& bj = basis[std::size_t(j + band)];
        const auto& bk = basis[std::size_t(k + band)];
        for (std::size_t i = 0; i < m; ++i) {
          acc += bj[i] * std::conj(bk[i]) * w[i];
        }
        acc /= double(m);
        const double target = (j == k) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(acc - target));
      }
    }
  }
  c.measured["max_gram_deviation"] = worst;
  c.measured["grid"] = m;
  c.measured["band"] = band;
  c.pass = worst <= 1e-10;
  return c;
}

inline VerifyCheck check_projection(const MoebiusParameter& a) {
  VerifyCheck c;
  c.name = "projection";
  std::mt19937 rng(20240517);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const long deg = 9;
  std::vector<Complex> coeffs(std::size_t(2 * deg + 1));
  for (long k = 0; k <= deg; ++k) {
    const Complex v(u(rng), k == 0 ? 0.0 : u(rng));
    coeffs[std::size_t(deg + k)] = v;
    coeffs[std::size_t(deg - k)] = std::conj(v);
  }
  const CoefficientVector truth(a, coeffs);
  Evaluator f = [&truth](double x) { return evaluate_series(truth, x); };
  const CoefficientVector c2 = coefficients(a, f, 24, 256);
  const VPSchedule half = VPSchedule::half(64);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double x = two_pi * double(i) / 64.0 + 0.013;
    const Complex fx = f(x);
    worst = std::max(worst, std::abs(partial_sum(c2, 12, x) - fx));
    worst = std::max(worst, std::abs(vp_mean(c2, 24, half, x) - fx));
  }
  c.measured["max_projection_error"] = worst;
  c.pass = worst <= 1e-10;
  return c;
}

inline VerifyCheck check_multiplier_equivalence() {
  VerifyCheck c;
  c.name = "multiplier_equivalence";
  std::mt19937 rng(777001);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const MoebiusParameter a(0.4, 0.2);
  const long deg = 127;
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Complex> coeffs(std::size_t(2 * deg + 1));
    for (long k = -deg; k <= deg; ++k) {
      coeffs[std::size_t(k + deg)] =
          Complex(u(rng), u(rng)) / (1.0 + std::abs(double(k)));
    }
    const CoefficientVector cv(a, coeffs);
    const std::size_t n_max = 128;
    for (const VPSchedule& s :
         {VPSchedule::one(n_max), VPSchedule::half(n_max),
          VPSchedule::full(n_max)}) {
      for (std::size_t n : {std::size_t(1), std::size_t(5), std::size_t(32),
                            std::size_t(128)}) {
        const double x = two_pi * u(rng);
        const std::size_t lambda = s.lambda(n);
        Complex avg = 0.0;
        for (std::size_t k = n - lambda; k <= n - 1; ++k) {
          avg += partial_sum(cv, k, x);
        }
        avg /= double(lambda);
        worst = std::max(worst, std::abs(avg - vp_mean(cv, n, s, x)));
      }
    }
  }
  c.measured["max_form_difference"] = worst;
  c.pass = worst <= 1e-12;
  return c;
}

inline VerifyCheck check_lebesgue_domination(std::size_t n_stop) {
  VerifyCheck c;
  c.name = "lebesgue_domination";
  const std::size_t n_max = std::min<std::size_t>(n_stop, 512);
  double worst_ratio = 0.0;
  double fejer_dev = 0.0;
  bool ok = true;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const std::size_t lambdas[3] = {1, (n + 1) / 2, n};
    for (std::size_t l : lambdas) {
      const double lc = lebesgue_constant(n, l);
      const double b = lebesgue_constant_bound(n, l);
      worst_ratio = std::max(worst_ratio, lc / b);
      ok = ok && lc <= b;
    }
    fejer_dev = std::max(fejer_dev, std::abs(lebesgue_constant(n, n) - 1.0));
  }
  c.measured["max_ratio_to_bound"] = worst_ratio;
  c.measured["max_fejer_deviation"] = fejer_dev;
  c.measured["n_max"] = n_max;
  c.pass = ok && fejer_dev <= 1e-6;
  return c;
}

inline VerifyCheck check_modulus_equivalence(const MoebiusParameter& a,
                                             const CorpusEntry& entry) {
  VerifyCheck c;
  c.name = "modulus_equivalence";
  const MoebiusParameter aa =
      a.is_zero() ? MoebiusParameter(0.5, 0.0) : a;
  const SampledFunction f = entry.sample(4096);
  std::vector<double> deltas;
  for (double d = 0.01; d <= 1.3; d *= 1.9) deltas.push_back(d);
  const ModulusEquivalenceReport rep = modulus_equivalence_check(aa, f, deltas);
  c.measured["lower"] = rep.lower;
  c.measured["upper"] = rep.upper;
  c.measured["worst_low"] = rep.worst_low;
  c.measured["worst_high"] = rep.worst_high;
  c.measured["corpus"] = entry.name;
  c.pass = rep.ok;
  return c;
}

inline VerifyCheck check_dyadic_sums(double alpha, double beta) {
  VerifyCheck c;
  c.name = "dyadic_sums";
  bool ok = true;
  OrderedJson pairs = OrderedJson::array();
  const std::pair<double, double> cases[2] = {{alpha, beta}, {1.0, 0.0}};
  for (const auto& [al, be] : cases) {
    const ModulusSpec wa = ModulusSpec::power(al);
    const ModulusSpec wb = ModulusSpec::power(be);
    const DyadicSumReport r20 = dyadic_sum_check(wa, wb, 20);
    const DyadicSumReport r40 = dyadic_sum_check(wa, wb, 40);
    const double head_change =
        std::abs(r40.k_head - r20.k_head) / std::max(r40.k_head, 1e-300);
    const double tail_change =
        std::abs(r40.k_tail - r20.k_tail) / std::max(r40.k_tail, 1e-300);
    OrderedJson e;
    e["alpha"] = al;
    e["beta"] = be;
    e["k_head"] = r40.k_head;
    e["k_tail"] = r40.k_tail;
    e["head_change"] = head_change;
    e["tail_change"] = tail_change;
    pairs.push_back(e);
    ok = ok && head_change <= 0.05 && tail_change <= 0.05 &&
         r40.tail_converged;
  }
  c.measured["pairs"] = pairs;
  c.pass = ok;
  return c;
}

inline VerifyCheck check_class_membership(const ModulusSpec& omega,
                                          double alpha) {
  VerifyCheck c;
  c.name = "class_membership";
  const MembershipReport rep = class_membership_check(omega, alpha, 40);
  OrderedJson growth = OrderedJson::array();
  for (const GrowthWitness& g : rep.growth) {
    OrderedJson e;
    e["alpha_prime"] = g.alpha_prime;
    e["mu"] = g.mu;
    e["found"] = g.found;
    growth.push_back(e);
  }
  c.measured["growth_witnesses"] = growth;
  c.measured["decay_ok"] = rep.decay_ok;
  c.measured["axioms_ok"] = rep.axioms_ok;
  c.measured["alpha"] = alpha;
  // growth candidates are empty exactly at alpha = 1
  c.pass = rep.axioms_ok && rep.decay_ok && (rep.growth.empty() || rep.growth_ok);
  return c;
}

}  // namespace detail

inline VerifyReport run_verify(const Options& o) {
  detail::require_singletons(o);
  const MoebiusParameter a = detail::single_a(o);
  const CorpusEntry entry =
      resolve_corpus(o.corpus.empty() ? "cusp50" : o.corpus.front());
  const double alpha = o.alpha.empty() ? entry.certified_alpha : o.alpha.front();
  const double beta = o.beta.empty() ? 0.5 * alpha : o.beta.front();
  const GaugePair g = make_gauges(o.modulus_family, alpha, beta, o.gamma);
  // validates the schedule spec even though checks use fixed rules
  make_schedule(o.schedule.empty() ? "full" : o.schedule.front(),
                std::max<std::size_t>(o.n_stop, 2));

  VerifyReport rep;
  rep.add(detail::check_orthonormality(a));
  rep.add(detail::check_projection(a));
  rep.add(detail::check_multiplier_equivalence());
  rep.add(detail::check_lebesgue_domination(o.n_stop));
  rep.add(detail::check_modulus_equivalence(a, entry));
  rep.add(detail::check_dyadic_sums(alpha, beta));
  rep.add(detail::check_class_membership(g.omega_alpha, alpha));
  return rep;
}

inline std::string cmd_verify(const Options& o, bool* all_pass = nullptr) {
  const VerifyReport rep = run_verify(o);
  OrderedJson doc;
  doc["command"] = "verify";
  doc["pass"] = rep.pass;
  OrderedJson checks = OrderedJson::array();
  for (const VerifyCheck& c : rep.checks) {
    OrderedJson e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["measured"] = c.measured;
    checks.push_back(e);
  }
  doc["checks"] = checks;
  const std::string path = o.out.empty() ? "verify.json" : o.out;
  write_file(path, doc.dump(2) + "\n");
  if (all_pass) *all_pass = rep.pass;
  return path;
}

// --- sweep -------------------------------------------------------------

struct SweepCell {
  std::size_t index = 0;
  double a_re = 0.0;
  double a_im = 0.0;
  std::string schedule;
  std::string corpus;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  std::string file;
};

// Cartesian product over the four sweep dimensions; each cell produces one
// CSV, and a JSON manifest records parameters, status and slope summaries.
// Cells run on up to `jobs` threads; output bytes are independent of the
// thread count because every file is rendered in-memory and written in index
// order after all cells finish.
inline bool cmd_sweep(const Options& o, std::string* manifest_path = nullptr) {
  const std::string out =
      o.out.empty() ? std::string("manifest.json") : o.out;
  const std::filesystem::path dir =
      std::filesystem::path(out).has_parent_path()
          ? std::filesystem::path(out).parent_path()
          : std::filesystem::path(".");

  std::vector<std::pair<double, double>> as;
  if (o.a_im.size() > o.a_re.size()) {
    throw std::invalid_argument("sweep: more --a-im values than --a-re");
  }
  for (std::size_t i = 0; i < o.a_re.size(); ++i) {
    as.emplace_back(o.a_re[i], i < o.a_im.size() ? o.a_im[i] : 0.0);
  }
  if (as.empty()) as.emplace_back(0.0, 0.0);

  std::vector<std::pair<double, double>> gauges;
  if (o.alpha.empty()) {
    gauges.emplace_back(std::numeric_limits<double>::quiet_NaN(),
                        std::numeric_limits<double>::quiet_NaN());
  } else {
    if (o.beta.size() > o.alpha.size()) {
      throw std::invalid_argument("sweep: more --beta values than --alpha");
    }
    for (std::size_t i = 0; i < o.alpha.size(); ++i) {
      gauges.emplace_back(o.alpha[i],
                          i < o.beta.size()
                              ? o.beta[i]
                              : std::numeric_limits<double>::quiet_NaN());
    }
  }

  // upfront validation: every referenced name must resolve
  const std::vector<std::size_t> orders =
      make_orders(o.n_start, o.n_stop, o.n_geom);
  if (o.grid < 4 * orders.back() + 4) {
    throw std::invalid_argument("grid must be >= 4*n_stop + 4 for sweep runs");
  }
  for (const auto& [re, im] : as) MoebiusParameter(re, im);
  for (const std::string& s : o.schedule) make_schedule(s, orders.back());
  for (const std::string& name : o.corpus) resolve_corpus(name);

  std::vector<SweepCell> cells;
  for (const auto& [re, im] : as) {
    for (const std::string& sched : o.schedule) {
      for (const std::string& corp : o.corpus) {
        for (const auto& [al, be] : gauges) {
          SweepCell cell;
          cell.index = cells.size();
          cell.a_re = re;
          cell.a_im = im;
          cell.schedule = sched;
          cell.corpus = corp;
          cell.alpha = al;
          cell.beta = be;
          char name[32];
          std::snprintf(name, sizeof name, "cell_%04zu.csv", cell.index);
          cell.file = name;
          cells.push_back(std::move(cell));
        }
      }
    }
  }

  std::vector<CellOutcome> results(cells.size());
  std::atomic<std::size_t> next{0};
  const unsigned workers =
      std::max(1u, std::min<unsigned>(o.jobs, unsigned(cells.size())));
  auto body = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) break;
      const SweepCell& cell = cells[i];
      try {
        results[i] =
            run_approx_cell(o, cell.a_re, cell.a_im, cell.schedule,
                            cell.corpus, cell.alpha, cell.beta);
      } catch (const std::exception& e) {
        results[i].ok = false;
        results[i].message = e.what();
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
  }

  bool all_ok = true;
  OrderedJson manifest;
  manifest["command"] = "sweep";
  manifest["grid"] = o.grid;
  manifest["orders"] = orders;
  OrderedJson jcells = OrderedJson::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const SweepCell& cell = cells[i];
    const CellOutcome& r = results[i];
    OrderedJson e;
    e["index"] = cell.index;
    e["file"] = cell.file;
    e["a_re"] = cell.a_re;
    e["a_im"] = cell.a_im;
    e["schedule"] = cell.schedule;
    e["corpus"] = cell.corpus;
    if (r.ok) {
      e["alpha"] = r.alpha;
      e["beta"] = r.beta;
      e["status"] = "ok";
      e["slope_uniform"] = r.slope_uniform;
      e["slope_holder"] = r.slope_holder;
      write_file((dir / cell.file).string(), r.csv);
    } else {
      e["status"] = "failed";
      e["message"] = r.message;
      all_ok = false;
    }
    jcells.push_back(e);
  }
  manifest["cells"] = jcells;
  write_file(out, manifest.dump(2) + "\n");
  if (manifest_path) *manifest_path = out;
  return all_ok;
}

}  // namespace nfb
