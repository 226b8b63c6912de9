#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nfb/errors.hpp"
#include "nfb/holder.hpp"
#include "nfb/sampling.hpp"

namespace nfb {

// A test function together with the smoothness gauge it is certified for.
// Entries are evaluators (closed forms), not stored samples, so any grid can
// be produced exactly.
struct CorpusEntry {
  std::string name;
  std::function<double(double)> f;
  double certified_alpha = 1.0;
  ModulusSpec certified_modulus = ModulusSpec::power(1.0);
  std::string notes;

  Evaluator evaluator() const {
    auto g = f;
    return [g](double x) { return Complex(g(x), 0.0); };
  }
  SampledFunction sample(std::size_t m) const {
    return SampledFunction::from_evaluator(evaluator(), m);
  }
};

namespace detail {

inline double triangle_wave(double x) { return std::abs(std::remainder(x, two_pi)); }

inline double weierstrass(double alpha, double x) {
  double acc = 0.0;
  for (int k = 0; k <= 18; ++k) {
    acc += std::pow(2.0, -alpha * k) * std::cos(std::ldexp(x, k));
  }
  return acc;
}

}  // namespace detail

inline const std::vector<CorpusEntry>& builtin_corpus() {
  static const std::vector<CorpusEntry> entries = [] {
    std::vector<CorpusEntry> v;
    v.push_back({"const1", [](double) { return 1.0; }, 1.0,
                 ModulusSpec::power(1.0), "constant control entry"});
    for (double alpha : {0.25, 0.5, 0.75}) {
      const int tag = int(alpha * 100 + 0.5);
      v.push_back({"cusp" + std::to_string(tag),
                   [alpha](double x) {
                     return std::pow(std::abs(std::sin(0.5 * x)), alpha);
                   },
                   alpha, ModulusSpec::power(alpha),
                   "single algebraic cusp at x = 0"});
    }
    v.push_back({"weier50",
                 [](double x) { return detail::weierstrass(0.5, x); }, 0.5,
                 ModulusSpec::power(0.5),
                 "lacunary cosine series, truncated at scale 2^18"});
    v.push_back({"weier100",
                 [](double x) { return detail::weierstrass(1.0, x); }, 1.0,
                 ModulusSpec::power_log(1.0, 1.0),
                 "lacunary series at the Zygmund endpoint"});
    v.push_back({"lipschitz", detail::triangle_wave, 1.0,
                 ModulusSpec::power(1.0),
                 "triangle wave; modulus of continuity is exactly delta"});
    v.push_back({"expcos", [](double x) { return std::exp(std::cos(x)); }, 1.0,
                 ModulusSpec::power(1.0), "entire control entry"});
    return v;
  }();
  return entries;
}

inline const CorpusEntry* find_corpus_entry(std::string_view name) {
  for (const CorpusEntry& e : builtin_corpus()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

// Loads a user function given as M equally spaced samples, one value per
// line (blank lines and '#' comments allowed).  The evaluator is the exact
// trigonometric interpolant through the samples; the experiment's warp
// parameter enters downstream through coefficient computation.
inline CorpusEntry load_table_corpus(const std::string& path,
                                     double certified_alpha = 1.0) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open function table: " + path);
  std::vector<Complex> samples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ss(line);
    double v;
    if (!(ss >> v)) {
      throw std::invalid_argument("function table " + path + ": line " +
                                  std::to_string(lineno) + " is not a number");
    }
    samples.push_back(Complex(v, 0.0));
  }
  if (samples.size() < 4) {
    throw std::invalid_argument("function table " + path +
                                ": need at least 4 samples");
  }
  SampledFunction sf(samples);
  Evaluator interp = make_trig_evaluator(sf);
  CorpusEntry entry;
  entry.name = "file:" + path;
  entry.f = [interp](double x) { return interp(x).real(); };
  entry.certified_alpha = certified_alpha;
  entry.certified_modulus = ModulusSpec::power(certified_alpha);
  entry.notes = "user table, trigonometric interpolant through " +
                std::to_string(samples.size()) + " samples";
  return entry;
}

struct CertificationResult {
  bool ok = false;
  double seminorm_coarse = 0.0;
  double seminorm_fine = 0.0;
  double rel_change = 0.0;
  std::string message;
};

// Validates an entry's certified gauge: the seminorm must be finite and
// stable (within 5%) under grid doubling.  Rate experiments refuse entries
// that fail this.
inline CertificationResult check_certification(const CorpusEntry& entry,
                                               std::size_t grid = 2048) {
  CertificationResult r;
  r.seminorm_coarse =
      holder_seminorm(entry.sample(grid), entry.certified_modulus);
  r.seminorm_fine =
      holder_seminorm(entry.sample(2 * grid), entry.certified_modulus);
  if (!std::isfinite(r.seminorm_fine) || r.seminorm_fine > 1e6) {
    r.message = entry.name + ": certified seminorm not finite";
    return r;
  }
  if (r.seminorm_fine == 0.0 && r.seminorm_coarse == 0.0) {
    r.ok = true;  // constants
    return r;
  }
  r.rel_change = std::abs(r.seminorm_fine - r.seminorm_coarse) /
                 std::max(r.seminorm_fine, 1e-300);
  r.ok = r.rel_change <= 0.05;
  if (!r.ok) {
    r.message = entry.name + ": certified seminorm unstable under refinement (" +
                std::to_string(r.rel_change * 100.0) + "%)";
  }
  return r;
}

}  // namespace nfb
