#pragma once

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "nfb/experiment.hpp"

namespace nfb {

// Exit codes: 0 success, 1 bad arguments, 2 numeric check failed, 3 I/O.
inline int run_cli(int argc, const char* const* argv) {
  Options o;
  CLI::App app{
      "Workbench for approximation by delayed means of Fourier series in a "
      "Moebius-warped exponential basis"};
  app.fallthrough();
  app.set_config("--config", "", "flat key=value config file; command-line "
                                 "flags override file values");

  app.add_option("--a-re", o.a_re, "real part(s) of the basis parameter a")
      ->delimiter(',');
  app.add_option("--a-im", o.a_im,
                 "imaginary part(s) of a, zipped with --a-re (default 0)")
      ->delimiter(',');
  app.add_option("--schedule", o.schedule,
                 "delay rule(s): one | half | full | file:PATH")
      ->delimiter(',');
  app.add_option("--n-start", o.n_start, "first order of the ladder");
  app.add_option("--n-stop", o.n_stop, "last order of the ladder");
  app.add_flag("--n-geom,!--n-linear", o.n_geom,
               "double orders (default) or step by 1");
  app.add_option("--grid", o.grid, "uniform grid size M");
  app.add_option("--corpus", o.corpus,
                 "test function name(s), or file:PATH with one sample per line")
      ->delimiter(',');
  app.add_option("--alpha", o.alpha,
                 "smoothness exponent(s); default: corpus certified value")
      ->delimiter(',');
  app.add_option("--beta", o.beta,
                 "target space exponent(s), beta < alpha; default alpha/2")
      ->delimiter(',');
  app.add_option("--modulus", o.modulus_family, "gauge family")
      ->check(CLI::IsMember({"power", "powerlog"}));
  app.add_option("--gamma", o.gamma, "log exponent for the powerlog family");
  app.add_option("--out", o.out, "output path (default depends on command)");
  app.add_option("--format", o.format, "output format for tables")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", o.jobs, "worker threads for sweep");
  app.add_flag("--coarse-shifts", o.coarse_shifts,
               "dyadic shift subset for the seminorm scan");
  app.add_flag("--flip-ratio", o.flip_ratio,
               "use the reciprocal gauge ratio in the mixed-norm bound");

  CLI::App* basis = app.add_subcommand(
      "basis", "tabulate the warped angle, weight and inverse round-trip");
  CLI::App* approx = app.add_subcommand(
      "approx", "error ladder with bounds for one parameter cell");
  CLI::App* verify = app.add_subcommand(
      "verify", "run the identity and bound checks, write a JSON report");
  CLI::App* sweep = app.add_subcommand(
      "sweep", "cartesian product of approx cells plus a manifest");
  CLI::App* lebesgue = app.add_subcommand(
      "lebesgue", "operator norm ladder against its analytic bound");
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (basis->parsed()) {
      cmd_basis(o);
      return 0;
    }
    if (approx->parsed()) {
      cmd_approx(o);
      return 0;
    }
    if (verify->parsed()) {
      bool pass = false;
      const std::string path = cmd_verify(o, &pass);
      std::fprintf(stderr, "verify: %s (%s)\n", pass ? "pass" : "FAIL",
                   path.c_str());
      return pass ? 0 : 2;
    }
    if (sweep->parsed()) {
      std::string manifest;
      const bool ok = cmd_sweep(o, &manifest);
      if (!ok) {
        std::fprintf(stderr, "sweep: some cells failed, see %s\n",
                     manifest.c_str());
      }
      return ok ? 0 : 2;
    }
    if (lebesgue->parsed()) {
      cmd_lebesgue(o);
      return 0;
    }
    return 1;
  } catch (const io_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 3;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "numeric check failed: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid arguments: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace nfb
