#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nfb/cli_app.hpp"

using namespace nfb;
using Catch::Matchers::WithinRel;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("nfb_test_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run(std::vector<std::string> args) {
  std::vector<const char*> argv = {"nfb"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(int(argv.size()), argv.data());
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += (c == '\n');
  return n;
}

}  // namespace

TEST_CASE("order ladders: geometric and linear") {
  REQUIRE(make_orders(8, 64, true) == std::vector<std::size_t>{8, 16, 32, 64});
  REQUIRE(make_orders(8, 65, true) == std::vector<std::size_t>{8, 16, 32, 64});
  REQUIRE(make_orders(3, 6, false) == std::vector<std::size_t>{3, 4, 5, 6});
  REQUIRE(make_orders(5, 5, true) == std::vector<std::size_t>{5});
  REQUIRE_THROWS_AS(make_orders(0, 4, true), std::invalid_argument);
  REQUIRE_THROWS_AS(make_orders(8, 4, true), std::invalid_argument);
}

TEST_CASE("schedule resolution by name and by file") {
  REQUIRE(make_schedule("one", 6).lambda(6) == 1);
  REQUIRE(make_schedule("half", 6).lambda(6) == 3);
  REQUIRE(make_schedule("full", 6).lambda(6) == 6);
  REQUIRE_THROWS_AS(make_schedule("fibonacci", 6), std::invalid_argument);

  const fs::path p = fs::temp_directory_path() / "nfb_sched.txt";
  {
    std::ofstream out(p);
    out << "# alternating growth\n1\n1\n2\n2\n3\n3\n";
  }
  const VPSchedule s = make_schedule("file:" + p.string(), 5);
  REQUIRE(s.lambda(5) == 3);
  REQUIRE(s.max_order() == 5);
  REQUIRE_THROWS_AS(make_schedule("file:" + p.string(), 7),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(make_schedule("file:/nope/missing.txt", 4), io_error);
  fs::remove(p);
}

TEST_CASE("gauge construction and validation") {
  const GaugePair g = make_gauges("power", 0.5, 0.25, 1.0);
  REQUIRE_THAT(g.omega_alpha(0.25), WithinRel(0.5, 1e-15));
  REQUIRE_THAT(g.omega_beta(1.0 / 16.0), WithinRel(0.5, 1e-15));
  REQUIRE_THROWS_AS(make_gauges("power", 0.5, 0.5, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_gauges("power", 0.0, 0.0, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_gauges("power", 0.5, -0.1, 1.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(make_gauges("spline", 0.5, 0.25, 1.0),
                    std::invalid_argument);
  const GaugePair pl = make_gauges("powerlog", 1.0, 0.0, 2.0);
  REQUIRE(pl.omega_alpha.family() == ModulusSpec::Family::PowerLog);
}

TEST_CASE("floating point serialization round-trips") {
  for (double v : {0.1, pi, -1.0 / 3.0, 1e-300, 123456789.123456789}) {
    REQUIRE(std::stod(format_double(v)) == v);
  }
  REQUIRE(format_double(1.0) == "1");
}

TEST_CASE("basis command writes the warp table") {
  const fs::path d = scratch_dir("basis");
  const fs::path out = d / "b.csv";
  REQUIRE(run({"basis", "--a-re", "0", "--grid", "4", "--out", out.string()}) ==
          0);
  const std::string expect =
      "t,theta,p,inv_roundtrip\n"
      "0,0,1,0\n"
      "1.5707963267948966,1.5707963267948966,1,0\n"
      "3.1415926535897931,3.1415926535897931,1,0\n"
      "4.7123889803846897,4.7123889803846897,1,0\n";
  REQUIRE(slurp(out) == expect);
  fs::remove_all(d);
}

TEST_CASE("approx command produces the error ladder") {
  const fs::path d = scratch_dir("approx");
  const fs::path out = d / "a.csv";
  REQUIRE(run({"approx", "--a-re", "0.3", "--corpus", "cusp50", "--schedule",
               "full", "--n-start", "8", "--n-stop", "32", "--grid", "256",
               "--out", out.string()}) == 0);
  const std::string csv = slurp(out);
  REQUIRE(count_lines(csv) == 4);
  REQUIRE(csv.rfind("n,lambda_n,err_uniform,err_holder_beta,bound_uniform,"
                    "bound_holder,ratio_uniform,ratio_holder,branch\n", 0) == 0);
  REQUIRE(csv.find("alpha<1-or-beta>0") != std::string::npos);

  // json variant carries slopes
  const fs::path jout = d / "a.json";
  REQUIRE(run({"approx", "--a-re", "0.3", "--corpus", "cusp50", "--schedule",
               "full", "--n-start", "8", "--n-stop", "32", "--grid", "256",
               "--format", "json", "--out", jout.string()}) == 0);
  const std::string js = slurp(jout);
  REQUIRE(js.find("\"slope_uniform\"") != std::string::npos);
  REQUIRE(js.find("\"rows\"") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("approx of a constant drives both error columns to zero") {
  const fs::path d = scratch_dir("approx_const");
  const fs::path out = d / "c.csv";
  REQUIRE(run({"approx", "--a-re", "0.4", "--corpus", "const1", "--schedule",
               "half", "--n-start", "4", "--n-stop", "16", "--grid", "128",
               "--out", out.string()}) == 0);
  std::istringstream lines(slurp(out));
  std::string line;
  std::getline(lines, line);  // header
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string cell;
    std::vector<std::string> f;
    while (std::getline(fields, cell, ',')) f.push_back(cell);
    REQUIRE(f.size() == 9);
    REQUIRE(std::abs(std::stod(f[2])) <= 1e-12);
    REQUIRE(std::abs(std::stod(f[3])) <= 1e-12);
    ++rows;
  }
  REQUIRE(rows == 3);
  fs::remove_all(d);
}

TEST_CASE("a single-cell sweep reproduces the approx output bytes") {
  const fs::path d = scratch_dir("sweep_vs_approx");
  const fs::path aout = d / "direct.csv";
  const fs::path mout = d / "manifest.json";
  const std::vector<std::string> common = {
      "--a-re", "0.3",   "--corpus", "cusp50", "--schedule", "full",
      "--n-start", "8",  "--n-stop", "32",     "--grid",     "256"};
  std::vector<std::string> approx_args = {"approx", "--out", aout.string()};
  approx_args.insert(approx_args.end(), common.begin(), common.end());
  std::vector<std::string> sweep_args = {"sweep", "--out", mout.string()};
  sweep_args.insert(sweep_args.end(), common.begin(), common.end());
  REQUIRE(run(approx_args) == 0);
  REQUIRE(run(sweep_args) == 0);
  REQUIRE(slurp(d / "cell_0000.csv") == slurp(aout));
  REQUIRE(slurp(mout).find("\"cells\"") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("approx command rejects an undersized grid") {
  const fs::path d = scratch_dir("approx_bad");
  REQUIRE(run({"approx", "--n-start", "8", "--n-stop", "64", "--grid", "128",
               "--out", (d / "x.csv").string()}) == 1);
  fs::remove_all(d);
}

TEST_CASE("approx command gates on certification") {
  const fs::path d = scratch_dir("approx_cert");
  const fs::path table = d / "noise.txt";
  {
    std::ofstream out(table);
    unsigned state = 12345;
    for (int j = 0; j < 64; ++j) {
      state = state * 1664525u + 1013904223u;
      out << (double(state) / 4294967296.0 - 0.5) << "\n";
    }
  }
  // white noise interpolated to a wildly oscillating trig polynomial cannot
  // hold a Lipschitz certificate
  REQUIRE(run({"approx", "--corpus", "file:" + table.string(), "--n-start",
               "4", "--n-stop", "8", "--grid", "64", "--out",
               (d / "x.csv").string()}) == 2);
  fs::remove_all(d);
}

TEST_CASE("lebesgue command tabulates norm against bound") {
  const fs::path d = scratch_dir("leb");
  const fs::path out = d / "l.csv";
  REQUIRE(run({"lebesgue", "--schedule", "half", "--n-start", "4", "--n-stop",
               "16", "--out", out.string()}) == 0);
  const std::string csv = slurp(out);
  REQUIRE(csv.rfind("n,lambda_n,lebesgue,bound,ratio\n", 0) == 0);
  REQUIRE(count_lines(csv) == 4);  // header + n = 4, 8, 16
  fs::remove_all(d);
}

TEST_CASE("verify command writes a passing report on defaults") {
  const fs::path d = scratch_dir("verify");
  const fs::path out = d / "v.json";
  REQUIRE(run({"verify", "--a-re", "0.4", "--n-stop", "64", "--out",
               out.string()}) == 0);
  const std::string js = slurp(out);
  REQUIRE(js.find("\"pass\": true") != std::string::npos);
  for (const char* name :
       {"orthonormality", "projection", "multiplier_equivalence",
        "lebesgue_domination", "modulus_equivalence", "dyadic_sums",
        "class_membership"}) {
    REQUIRE(js.find(name) != std::string::npos);
  }
  fs::remove_all(d);
}

TEST_CASE("sweep runs the cartesian product and is thread-invariant") {
  const fs::path d1 = scratch_dir("sweep1");
  const fs::path d8 = scratch_dir("sweep8");
  const std::vector<std::string> common = {
      "sweep",    "--a-re",  "0,0.5",  "--schedule", "one,full",
      "--corpus", "cusp50",  "--n-start", "8",       "--n-stop",
      "16",       "--grid",  "128"};
  auto with = [&](const fs::path& d, const char* jobs) {
    std::vector<std::string> args = common;
    args.insert(args.end(),
                {"--jobs", jobs, "--out", (d / "manifest.json").string()});
    return run(args);
  };
  REQUIRE(with(d1, "1") == 0);
  REQUIRE(with(d8, "8") == 0);

  REQUIRE(fs::exists(d1 / "cell_0000.csv"));
  REQUIRE(fs::exists(d1 / "cell_0003.csv"));
  REQUIRE_FALSE(fs::exists(d1 / "cell_0004.csv"));
  for (const char* f :
       {"manifest.json", "cell_0000.csv", "cell_0001.csv", "cell_0002.csv",
        "cell_0003.csv"}) {
    REQUIRE(slurp(d1 / f) == slurp(d8 / f));
  }
  const std::string manifest = slurp(d1 / "manifest.json");
  REQUIRE(manifest.find("\"status\": \"ok\"") != std::string::npos);
  REQUIRE(manifest.find("\"slope_uniform\"") != std::string::npos);
  fs::remove_all(d1);
  fs::remove_all(d8);
}

TEST_CASE("sweep records failing cells and exits nonzero") {
  const fs::path d = scratch_dir("sweep_fail");
  const fs::path table = d / "noise.txt";
  {
    std::ofstream out(table);
    unsigned state = 98765;
    for (int j = 0; j < 64; ++j) {
      state = state * 1664525u + 1013904223u;
      out << (double(state) / 4294967296.0 - 0.5) << "\n";
    }
  }
  REQUIRE(run({"sweep", "--corpus", "cusp50,file:" + table.string(),
               "--n-start", "4", "--n-stop", "8", "--grid", "64", "--out",
               (d / "manifest.json").string()}) == 2);
  const std::string manifest = slurp(d / "manifest.json");
  REQUIRE(manifest.find("\"status\": \"ok\"") != std::string::npos);
  REQUIRE(manifest.find("\"status\": \"failed\"") != std::string::npos);
  REQUIRE(fs::exists(d / "cell_0000.csv"));       // good cell still written
  REQUIRE_FALSE(fs::exists(d / "cell_0001.csv"));  // failed cell has no table
  fs::remove_all(d);
}

TEST_CASE("exit codes: parse, validation and io failures") {
  REQUIRE(run({"--help"}) == 0);
  REQUIRE(run({}) == 1);                       // a subcommand is required
  REQUIRE(run({"basis", "--bogus"}) == 1);     // unknown flag
  REQUIRE(run({"approx", "--corpus", "nonesuch", "--grid", "256", "--n-stop",
               "16", "--out", "/tmp/nfb_nope.csv"}) == 1);
  REQUIRE(run({"approx", "--corpus", "file:/no/such/table.txt", "--grid",
               "256", "--n-stop", "16", "--out", "/tmp/nfb_nope.csv"}) == 3);
  REQUIRE(run({"basis", "--grid", "8", "--out", "/no/such/dir/out.csv"}) == 3);
  REQUIRE(run({"lebesgue", "--format", "yaml"}) == 1);
}

TEST_CASE("config files feed defaults and the command line overrides them") {
  const fs::path d = scratch_dir("config");
  const fs::path cfg = d / "run.ini";
  const fs::path out = d / "o.csv";
  {
    std::ofstream c(cfg);
    c << "a-re=0.25\ngrid=32\nout=" << out.string() << "\n";
  }
  REQUIRE(run({"basis", "--config", cfg.string()}) == 0);
  REQUIRE(count_lines(slurp(out)) == 33);  // header + 32 rows from the config

  REQUIRE(run({"basis", "--config", cfg.string(), "--grid", "8"}) == 0);
  REQUIRE(count_lines(slurp(out)) == 9);  // command line wins
  fs::remove_all(d);
}

TEST_CASE("list-valued options are refused outside sweep") {
  REQUIRE(run({"approx", "--a-re", "0.1,0.2", "--grid", "256", "--n-stop",
               "16", "--out", "/tmp/nfb_nope.csv"}) == 1);
  REQUIRE(run({"verify", "--corpus", "cusp50,expcos", "--out",
               "/tmp/nfb_nope.json"}) == 1);
}
