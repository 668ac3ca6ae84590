#include <doctest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>
#include <vector>

#include "gslab/cli.hpp"
#include "gslab/errors.hpp"
#include "gslab/io.hpp"

using namespace gslab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<const char*> args) {
  args.insert(args.begin(), "gslab");
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("gslab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

io::ResultRecord sample_record() {
  io::ResultRecord r;
  r.timestamp = "2026-01-01T00:00:00Z";
  r.config = {{"command", "solve"}, {"N", 3}, {"eps", 1e-3}};
  r.payload = {{"amplitude", 0.123456789012345678}, {"norm_Lq_q", nullptr}, {"list", {1.5, 2, 3e-300}}};
  r.diagnostics = {{"iterations", 42}, {"cache_hit", false}};
  return r;
}

}  // namespace

TEST_CASE("record round trip is byte identical") {
  const auto text = io::serialize(sample_record());
  const auto back = io::parse(text);
  CHECK(io::serialize(back) == text);
  CHECK(back.payload["amplitude"].get<double>() == 0.123456789012345678);
  CHECK(back.schema_version == "1");
}

TEST_CASE("parse errors name the field") {
  auto j = io::Json::parse(io::serialize(sample_record()));
  auto expect_field = [](const std::string& text, const std::string& field) {
    try {
      io::parse(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.field() == field);
    }
  };
  auto k = j;
  k["schema_version"] = "2";
  expect_field(k.dump(), "schema_version");
  k = j;
  k.erase("payload");
  expect_field(k.dump(), "payload");
  k = j;
  k["diagnostics"] = 3;
  expect_field(k.dump(), "diagnostics");
  k = j;
  k["extra"] = 1;
  expect_field(k.dump(), "extra");
  expect_field("{not json", "<document>");
}

TEST_CASE("non-finite numbers are rejected on write") {
  auto r = sample_record();
  r.payload["bad"] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(io::serialize(r), InvalidArgument);
}

TEST_CASE("run config invariants") {
  io::RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.shoot.amp_tol = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.grid = {1e-2, 1e-5, 3};  // ratio ~31.6
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.grid = {1e-2, 1e-2, 3};  // ratio 1
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.grid = {1e-2, 1e-5, 6};  // ratio ~3.98
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("cache keys") {
  const ProblemParams pp{3, 6.0, 10.0, 1e-3, Family::P_eps};
  ShootControls c;
  const auto k = io::cache_key(pp, c, "1");
  CHECK(k == io::cache_key(pp, c, "1"));
  CHECK(k != io::cache_key(pp, c, "2"));
  auto c2 = c;
  c2.step.rel_tol = 1e-9;
  CHECK(k != io::cache_key(pp, c2, "1"));
  auto pp2 = pp;
  pp2.eps = std::nextafter(pp.eps, 1.0);
  CHECK(k != io::cache_key(pp2, c, "1"));
}

TEST_CASE("emden command") {
  const auto r = invoke({"emden", "--N", "3"});
  REQUIRE(r.code == 0);
  const auto rec = io::parse(r.out);
  CHECK(rec.payload["U1(0)"].get<double>() == 1.0);
  CHECK(rec.payload["S_star"].get<double>() == doctest::Approx(5.47790408953133));
  CHECK(rec.payload["W1_L2_sq"].is_null());
  CHECK(rec.payload["W1_norm_pstar"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("solve command with cache") {
  const auto dir = scratch("cache");
  const std::string cd = dir.string();
  const auto first = invoke({"solve", "--family", "P_eps", "--N", "3", "--p", "6", "--q", "10", "--eps", "1e-3",
                          "--cache-dir", cd.c_str()});
  REQUIRE(first.code == 0);
  const auto a = io::parse(first.out);
  CHECK_FALSE(a.diagnostics["cache_hit"].get<bool>());
  CHECK(a.diagnostics["integrations"].get<int>() > 0);
  const auto second = invoke({"solve", "--family", "P_eps", "--N", "3", "--p", "6", "--q", "10", "--eps", "1e-3",
                           "--cache-dir", cd.c_str()});
  REQUIRE(second.code == 0);
  const auto b = io::parse(second.out);
  CHECK(b.diagnostics["cache_hit"].get<bool>());
  CHECK(b.diagnostics["integrations"].get<int>() == 0);
  CHECK(a.payload.dump() == b.payload.dump());
  const auto fresh = invoke({"solve", "--family", "P_eps", "--N", "3", "--p", "6", "--q", "10", "--eps", "1e-3",
                          "--no-cache"});
  CHECK(io::parse(fresh.out).payload.dump() == a.payload.dump());
  fs::remove_all(dir);
}

TEST_CASE("config file with command-line override") {
  const auto dir = scratch("config");
  const auto cfg = (dir / "run.toml").string();
  io::write_file(cfg, "[solve]\nN = 4\np = 3\nq = 5\neps = 0.02\nno-cache = true\n");
  const auto r = invoke({"--config", cfg.c_str(), "solve", "--eps", "0.01"});
  REQUIRE(r.code == 0);
  const auto rec = io::parse(r.out);
  CHECK(rec.config["N"].get<int>() == 4);
  CHECK(rec.config["q"].get<double>() == 5.0);
  CHECK(rec.config["eps"].get<double>() == 0.01);
  fs::remove_all(dir);
}

TEST_CASE("check command") {
  const auto ok = invoke({"check", "--suite", "pokhozhaev", "--N", "3", "--p", "8", "--q", "12"});
  CHECK(ok.code == 0);
  const auto rec = io::parse(ok.out);
  CHECK(rec.payload["pass"].get<bool>());
  CHECK(std::abs(rec.payload["cases"][0]["pokhozhaev_residual"].get<double>()) < 1e-6);
  CHECK(rec.payload["cases"][0]["label"].get<std::string>().rfind("P_zero", 0) == 0);
  // An impossible tolerance is a breach.
  const auto breach = invoke({"check", "--N", "3", "--p", "4", "--q", "6", "--eps", "1e-2", "--tolerance", "1e-30"});
  CHECK(breach.code == 1);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"nonsense"}).code == 2);
  CHECK(invoke({"solve", "--family", "Q_eps"}).code == 2);
  CHECK(invoke({"solve", "--amp-tol", "-1", "--no-cache"}).code == 2);
  CHECK(invoke({"solve", "--N", "3", "--p", "6", "--q", "4", "--no-cache"}).code == 2);
  CHECK(invoke({"sweep", "--regime", "critical", "--N", "5", "--p", "4", "--q", "6"}).code == 2);
  // eps above eps*: solver failure.
  CHECK(invoke({"solve", "--N", "3", "--p", "4", "--q", "6", "--eps", "0.5", "--no-cache"}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("sweep, CSV and re-fit") {
  const auto dir = scratch("sweep");
  const auto rec_path = (dir / "sweep.json").string();
  const auto csv_path = (dir / "sweep.csv").string();
  const auto plot_path = (dir / "plot.csv").string();
  const auto r = invoke({"sweep", "--regime", "subcritical", "--N", "3", "--p", "4", "--q", "6", "--start", "1e-1",
                      "--stop", "1e-3", "--points", "8", "--jobs", "2", "-o", rec_path.c_str(), "--csv",
                      csv_path.c_str(), "--emit-plot-data", plot_path.c_str()});
  REQUIRE(r.code == 0);
  const auto csv = io::read_file(csv_path);
  CHECK(csv.substr(0, csv.find('\n')) == io::kCsvHeader);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  CHECK(csv.find(",nan,") != std::string::npos);  // sigma is not defined off the critical regime
  CHECK(io::read_file(plot_path).rfind("observable,x,y,fit\n", 0) == 0);

  const auto saved = io::parse(io::read_file(rec_path));
  const auto refit_run = invoke({"fit", "--input", rec_path.c_str(), "--drop-largest", "2"});
  REQUIRE(refit_run.code == 0);
  const auto again = io::parse(refit_run.out);
  CHECK(again.payload["fitted_exponent"].get<double>() == saved.payload["fitted_exponent"].get<double>());
  CHECK(again.payload["grid"].dump() == saved.payload["grid"].dump());
  const auto wide = io::parse(invoke({"fit", "--input", rec_path.c_str(), "--drop-largest", "0"}).out);
  CHECK(wide.payload["window"][1].get<double>() == doctest::Approx(0.1));

  auto rep = io::report_from_json(saved.payload);
  CHECK(io::sweep_csv(rep) == csv);
  auto bad = saved.payload;
  bad["grid"][2].erase("amplitude");
  try {
    io::report_from_json(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.field() == "report.grid[2].amplitude");
  }
  fs::remove_all(dir);
}

TEST_CASE("installed binary exit codes") {
  const std::string bin = GSLAB_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("emden --N 4") == 0);
  CHECK(status("emden --N two") == 2);
  CHECK(status("solve --N 3 --p 4 --q 6 --eps 0.5 --no-cache") == 1);
}
