#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aclqr/log_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the tool with `args`, capturing stdout and stderr together.
Result cli(const std::string& args) {
  const fs::path capture = fs::temp_directory_path() / "aclqr_test_cli.out";
  const std::string cmd = std::string("\"") + ACLQR_CLI_PATH + "\" " + args + " > \"" +
                          capture.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(capture);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string config(const std::string& name) {
  return std::string("\"") + ACLQR_CONFIG_DIR + "/" + name + ".yaml\"";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string q() const { return "\"" + path.string() + "\""; }
};

}  // namespace

TEST_CASE("run writes the four output files") {
  TempDir dir("aclqr_cli_run");
  const Result r = cli("run --config " + config("oracle-hover") + " --out " + dir.q());
  CHECK(r.code == 0);
  for (const char* ext : {".csv", ".report", ".meta", ".plot.dat"}) {
    CHECK(fs::exists(dir.path / (std::string("oracle-hover") + ext)));
  }
  CHECK(slurp(dir.path / "oracle-hover.report").find("violation=0") != std::string::npos);
}

TEST_CASE("a malformed config exits with status 2 and writes nothing") {
  TempDir dir("aclqr_cli_bad");
  fs::create_directories(dir.path);
  const fs::path bad = dir.path / "bad.yaml";
  std::ofstream(bad) << "system:\n  preset: quadrotor\n  plnt: linear\n";
  const fs::path out = dir.path / "out";
  const Result r = cli("run --config \"" + bad.string() + "\" --out \"" + out.string() + "\"");
  CHECK(r.code == 2);
  CHECK(r.out.find("bad.yaml:3:3: unknown key 'plnt'") != std::string::npos);
  CHECK_FALSE(fs::exists(out));

  CHECK(cli("run --config /nonexistent/x.yaml --out " + dir.q()).code == 2);
  CHECK(cli("run").code == 2);
  CHECK(cli("frobnicate").code == 2);
}

TEST_CASE("certify: clean linear run exits 0") {
  TempDir dir("aclqr_cli_cert");
  const Result r = cli("certify --config " + config("case-a-linear") + " --out " + dir.q());
  CHECK(r.code == 0);
  CHECK(fs::exists(dir.path / "certify.report"));
}

TEST_CASE("certify: a tampered log exits 1") {
  TempDir dir("aclqr_cli_tamper");
  REQUIRE(cli("run --config " + config("custom-2d") + " --out " + dir.q()).code == 0);
  const fs::path csv = dir.path / "custom-2d.csv";
  REQUIRE(cli("certify --config " + config("custom-2d") + " --log \"" + csv.string() + "\" --out " +
              dir.q())
              .code == 0);

  aclqr::Provenance prov;
  aclqr::TrajectoryLog log = aclqr::read_log_csv_file(csv.string(), &prov);
  log.theta_hat[400](1) += 0.05;
  {
    std::ofstream out(csv);
    aclqr::write_log_csv(out, log, prov);
  }
  const Result r = cli("certify --config " + config("custom-2d") + " --log \"" + csv.string() +
                       "\" --out " + dir.q());
  CHECK(r.code == 1);
  const fs::path report = dir.path / "custom-2d.certify.report";
  REQUIRE(fs::exists(report));
  CHECK(slurp(report).find("violation=1") != std::string::npos);

  CHECK(cli("certify --config " + config("custom-2d") + " --log /nonexistent.csv --out " + dir.q()).code ==
        2);
}

TEST_CASE("certify: an inflated step size is reported, not failed") {
  TempDir dir("aclqr_cli_mu");
  fs::create_directories(dir.path);
  std::string text = slurp(std::string(ACLQR_CONFIG_DIR) + "/custom-2d.yaml");
  const auto pos = text.find("mu: 0.5");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 7, "mu: 1000");
  const fs::path cfg = dir.path / "big-mu.yaml";
  std::ofstream(cfg) << text;
  const Result r = cli("certify --config \"" + cfg.string() + "\" --out " + dir.q());
  CHECK(r.code == 0);
  const std::string report = slurp(dir.path / "certify.report");
  CHECK(report.find("preconditions unmet") != std::string::npos);
  CHECK(report.find("violation=0") != std::string::npos);
}

TEST_CASE("seed override changes the recorded provenance") {
  TempDir dir("aclqr_cli_seed");
  REQUIRE(cli("run --config " + config("custom-2d") + " --seed 31 --out " + dir.q()).code == 0);
  const std::string csv = slurp(dir.path / "custom-2d.csv");
  CHECK(csv.find("# seed=31\n") != std::string::npos);
  CHECK(slurp(dir.path / "custom-2d.meta").find("non-paper: sim.seed") == std::string::npos);
}

TEST_CASE("dare-check and lipschitz") {
  const Result d = cli("dare-check");
  CHECK(d.code == 0);
  CHECK(d.out.find("PASS") != std::string::npos);
  CHECK(d.out.find("FAIL") == std::string::npos);

  const Result l = cli("lipschitz --grid 5 --threads 1");
  CHECK(l.code == 0);
  CHECK(l.out.find("relative_change") != std::string::npos);
  CHECK(cli("lipschitz --grid 1").code == 2);
}

TEST_CASE("paper-experiments writes the summary") {
  TempDir dir("aclqr_cli_paper");
  const Result r = cli("paper-experiments --steps 300 --threads 1 --out " + dir.q());
  CHECK(r.code == 0);
  CHECK(fs::exists(dir.path / "summary.tsv"));
  CHECK(fs::exists(dir.path / "case-a-nonlinear-frozen.csv"));
}
