// Command-line experiment runner over the C API.
//
// Exit codes: 0 ok, 1 certificate violation, 2 configuration or input error,
// 3 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "aclqr.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code(aclqr_status s) {
  switch (s) {
    case ACLQR_OK: return kExitOk;
    case ACLQR_CERTIFICATE_VIOLATION: return kExitViolation;
    case ACLQR_NUMERICAL_ERROR: return kExitNumerical;
    case ACLQR_CONFIG_ERROR:
    case ACLQR_IO_ERROR:
    case ACLQR_INVALID_ARGUMENT: return kExitConfig;
  }
  return kExitNumerical;
}

int report_failure(aclqr_status s) {
  std::cerr << "aclqr: " << aclqr_last_error() << "\n";
  return exit_code(s);
}

struct ExperimentDeleter {
  void operator()(aclqr_experiment* p) const { aclqr_experiment_free(p); }
};
struct LogDeleter {
  void operator()(aclqr_log* p) const { aclqr_log_free(p); }
};
struct ReportDeleter {
  void operator()(aclqr_report* p) const { aclqr_report_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { aclqr_string_free(p); }
};
using ExperimentPtr = std::unique_ptr<aclqr_experiment, ExperimentDeleter>;
using LogPtr = std::unique_ptr<aclqr_log, LogDeleter>;
using ReportPtr = std::unique_ptr<aclqr_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  double tolerance = 1e-8;
  std::string log;
  int grid = 15;
  unsigned threads = 0;
  int steps = 10000;
};

aclqr_status load(const Options& o, ExperimentPtr& exp) {
  aclqr_experiment* raw = nullptr;
  const aclqr_status s = o.config.empty() ? aclqr_experiment_load_preset("case-a-nonlinear", &raw)
                                          : aclqr_experiment_load_file(o.config.c_str(), &raw);
  exp.reset(raw);
  if (s != ACLQR_OK) return s;
  if (o.seed) return aclqr_experiment_set_seed(exp.get(), *o.seed);
  return ACLQR_OK;
}

std::string stem_of(const std::filesystem::path& csv) { return csv.stem().string(); }

int cmd_run(const Options& o) {
  ExperimentPtr exp;
  if (aclqr_status s = load(o, exp); s != ACLQR_OK) return report_failure(s);
  aclqr_log* raw_log = nullptr;
  if (aclqr_status s = aclqr_experiment_run(exp.get(), &raw_log); s != ACLQR_OK) {
    return report_failure(s);
  }
  LogPtr log(raw_log);
  aclqr_report* raw_report = nullptr;
  const aclqr_status cert = aclqr_certify(exp.get(), log.get(), o.tolerance, &raw_report);
  ReportPtr report(raw_report);
  if (!report) return report_failure(cert);
  if (aclqr_status s = aclqr_experiment_write_outputs(exp.get(), log.get(), report.get(), o.out.c_str());
      s != ACLQR_OK) {
    return report_failure(s);
  }
  std::cout << "steps=" << aclqr_log_steps(log.get()) << " diverged=" << aclqr_log_diverged(log.get())
            << " bounded=" << aclqr_report_bounded(report.get())
            << " violation=" << aclqr_report_violated(report.get()) << " out=" << o.out << "\n";
  if (cert == ACLQR_CERTIFICATE_VIOLATION) std::cerr << "aclqr: certificate violated\n";
  return exit_code(cert);
}

int cmd_certify(const Options& o) {
  ExperimentPtr exp;
  if (aclqr_status s = load(o, exp); s != ACLQR_OK) return report_failure(s);
  LogPtr log;
  aclqr_log* raw_log = nullptr;
  if (o.log.empty()) {
    if (aclqr_status s = aclqr_experiment_run(exp.get(), &raw_log); s != ACLQR_OK) {
      return report_failure(s);
    }
  } else if (aclqr_status s = aclqr_log_read_csv(o.log.c_str(), &raw_log); s != ACLQR_OK) {
    return report_failure(s);
  }
  log.reset(raw_log);

  aclqr_report* raw_report = nullptr;
  const aclqr_status cert = aclqr_certify(exp.get(), log.get(), o.tolerance, &raw_report);
  ReportPtr report(raw_report);
  if (!report) return report_failure(cert);

  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  const std::string name = o.log.empty() ? "certify" : stem_of(o.log) + ".certify";
  const std::string path = (std::filesystem::path(o.out) / (name + ".report")).string();
  if (aclqr_status s = aclqr_report_write(report.get(), path.c_str()); s != ACLQR_OK) {
    return report_failure(s);
  }
  char* text = nullptr;
  if (aclqr_report_format(report.get(), &text) == ACLQR_OK) {
    StringPtr owned(text);
    std::cout << owned.get();
  }
  if (cert == ACLQR_CERTIFICATE_VIOLATION) std::cerr << "aclqr: certificate violated\n";
  return exit_code(cert);
}

int cmd_paper(const Options& o) {
  char* summary = nullptr;
  const aclqr_status s = aclqr_paper_experiments(o.out.c_str(), o.seed.value_or(0), o.steps,
                                                 o.tolerance, o.threads, &summary);
  StringPtr owned(summary);
  if (owned) std::cout << owned.get();
  if (s != ACLQR_OK) return report_failure(s);
  return kExitOk;
}

int cmd_lipschitz(const Options& o) {
  ExperimentPtr exp;
  if (aclqr_status s = load(o, exp); s != ACLQR_OK) return report_failure(s);
  double coarse = 0.0, fine = 0.0;
  if (aclqr_status s = aclqr_gain_lipschitz(exp.get(), o.grid, o.threads, &coarse); s != ACLQR_OK) {
    return report_failure(s);
  }
  if (aclqr_status s = aclqr_gain_lipschitz(exp.get(), 2 * o.grid, o.threads, &fine); s != ACLQR_OK) {
    return report_failure(s);
  }
  std::printf("grid=%d lipschitz=%.10g\n", o.grid, coarse);
  std::printf("grid=%d lipschitz=%.10g\n", 2 * o.grid, fine);
  std::printf("relative_change=%.3g\n", std::abs(fine - coarse) / std::max(coarse, 1e-300));
  return kExitOk;
}

int cmd_dare_check() {
  char* text = nullptr;
  const aclqr_status s = aclqr_dare_self_check(&text);
  StringPtr owned(text);
  if (owned) std::cout << owned.get();
  if (s != ACLQR_OK) return report_failure(s);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certainty-equivalent adaptive LQR experiments"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd, bool config_required) {
    auto* opt = cmd->add_option("--config", o.config, "Experiment file (YAML)");
    if (config_required) opt->required();
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Override the configured seed");
    cmd->add_option("--tolerance", o.tolerance, "Certificate slack tolerance")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
  };

  auto* run = app.add_subcommand("run", "Simulate one experiment and write CSV, report and metadata");
  add_common(run, true);

  auto* paper = app.add_subcommand("paper-experiments", "Run the eight reference experiments");
  add_common(paper, false);
  paper->add_option("--steps", o.steps, "Horizon of every run")->capture_default_str()->check(CLI::PositiveNumber);
  paper->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* certify = app.add_subcommand("certify", "Evaluate the runtime certificates");
  add_common(certify, true);
  certify->add_option("--log", o.log, "Certify this trajectory CSV instead of simulating");

  auto* lipschitz = app.add_subcommand("lipschitz", "Estimate the Lipschitz constant of the LQR gain over the parameter box");
  add_common(lipschitz, false);
  lipschitz->add_option("--grid", o.grid, "Points per axis of the coarse grid")->capture_default_str()->check(CLI::Range(2, 1000));
  lipschitz->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* dare_check = app.add_subcommand("dare-check", "Run the DARE solver and Jacobian self-tests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) return cmd_run(o);
  if (paper->parsed()) return cmd_paper(o);
  if (certify->parsed()) return cmd_certify(o);
  if (lipschitz->parsed()) return cmd_lipschitz(o);
  if (dare_check->parsed()) return cmd_dare_check();
  return kExitConfig;
}
