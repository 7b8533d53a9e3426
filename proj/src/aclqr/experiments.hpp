#pragma once

// Experiment drivers shared by the C API and the command-line tool.

#include <optional>
#include <string>
#include <vector>

#include "aclqr/config.hpp"
#include "aclqr/diagnostics.hpp"

namespace aclqr {

/// Certificates that apply to the run described by `cfg`:
///   always:                   l2 accounting
///   linear plant, adaptive:   the three LMS inequalities and the
///                             e1 = -D(x,u)(theta_hat - theta) identity
///   linear plant, estimate fixed at the true constant parameter, w = 0,
///   no exploration:           the exact LQR decrease
CertificateReport certify(const ExperimentConfig& cfg, const TrajectoryLog& log,
                          double tol = kDefaultCertificateTolerance);

struct PaperRun {
  std::string name;
  ExperimentConfig cfg;
  std::optional<TrajectoryLog> log;
  std::optional<CertificateReport> report;
  std::string error;
  ErrorKind error_kind = ErrorKind::kNumerical;
};

/// The eight reference runs: {case a, case b} x nonlinear {adaptive, frozen}
/// and {case a, case b} x linear adaptive {without, with} exploration.
std::vector<ExperimentConfig> paper_experiment_configs(std::uint64_t seed, int horizon = 10000);

/// Runs the reference set in parallel, writes per-run outputs and
/// summary.tsv into out_dir (when non-empty). Per-run failures are recorded
/// in the summary and do not stop the others.
std::vector<PaperRun> paper_experiments(const std::string& out_dir, std::uint64_t seed,
                                        int horizon = 10000, double tol = kDefaultCertificateTolerance,
                                        unsigned threads = 0);

std::string format_summary(const std::vector<PaperRun>& runs);

struct SelfCheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Solver and sensitivity self-tests: closed-form scalar DARE, quadrotor
/// residual, Riccati Jacobians against central differences, agreement of
/// the two forms of the sensitivity matrix Z1, gain Jacobian routes.
std::vector<SelfCheckLine> dare_self_check();

}  // namespace aclqr
