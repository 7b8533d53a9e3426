#include "aclqr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "aclqr/controller.hpp"
#include "aclqr/dare.hpp"
#include "aclqr/error.hpp"
#include "aclqr/log_io.hpp"

namespace aclqr {
namespace {

bool is_linear(const ExperimentConfig& cfg) { return cfg.linear_plant(); }

bool estimate_is_true_constant(const TrajectoryLog& log) {
  for (std::size_t k = 0; k < log.theta.size(); ++k) {
    if (log.theta[k] != log.theta.front() || log.theta_hat[k] != log.theta.front()) return false;
  }
  for (const auto& w : log.w) {
    if (!w.isZero(0.0)) return false;
  }
  return true;
}

InequalitySummary prediction_identity(const ExperimentConfig& cfg, const TrajectoryLog& log,
                                      double tol) {
  InequalitySummary s;
  s.name = "prediction_error_identity";
  for (std::size_t k = 0; k < log.steps(); ++k) {
    const Matrix D = regression_terms(cfg.sim.par, log.x[k], log.u[k]).D;
    const Vector phi = log.theta_hat[k] - log.theta[k];
    const double scale = 1.0 + log.x[k + 1].norm() + D.norm() * phi.norm();
    const double slack = tol - (log.e1[k] + D * phi).norm() / scale;
    s.min_slack = std::min(s.min_slack, slack);
    if (slack < 0.0 && !s.first_violation) s.first_violation = k;
  }
  return s;
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  require(pos != std::string::npos, "preset text lacks '" + from + "'");
  return text.replace(pos, from.size(), to);
}

}  // namespace

CertificateReport certify(const ExperimentConfig& cfg, const TrajectoryLog& log, double tol) {
  require(tol >= 0.0, "certify: tolerance must be nonnegative");
  log.validate_shape();
  require(log.n == cfg.sim.par.n() && log.m == cfg.sim.par.m() && log.p == cfg.sim.par.p(),
          "certify: log dimensions do not match the configuration");
  CertificateReport report = l2_gain_report(log);
  if (!is_linear(cfg)) return report;

  if (cfg.sim.mode == PolicyMode::kAdaptive) {
    add_lms_certificates(report, log, cfg.sim.mu, cfg.sim.box.diameter(), tol);
    report.inequalities.push_back(prediction_identity(cfg, log, tol));
  } else if (!cfg.sim.exploration_std && estimate_is_true_constant(log)) {
    constexpr double kDecreaseTolerance = 1e-9;
    const DecreaseCheck c = check_frozen_lqr_decrease(log, cfg.sim.Q, cfg.sim.R, kDecreaseTolerance);
    report.inequalities.push_back({"lqr_exact_decrease", kDecreaseTolerance - c.max_relative_defect,
                                   c.first_violation, 1.0, ""});
  }
  return report;
}

std::vector<ExperimentConfig> paper_experiment_configs(std::uint64_t seed, int horizon) {
  require(horizon >= 1, "paper experiments: horizon must be >= 1");
  struct Spec {
    const char* preset;
    const char* name;
    const char* mode;
    bool explore;
  };
  static const Spec kRuns[] = {
      {"case-a-nonlinear", "case-a-nonlinear-adaptive", "adaptive", false},
      {"case-a-nonlinear", "case-a-nonlinear-frozen", "frozen", false},
      {"case-b-nonlinear", "case-b-nonlinear-adaptive", "adaptive", false},
      {"case-b-nonlinear", "case-b-nonlinear-frozen", "frozen", false},
      {"case-a-linear", "case-a-linear-no-noise", "adaptive", false},
      {"case-a-linear", "case-a-linear-noise", "adaptive", true},
      {"case-b-linear", "case-b-linear-no-noise", "adaptive", false},
      {"case-b-linear", "case-b-linear-noise", "adaptive", true},
  };
  std::vector<ExperimentConfig> out;
  for (const Spec& s : kRuns) {
    std::string text = preset_text(s.preset);
    std::string controller = std::string("  mode: ") + s.mode + "\n";
    if (s.explore) controller += "  exploration_std: [0.5, 0.1]\n";
    text = replace_once(text, "  mode: adaptive\n", controller);
    text = replace_once(text, "  T: 10000\n",
                        "  T: " + std::to_string(horizon) + "\n  seed: " + std::to_string(seed) + "\n");
    text = replace_once(text, std::string("  stem: ") + s.preset + "\n",
                        std::string("  stem: ") + s.name + "\n");
    out.push_back(parse_experiment(text, std::string("preset:") + s.name));
  }
  return out;
}

std::vector<PaperRun> paper_experiments(const std::string& out_dir, std::uint64_t seed,
                                        int horizon, double tol, unsigned threads) {
  const std::vector<ExperimentConfig> cfgs = paper_experiment_configs(seed, horizon);
  std::vector<SimConfig> sims;
  for (const auto& c : cfgs) sims.push_back(c.sim);
  const std::vector<BatchResult> results = run_batch(sims, threads);

  std::vector<PaperRun> runs;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    PaperRun r;
    r.name = cfgs[i].stem;
    r.cfg = cfgs[i];
    if (results[i].log) {
      r.log = std::move(*results[i].log);
      try {
        r.report = certify(r.cfg, *r.log, tol);
        if (!out_dir.empty()) write_run_outputs(out_dir, r.cfg, *r.log, *r.report);
      } catch (const Error& e) {
        r.error = e.what();
        r.error_kind = e.kind();
      }
    } else {
      r.error = results[i].error;
      r.error_kind = results[i].error_kind;
    }
    runs.push_back(std::move(r));
  }
  if (!out_dir.empty()) {
    write_file_atomic((std::filesystem::path(out_dir) / "summary.tsv").string(),
                      format_summary(runs));
  }
  return runs;
}

std::string format_summary(const std::vector<PaperRun>& runs) {
  std::ostringstream os;
  if (!runs.empty()) {
    os << "# config_sha256 per run is recorded in each run's files\n";
    os << "# seed=" << runs.front().cfg.sim.seed << "\n";
  }
  os << "run\tplant\tmode\texploration\tsteps\tdiverged\tfinal_state_norm\tfinal_position_norm"
        "\testimate_error\tinertia_estimate_error\tmin_certificate_slack\tviolation\terror\n";
  for (const auto& r : runs) {
    os << r.name << '\t' << to_string(r.cfg.sim.plant) << '\t' << to_string(r.cfg.sim.mode) << '\t'
       << (r.cfg.sim.exploration_std ? 1 : 0) << '\t';
    if (r.log) {
      const TrajectoryLog& log = *r.log;
      const Vector& x = log.x.back();
      const Vector phi = log.theta_hat.back() - log.theta.back();
      os << log.steps() << '\t' << (log.diverged ? 1 : 0) << '\t' << format_double(x.norm()) << '\t'
         << format_double(x.head(2).norm()) << '\t' << format_double(phi.norm()) << '\t'
         << format_double(std::abs(phi(phi.size() - 1))) << '\t';
    } else {
      os << "-\t-\t-\t-\t-\t-\t";
    }
    if (r.report && !r.report->inequalities.empty()) {
      double slack = std::numeric_limits<double>::infinity();
      for (const auto& s : r.report->inequalities) slack = std::min(slack, s.min_slack);
      os << format_double(slack) << '\t' << (r.report->any_violation() ? 1 : 0) << '\t';
    } else {
      os << "-\t" << (r.report ? "0" : "-") << '\t';
    }
    std::string err = r.error.empty() ? "-" : r.error;
    for (char& c : err) {
      if (c == '\t' || c == '\n') c = ' ';
    }
    os << err << '\n';
  }
  return os.str();
}

std::vector<SelfCheckLine> dare_self_check() {
  std::vector<SelfCheckLine> lines;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    lines.push_back({name, pass, detail});
  };
  auto sci = [](double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
  };

  {
    const Matrix one = Matrix::Ones(1, 1);
    const RiccatiSolution s = solve_dare(one, one, one, one);
    const double p_err = std::abs(s.P(0, 0) - (1.0 + std::sqrt(5.0)) / 2.0);
    const double k_err = std::abs(s.K(0, 0) + (std::sqrt(5.0) - 1.0) / 2.0);
    add("scalar_closed_form", p_err <= 1e-9 && k_err <= 1e-9,
        "|P - golden| = " + sci(p_err) + ", |K - K*| = " + sci(k_err));
  }

  const AffineParametrization quad = quadrotor_parametrization(QuadrotorParams{});
  Vector theta_ref(2);
  theta_ref << 0.0, 250.0;
  const SystemMatrices qs = eval_system(quad, theta_ref);
  const Matrix Qq = Matrix::Identity(6, 6);
  const Matrix Rq = 10.0 * Matrix::Identity(2, 2);
  {
    const RiccatiSolution s = solve_dare(qs.A, qs.B, Qq, Rq);
    add("quadrotor_residual", s.residual <= 1e-10, "residual = " + sci(s.residual));
  }

  auto jacobian_check = [&](const std::string& name, const Matrix& A, const Matrix& B,
                            const Matrix& Q, const Matrix& R) {
    const RiccatiSolution sol = solve_dare(A, B, Q, R);
    const RiccatiJacobians J = riccati_jacobians(A, B, Q, R, sol);
    const RiccatiSensitivity S = riccati_sensitivity(A, B, R, sol);
    const Index n = A.rows(), m = B.cols();
    Matrix fdA(n * n, n * n), fdB(n * n, n * m);
    const double h = 1e-5;
    for (Index c = 0; c < n * n; ++c) {
      Matrix Ap = A, Am = A;
      Ap.data()[c] += h;
      Am.data()[c] -= h;
      fdA.col(c) = vec(solve_dare(Ap, B, Q, R).P - solve_dare(Am, B, Q, R).P) / (2 * h);
    }
    for (Index c = 0; c < n * m; ++c) {
      Matrix Bp = B, Bm = B;
      Bp.data()[c] += h;
      Bm.data()[c] -= h;
      fdB.col(c) = vec(solve_dare(A, Bp, Q, R).P - solve_dare(A, Bm, Q, R).P) / (2 * h);
    }
    const double ea = (J.dP_dA - fdA).norm() / std::max(1.0, fdA.norm());
    const double eb = (J.dP_dB - fdB).norm() / std::max(1.0, fdB.norm());
    const double ez = (S.Z1 - S.Z1_closed_loop).norm() / std::max(1.0, S.Z1.norm());
    add(name, ea <= 1e-5 && eb <= 1e-5 && ez <= 1e-10,
        "dP/dA rel err " + sci(ea) + ", dP/dB rel err " + sci(eb) + ", Z1 forms differ by " + sci(ez));
  };

  jacobian_check("jacobians_quadrotor", qs.A, qs.B, Qq, Rq);
  Rng rng(2024);
  for (int t = 0; t < 3; ++t) {
    const Index n = 2 + t, m = 1 + (t % 2);
    Matrix A(n, n), B(n, m);
    for (Index i = 0; i < A.size(); ++i) A.data()[i] = 0.6 * rng.gaussian();
    for (Index i = 0; i < B.size(); ++i) B.data()[i] = rng.gaussian();
    jacobian_check("jacobians_random_" + std::to_string(t), A, B, Matrix::Identity(n, n),
                   Matrix::Identity(m, m));
  }

  {
    const Matrix ga = gain_jacobian_analytic(quad, theta_ref, Qq, Rq);
    const Matrix gf = gain_jacobian_fd(quad, theta_ref, Qq, Rq, 1e-4);
    const double e = (ga - gf).norm() / std::max(1e-12, gf.norm());
    add("gain_jacobian_routes", e <= 1e-5, "rel diff " + sci(e));
  }
  return lines;
}

}  // namespace aclqr
