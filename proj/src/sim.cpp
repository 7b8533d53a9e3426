#include "aclqr/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "aclqr/controller.hpp"
#include "aclqr/estimator.hpp"

namespace aclqr {

const char* to_string(PlantKind kind) {
  switch (kind) {
    case PlantKind::kQuadrotorNonlinear: return "quadrotor_nonlinear";
    case PlantKind::kQuadrotorLinear: return "quadrotor_linear";
    case PlantKind::kGenericLinear: return "generic_linear";
  }
  return "unknown";
}

const char* to_string(PolicyMode mode) {
  switch (mode) {
    case PolicyMode::kAdaptive: return "adaptive";
    case PolicyMode::kFrozen: return "frozen";
    case PolicyMode::kOracle: return "oracle";
  }
  return "unknown";
}

std::uint64_t exploration_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

void SimConfig::validate() const {
  const Index n = par.n(), m = par.m(), p = par.p();
  require(n >= 1 && p >= 1, "sim: parametrization is empty");
  require(horizon >= 1, "sim: horizon T must be at least 1");
  require(box.dim() == p, "sim: parameter box dimension differs from p");
  require(x0.size() == n && x0.allFinite(), "sim: x0 must be a finite n-vector");
  require(theta_hat0.size() == p && box.contains(theta_hat0),
          "sim: theta_hat0 must lie in the parameter box");
  require(mu > 0.0 && std::isfinite(mu), "sim: step size mu must be positive");
  require(Q.rows() == n && is_positive_definite(Q), "sim: Q must be n x n symmetric PD");
  require(R.rows() == m && is_positive_definite(R), "sim: R must be m x m symmetric PD");
  require(divergence_threshold > 0.0, "sim: divergence threshold must be positive");
  require(recompute_tolerance >= 0.0, "sim: recompute tolerance must be nonnegative");
  if (plant == PlantKind::kGenericLinear) {
    require(disturbance.dim == n, "sim: generic plant disturbance must have dimension n");
  } else {
    quadrotor.validate();
    require(n == 6 && m == 2 && p == 2, "sim: quadrotor plant needs n=6, m=2, p=2");
    require(disturbance.dim == 2, "sim: quadrotor actuation disturbance must have dimension 2");
  }
  if (exploration_std) {
    require(exploration_std->size() == m && (exploration_std->array() >= 0.0).all(),
            "sim: exploration std must be a nonnegative m-vector");
  }
  if (theta_traj.kind == TrajectoryKind::kCustom) {
    require(!theta_traj.sequence.empty(), "sim: custom parameter sequence is empty");
    for (const auto& t : theta_traj.sequence) {
      require(t.size() == p, "sim: custom parameter entry has wrong dimension");
    }
  } else {
    require(theta_traj.base.size() == p, "sim: parameter trajectory base must be a p-vector");
  }
}

TrajectoryLog TrajectoryLog::slice(std::size_t begin, std::size_t end) const {
  require(begin <= end && end <= steps(), "slice: range out of bounds");
  TrajectoryLog out;
  out.n = n;
  out.m = m;
  out.p = p;
  auto cut = [&](const auto& v, std::size_t last) {
    using T = std::decay_t<decltype(v)>;
    return T(v.begin() + static_cast<std::ptrdiff_t>(begin),
             v.begin() + static_cast<std::ptrdiff_t>(last));
  };
  out.x = cut(x, end + 1);
  out.theta = cut(theta, end + 1);
  out.theta_hat = cut(theta_hat, end + 1);
  out.V = cut(V, end + 1);
  out.u = cut(u, end);
  out.w = cut(w, end);
  out.e1 = cut(e1, end);
  out.stepsize_ok = cut(stepsize_ok, end);
  out.diverged = diverged && end == steps();
  return out;
}

void TrajectoryLog::validate_shape() const {
  const std::size_t T = steps();
  require(x.size() == T + 1 && theta.size() == T + 1 && theta_hat.size() == T + 1 &&
              V.size() == T + 1,
          "log: state-indexed series must have T+1 entries");
  require(w.size() == T && e1.size() == T && stepsize_ok.size() == T,
          "log: transition-indexed series must have T entries");
  auto dims = [](const std::vector<Vector>& s, Index d) {
    return std::all_of(s.begin(), s.end(), [d](const Vector& v) { return v.size() == d; });
  };
  require(dims(x, n) && dims(w, n) && dims(e1, n), "log: state-sized entries must have n rows");
  require(dims(u, m), "log: inputs must have m rows");
  require(dims(theta, p) && dims(theta_hat, p), "log: parameters must have p rows");
}

TrajectoryLog run(const SimConfig& cfg) {
  cfg.validate();
  const AffineParametrization& par = cfg.par;
  const Index n = par.n(), m = par.m();

  Rng dist_rng(cfg.seed);
  Rng explore_rng(exploration_seed(cfg.seed));
  PolicyCache cache(cfg.recompute_tolerance);

  TrajectoryLog log;
  log.n = n;
  log.m = m;
  log.p = par.p();
  const auto T = static_cast<std::size_t>(cfg.horizon);
  log.x.reserve(T + 1);
  log.u.reserve(T);

  Vector x = cfg.x0;
  Vector theta = parameter_profile(cfg.theta_traj, cfg.box, 0);
  EstimatorState est{cfg.mode == PolicyMode::kOracle ? theta : cfg.theta_hat0, cfg.mu};

  // Frozen mode keeps the initial policy and its Lyapunov matrix.
  const RiccatiSolution frozen = cfg.mode == PolicyMode::kFrozen
                                     ? ce_lqr_solution(par, cfg.theta_hat0, cfg.Q, cfg.R, cache)
                                     : RiccatiSolution{};

  auto current_solution = [&](std::size_t k) -> const RiccatiSolution& {
    if (cfg.mode == PolicyMode::kFrozen) return frozen;
    try {
      return ce_lqr_solution(par, est.theta_hat, cfg.Q, cfg.R, cache);
    } catch (const DareError& e) {
      throw DareError("step " + std::to_string(k) + ": " + e.what(), e.last_residual());
    }
  };

  log.x.push_back(x);
  log.theta.push_back(theta);
  log.theta_hat.push_back(est.theta_hat);

  for (std::size_t k = 0; k < T; ++k) {
    const RiccatiSolution& sol = current_solution(k);
    log.V.push_back(x.dot(sol.P * x));

    Vector u = apply_policy(sol.K, x);
    if (cfg.exploration_std) {
      for (Index i = 0; i < m; ++i) u(i) += (*cfg.exploration_std)(i) * explore_rng.gaussian();
    }

    const Vector w_raw = disturbance(cfg.disturbance, static_cast<long>(k), dist_rng);
    Vector x_next, w;
    switch (cfg.plant) {
      case PlantKind::kQuadrotorNonlinear:
        w = quadrotor_linear_disturbance(cfg.quadrotor, theta, w_raw);
        x_next = quadrotor_step_nonlinear(cfg.quadrotor, x, u, theta, w_raw);
        break;
      case PlantKind::kQuadrotorLinear:
        w = quadrotor_linear_disturbance(cfg.quadrotor, theta, w_raw);
        x_next = quadrotor_step_linear(cfg.quadrotor, x, u, theta, w);
        break;
      case PlantKind::kGenericLinear: {
        const SystemMatrices sys = eval_system(par, theta);
        w = w_raw;
        x_next = sys.A * x + sys.B * u + w;
        break;
      }
    }

    const Vector x_pred = predict(par, est.theta_hat, x, u);
    log.u.push_back(u);
    log.w.push_back(w);
    log.e1.push_back(x_next - x_pred - w);
    log.stepsize_ok.push_back(step_size_admissible(par, cfg.mu, x, u));

    const Vector theta_next = parameter_profile(cfg.theta_traj, cfg.box, static_cast<long>(k + 1));
    const bool finite = x_next.allFinite();
    const bool diverged = !finite || x_next.norm() > cfg.divergence_threshold;

    // The last transition before the stop is still a full step of the loop.
    if (finite) {
      switch (cfg.mode) {
        case PolicyMode::kAdaptive:
          est = lms_update(est, cfg.box, par, x, u, x_next);
          break;
        case PolicyMode::kOracle:
          est.theta_hat = theta_next;
          break;
        case PolicyMode::kFrozen:
          break;
      }
    }

    x = x_next;
    theta = theta_next;
    log.x.push_back(x);
    log.theta.push_back(theta);
    log.theta_hat.push_back(est.theta_hat);

    if (diverged) {
      log.diverged = true;
      break;
    }
  }
  log.V.push_back(x.dot(current_solution(log.steps()).P * x));
  return log;
}

std::vector<BatchResult> run_batch(const std::vector<SimConfig>& configs, unsigned threads) {
  std::vector<BatchResult> results(configs.size());
  if (configs.empty()) return results;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(configs.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i].log = run(configs[i]);
      } catch (const Error& e) {
        results[i].error = e.what();
        results[i].error_kind = e.kind();
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace aclqr
