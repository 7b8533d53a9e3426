#include "aclqr/controller.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "aclqr/error.hpp"

namespace aclqr {
namespace {

std::string format_vector(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ")";
  return os.str();
}

}  // namespace

const RiccatiSolution& ce_lqr_solution(const AffineParametrization& par, const Vector& theta_hat,
                                       const Matrix& Q, const Matrix& R, PolicyCache& cache) {
  if (cache.theta_ && cache.theta_->size() == theta_hat.size() &&
      (theta_hat - *cache.theta_).norm() <= cache.recompute_tolerance_) {
    return cache.solution_;
  }
  const SystemMatrices sys = eval_system(par, theta_hat);
  try {
    cache.solution_ = solve_dare(sys.A, sys.B, Q, R);
  } catch (const DareError& e) {
    throw DareError(std::string(e.what()) + " at theta_hat = " + format_vector(theta_hat),
                    e.last_residual());
  }
  cache.theta_ = theta_hat;
  ++cache.solves_;
  return cache.solution_;
}

Matrix ce_lqr_gain(const AffineParametrization& par, const Vector& theta_hat, const Matrix& Q,
                   const Matrix& R, PolicyCache& cache) {
  return ce_lqr_solution(par, theta_hat, Q, R, cache).K;
}

Vector apply_policy(const Matrix& K, const Vector& x) {
  require(K.cols() == x.size(), "apply_policy: K and x do not conform");
  return K * x;
}

std::vector<Vector> box_grid(const ParamBox& box, int per_dim) {
  require(per_dim >= 2, "box_grid: need at least 2 points per dimension");
  const Index p = box.dim();
  std::size_t total = 1;
  for (Index i = 0; i < p; ++i) total *= static_cast<std::size_t>(per_dim);
  std::vector<Vector> points;
  points.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Vector theta(p);
    std::size_t rem = flat;
    for (Index i = 0; i < p; ++i) {
      const auto idx = static_cast<double>(rem % per_dim);
      rem /= per_dim;
      const double t = idx / (per_dim - 1);
      theta(i) = box.lower()(i) + t * (box.upper()(i) - box.lower()(i));
    }
    points.push_back(std::move(theta));
  }
  return points;
}

double estimate_gain_lipschitz(const AffineParametrization& par, const ParamBox& box,
                               const Matrix& Q, const Matrix& R, int grid_per_dim,
                               unsigned threads) {
  require(box.dim() == par.p(), "estimate_gain_lipschitz: box dimension differs from p");
  const std::vector<Vector> grid = box_grid(box, grid_per_dim);
  std::vector<Matrix> gains(grid.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        const SystemMatrices sys = eval_system(par, grid[i]);
        gains[i] = solve_dare(sys.A, sys.B, Q, R).K;
      } catch (const DareError& e) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::make_exception_ptr(DareError(
              std::string(e.what()) + " at grid point theta = " + format_vector(grid[i]),
              e.last_residual()));
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  double best = 0.0;
  std::size_t stride = 1;
  for (Index axis = 0; axis < box.dim(); ++axis) {
    if (box.upper()(axis) > box.lower()(axis)) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto coord = (i / stride) % static_cast<std::size_t>(grid_per_dim);
        if (coord + 1 == static_cast<std::size_t>(grid_per_dim)) continue;
        const std::size_t j = i + stride;
        const double dist = (grid[j] - grid[i]).norm();
        best = std::max(best, spectral_norm(gains[j] - gains[i]) / dist);
      }
    }
    stride *= static_cast<std::size_t>(grid_per_dim);
  }
  return best;
}

}  // namespace aclqr
