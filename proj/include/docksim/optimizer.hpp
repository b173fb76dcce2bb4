#pragma once

#include <Eigen/Core>
#include <functional>
#include <stdexcept>
#include <string>

namespace docksim {

/// Smooth objective over a box-constrained decision vector.
struct NlpProblem {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> objective;
  /// Optional analytic gradient; central differences are used when absent.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct NlpOptions {
  int max_iter = 500;
  /// Convergence threshold on the infinity norm of the projected gradient.
  double tol = 1e-8;
  /// Number of curvature pairs kept for the quasi-Newton direction.
  int history = 10;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
};

struct NlpSolution {
  Eigen::VectorXd z_star;
  double objective_value = 0.0;
  /// ||P(z - grad) - z||_inf at z_star.
  double kkt_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Thrown when the objective or gradient stops being finite. Carries the last
/// iterate at which the objective was still finite.
class SolverDivergedError : public std::runtime_error {
 public:
  SolverDivergedError(const std::string& message, Eigen::VectorXd last_iterate)
      : std::runtime_error(message), last_iterate_(std::move(last_iterate)) {}

  const Eigen::VectorXd& last_iterate() const { return last_iterate_; }

 private:
  Eigen::VectorXd last_iterate_;
};

/// Central-difference gradient with per-coordinate step
/// h = max(1e-6, 1e-7 |z_i|). Evaluation points are clamped to the box and
/// the difference is divided by the actual coordinate spread.
Eigen::VectorXd finite_diff_gradient(const NlpProblem& problem,
                                     const Eigen::VectorXd& z);

/// Minimizes the objective over the box. Projected L-BFGS: gradient
/// components of variables pinned at an active bound are masked out of the
/// quasi-Newton direction, trial points are projected back onto the box, and
/// steps are accepted under a monotone Armijo condition. Deterministic:
/// identical inputs produce bit-identical iterates.
NlpSolution solve(const NlpProblem& problem, const Eigen::VectorXd& z0,
                  const NlpOptions& opts = {});

}  // namespace docksim
