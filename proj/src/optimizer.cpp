#include "docksim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace docksim {

namespace {

void validate_problem(const NlpProblem& problem) {
  if (problem.dim < 1) {
    throw std::invalid_argument("NlpProblem: dim must be >= 1");
  }
  if (!problem.objective) {
    throw std::invalid_argument("NlpProblem: objective is required");
  }
  if (problem.lower.size() != problem.dim ||
      problem.upper.size() != problem.dim) {
    throw std::invalid_argument("NlpProblem: bound sizes must match dim");
  }
  for (int i = 0; i < problem.dim; ++i) {
    if (!(problem.lower[i] <= problem.upper[i])) {
      throw std::invalid_argument("NlpProblem: lower[i] must be <= upper[i]");
    }
  }
}

Eigen::VectorXd clamp_to_box(const NlpProblem& problem,
                             const Eigen::VectorXd& z) {
  return z.cwiseMax(problem.lower).cwiseMin(problem.upper);
}

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho = 0.0;
};

// Two-loop recursion over the stored curvature pairs, applied to the masked
// gradient. Returns an approximation of H * g.
Eigen::VectorXd apply_inverse_hessian(const std::vector<CurvaturePair>& pairs,
                                      const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  const int m = static_cast<int>(pairs.size());
  std::vector<double> alpha(m, 0.0);
  for (int i = m - 1; i >= 0; --i) {
    alpha[i] = pairs[i].rho * pairs[i].s.dot(q);
    q -= alpha[i] * pairs[i].y;
  }
  if (m > 0) {
    const CurvaturePair& last = pairs.back();
    const double gamma = last.s.dot(last.y) / last.y.squaredNorm();
    q *= gamma;
  }
  for (int i = 0; i < m; ++i) {
    const double beta = pairs[i].rho * pairs[i].y.dot(q);
    q += (alpha[i] - beta) * pairs[i].s;
  }
  return q;
}

}  // namespace

Eigen::VectorXd finite_diff_gradient(const NlpProblem& problem,
                                     const Eigen::VectorXd& z) {
  validate_problem(problem);
  Eigen::VectorXd grad(problem.dim);
  Eigen::VectorXd zp = z;
  Eigen::VectorXd zm = z;
  for (int i = 0; i < problem.dim; ++i) {
    const double h = std::max(1e-6, 1e-7 * std::abs(z[i]));
    const double up = std::min(z[i] + h, problem.upper[i]);
    const double down = std::max(z[i] - h, problem.lower[i]);
    const double spread = up - down;
    if (spread <= 0.0) {
      grad[i] = 0.0;
      continue;
    }
    zp[i] = up;
    zm[i] = down;
    grad[i] = (problem.objective(zp) - problem.objective(zm)) / spread;
    zp[i] = z[i];
    zm[i] = z[i];
  }
  return grad;
}

NlpSolution solve(const NlpProblem& problem, const Eigen::VectorXd& z0,
                  const NlpOptions& opts) {
  validate_problem(problem);
  if (z0.size() != problem.dim) {
    throw std::invalid_argument("solve: z0 size must match problem.dim");
  }

  const auto eval_gradient = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return problem.gradient ? problem.gradient(z)
                            : finite_diff_gradient(problem, z);
  };

  Eigen::VectorXd z = clamp_to_box(problem, z0);
  double f = problem.objective(z);
  if (!std::isfinite(f)) {
    throw SolverDivergedError("solve: objective non-finite at initial point",
                              z);
  }
  Eigen::VectorXd g = eval_gradient(z);
  if (!g.allFinite()) {
    throw SolverDivergedError("solve: gradient non-finite at initial point",
                              z);
  }

  const auto projected_gradient_norm = [&](const Eigen::VectorXd& point,
                                           const Eigen::VectorXd& grad) {
    return (clamp_to_box(problem, point - grad) - point)
        .cwiseAbs()
        .maxCoeff();
  };

  // A coordinate is pinned when it sits on a bound the gradient pushes
  // against; pinned coordinates are frozen out of the search direction.
  const auto pinned_mask = [&](const Eigen::VectorXd& point,
                               const Eigen::VectorXd& grad) {
    std::vector<bool> pinned(problem.dim, false);
    for (int i = 0; i < problem.dim; ++i) {
      pinned[i] = (point[i] <= problem.lower[i] && grad[i] > 0.0) ||
                  (point[i] >= problem.upper[i] && grad[i] < 0.0);
    }
    return pinned;
  };

  std::vector<CurvaturePair> pairs;
  std::vector<bool> prev_pinned(problem.dim, false);
  double kkt = projected_gradient_norm(z, g);
  int iterations = 0;
  bool converged = kkt <= opts.tol;

  for (int iter = 0; iter < opts.max_iter && !converged; ++iter) {
    const std::vector<bool> pinned = pinned_mask(z, g);
    if (pinned != prev_pinned) {
      pairs.clear();  // curvature collected on a different face
      prev_pinned = pinned;
    }

    Eigen::VectorXd masked_g = g;
    for (int i = 0; i < problem.dim; ++i) {
      if (pinned[i]) masked_g[i] = 0.0;
    }

    Eigen::VectorXd direction = -apply_inverse_hessian(pairs, masked_g);
    for (int i = 0; i < problem.dim; ++i) {
      if (pinned[i]) direction[i] = 0.0;
    }
    const double descent = direction.dot(g);
    if (!(descent < -1e-14 * direction.norm() * g.norm())) {
      direction = -masked_g;
      pairs.clear();
    }

    // Backtracking Armijo line search along the projected path.
    double alpha = opts.initial_step;
    bool accepted = false;
    bool saw_nonfinite = false;
    Eigen::VectorXd z_trial;
    double f_trial = 0.0;
    for (int ls = 0; ls < 60; ++ls) {
      z_trial = clamp_to_box(problem, z + alpha * direction);
      const Eigen::VectorXd displacement = z_trial - z;
      if (displacement.isZero(0.0)) {
        break;  // projection swallowed the whole step
      }
      const double slope = g.dot(displacement);
      f_trial = problem.objective(z_trial);
      if (!std::isfinite(f_trial)) {
        saw_nonfinite = true;
      } else if (slope < 0.0 && f_trial <= f + opts.armijo_c * slope) {
        accepted = true;
        break;
      }
      alpha *= opts.backtrack;
    }

    if (!accepted) {
      if (saw_nonfinite) {
        throw SolverDivergedError(
            "solve: objective non-finite along the search direction", z);
      }
      break;  // numerically stationary
    }

    Eigen::VectorXd g_trial = eval_gradient(z_trial);
    if (!g_trial.allFinite()) {
      throw SolverDivergedError("solve: gradient non-finite at accepted point",
                                z);
    }

    // Powell-damped update: the Armijo-only search gives no curvature
    // guarantee, so blend y toward B0*s whenever s'y is too small. Keeps the
    // memory fresh with s'y = 0.2 * s'B0 s at worst.
    CurvaturePair pair;
    pair.s = z_trial - z;
    pair.y = g_trial - g;
    double gamma = 1.0;
    if (!pairs.empty()) {
      const CurvaturePair& last = pairs.back();
      gamma = last.s.dot(last.y) / last.y.squaredNorm();
    }
    const double sy = pair.s.dot(pair.y);
    const double sBs = pair.s.squaredNorm() / gamma;
    if (sy < 0.2 * sBs) {
      const double theta = 0.8 * sBs / (sBs - sy);
      pair.y = theta * pair.y + (1.0 - theta) / gamma * pair.s;
    }
    const double sy_final = pair.s.dot(pair.y);
    if (sy_final > 1e-12 * pair.s.norm() * pair.y.norm()) {
      pair.rho = 1.0 / sy_final;
      pairs.push_back(std::move(pair));
      if (static_cast<int>(pairs.size()) > opts.history) {
        pairs.erase(pairs.begin());
      }
    }

    z = std::move(z_trial);
    f = f_trial;
    g = std::move(g_trial);
    kkt = projected_gradient_norm(z, g);
    ++iterations;
    converged = kkt <= opts.tol;
  }

  NlpSolution solution;
  solution.z_star = std::move(z);
  solution.objective_value = f;
  solution.kkt_residual = kkt;
  solution.iterations = iterations;
  solution.converged = converged;
  return solution;
}

}  // namespace docksim
