#include "rplap/newton.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rplap/errors.hpp"

namespace rplap {

namespace {

bool round_off_step(const Eigen::VectorXd& step, const Eigen::VectorXd& u) {
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + u.lpNorm<Eigen::Infinity>());
  return step.lpNorm<Eigen::Infinity>() <= floor;
}

}  // namespace

NewtonReport newton_solve(const ResidualMap& residual, const JacobianMap& jacobian,
                          Eigen::VectorXd& u, const NewtonSettings& settings) {
  Eigen::VectorXd r = residual(u);
  double norm = r.lpNorm<Eigen::Infinity>();
  if (!std::isfinite(norm)) throw NewtonDivergence("Newton: residual not finite at the initial guess");

  NewtonReport report;
  for (int it = 0;; ++it) {
    report.iterations = it;
    report.residual_norm = norm;
    if (norm <= settings.tolerance) return report;
    if (it == settings.max_iterations) {
      throw NewtonDivergence("Newton: no convergence after " + std::to_string(it) +
                             " iterations (residual " + std::to_string(norm) + ")");
    }

    Eigen::VectorXd step;
    try {
      step = -jacobian(u).solve(r);
    } catch (const NumericalError& e) {
      throw NewtonDivergence(std::string("Newton: singular Jacobian: ") + e.what());
    }
    if (!step.allFinite()) throw NewtonDivergence("Newton: non-finite step");
    if (round_off_step(step, u)) {
      u += step;
      report.iterations = it + 1;
      try {
        report.residual_norm = residual(u).lpNorm<Eigen::Infinity>();
      } catch (const SaturationError&) {
        report.residual_norm = norm;
      }
      return report;
    }

    double theta = 1.0;
    bool accepted = false;
    for (int k = 0; k <= settings.max_backtracks; ++k, theta *= 0.5) {
      Eigen::VectorXd trial = u + theta * step;
      Eigen::VectorXd trial_residual;
      try {
        trial_residual = residual(trial);
      } catch (const SaturationError&) {
        continue;
      }
      const double trial_norm = trial_residual.lpNorm<Eigen::Infinity>();
      if (std::isfinite(trial_norm) && trial_norm <= (1.0 - settings.armijo * theta) * norm) {
        u = std::move(trial);
        r = std::move(trial_residual);
        norm = trial_norm;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw NewtonDivergence("Newton: line search exhausted (residual " + std::to_string(norm) + ")");
    }
  }
}

}  // namespace rplap
