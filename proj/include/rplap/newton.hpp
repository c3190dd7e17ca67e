#pragma once

#include <Eigen/Core>
#include <functional>

#include "rplap/tridiagonal.hpp"

namespace rplap {

struct NewtonSettings {
  double tolerance = 1e-10;  // max-norm of the residual
  int max_iterations = 100;
  int max_backtracks = 40;
  double armijo = 1e-4;
};

struct NewtonReport {
  int iterations = 0;
  double residual_norm = 0.0;
};

using ResidualMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianMap = std::function<TridiagonalXd(const Eigen::VectorXd&)>;

/// Damped Newton iteration for a tridiagonal system, updating `u` in place.
///
/// Steps are halved until the max-norm residual satisfies the Armijo
/// condition; a trial point whose residual cannot be evaluated (saturation)
/// counts as a rejected step. Besides the residual tolerance, a full step
/// below 64 eps (1 + |u|) is accepted as converged: on strongly graded grids
/// flux cancellation puts the residual's round-off floor above 1e-10.
/// Throws NewtonDivergence when the line search is exhausted or the
/// iteration budget runs out.
NewtonReport newton_solve(const ResidualMap& residual, const JacobianMap& jacobian,
                          Eigen::VectorXd& u, const NewtonSettings& settings = {});

}  // namespace rplap
