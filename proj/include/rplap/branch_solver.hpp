#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "rplap/discrete_operator.hpp"
#include "rplap/geometry.hpp"
#include "rplap/newton.hpp"
#include "rplap/nonlinearity.hpp"

namespace rplap {

struct SolverSettings {
  double tol_fix = 1e-9;     // sup-norm change between recursion iterates
  int max_recursion = 500;
  double blowup_cutoff = 1e6;
  double bisect_tol = 1e-3;  // relative width of the lambda* bracket
  int max_doublings = 60;
  bool accelerate = true;    // Newton jumps when the recursion contracts slowly
  NewtonSettings newton;

  void validate() const;
};

enum class DivergenceReason { kNone, kBlowUp, kSaturation, kStall };
std::string to_string(DivergenceReason reason);

/// Outcome of the minimal-solution recursion. Divergence is a value.
struct MinimalSolveResult {
  bool converged = false;
  DivergenceReason reason = DivergenceReason::kNone;
  SolutionProfile profile;  // last iterate; flagged decreasing when converged
  int iterations = 0;
  double u_max = 0.0;

  explicit operator bool() const { return converged; }
};

/// 1 / h(max w) with w the torsion function.
double lower_bound_lambda0(const RiemannianModel& model, const OperatorConfig& cfg,
                           const Nonlinearity& h, const GridPtr& grid);

/// v_0 = 0 (or `warm_start`, which must be a subsolution), v_{k+1} solves the
/// frozen problem with rhs lambda h(v_k). Every iterate is checked to be
/// nodewise nondecreasing (NumericalError otherwise). When the sup-norm
/// increments contract slower than 1/2 a Newton step on the full problem is
/// tried; its result is kept only if it lies above the current iterate and
/// the linearization there is positive definite, so the recursion still
/// lands on the minimal solution.
MinimalSolveResult monotone_minimal_solution(const RiemannianModel& model, const OperatorConfig& cfg,
                                             const Nonlinearity& h, double lambda, const GridPtr& grid,
                                             const SolverSettings& settings = {},
                                             const Eigen::VectorXd* warm_start = nullptr);

struct LambdaStarBracket {
  double lambda0 = 0.0;
  double lambda_lo = 0.0;  // converged minimal solution
  double lambda_hi = 0.0;  // recursion diverged
  SolutionProfile profile_lo;
  DivergenceReason hi_reason = DivergenceReason::kNone;
  bool h1_warning = false;  // superlinearity not established for h
  int solves = 0;
};

/// Doubles from lambda_0 until divergence, then bisects to relative width
/// bisect_tol. Throws NumericalError when no divergence is seen after
/// max_doublings (an unbounded lambda* contradicts the theory for
/// superlinear h).
LambdaStarBracket estimate_lambda_star(const RiemannianModel& model, const OperatorConfig& cfg,
                                       const Nonlinearity& h, const GridPtr& grid,
                                       const SolverSettings& settings = {});

struct UniformBounds {
  double l1_up = 0.0;  // int u^{p-1} psi^{N-1}
  double l1_hu = 0.0;  // int h(u) psi^{N-1}
};

struct BranchPoint {
  double lambda = 0.0;
  SolutionProfile profile;
  double u_max = 0.0;
  std::optional<double> mu1;
  int iters = 0;
  UniformBounds uniform_bounds;
};

struct Branch {
  std::vector<BranchPoint> points;  // sorted by lambda
  LambdaStarBracket bracket;
  int certified_samples = 0;
  double certification_deviation = 0.0;  // max |warm - cold| over re-runs
};

/// 16 geometric points in [0.05, 0.99] lambda_lo plus four in the last 5%.
std::vector<double> default_lambda_samples(double lambda_lo);

/// Minimal solutions at each sample (sorted, each warm-started from the
/// previous one); three samples drawn with a fixed seed are re-solved from
/// zero and must agree to 1e-7 (NumericalError otherwise). Samples above
/// lambda_lo are rejected.
Branch continue_branch(const RiemannianModel& model, const OperatorConfig& cfg, const Nonlinearity& h,
                       const GridPtr& grid, const SolverSettings& settings,
                       const std::vector<double>& samples, const LambdaStarBracket& bracket);

Branch continue_branch(const RiemannianModel& model, const OperatorConfig& cfg, const Nonlinearity& h,
                       const GridPtr& grid, const SolverSettings& settings,
                       const std::vector<double>& samples);

/// lambda_a < lambda_b implies u_a <= u_b + tol nodewise.
bool branch_is_monotone(const Branch& branch, double tol = 1e-9);

struct ExtremalApproximation {
  SolutionProfile profile;  // at the largest solved lambda
  double lambda = 0.0;
  double lambda_star = 0.0;  // bracket midpoint
  double u_max = 0.0;
  double extrapolated_u_max = 0.0;
};

/// Two-point extrapolation of u_max to lambda*, assuming the fold law
/// u_max ~ u* - c (lambda* - lambda)^{1/2}. Needs three points with
/// lambda >= 0.95 lambda_lo.
ExtremalApproximation extremal_approximation(const Branch& branch);

}  // namespace rplap
