#pragma once

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <vector>

#include "rplap/branch_solver.hpp"
#include "rplap/discrete_operator.hpp"
#include "rplap/geometry.hpp"

namespace rplap {

/// Map s -> f'(s) evaluated on nodal solution values.
using ReactionDerivative = std::function<double(double)>;

/// Q(xi) = int [(p-1)|u_r|^{p-2} xi_r^2 - f'(u) xi^2] psi^{N-1} dr, with the
/// same eps-regularized weight as the operator: midpoint rule for the
/// gradient term, trapezoid masses for the potential term. xi is given on
/// the grid of u and must vanish at r = 1.
double stability_form(const RiemannianModel& model, const OperatorConfig& cfg, const SolutionProfile& u,
                      const ReactionDerivative& fprime, const Eigen::VectorXd& xi);

struct StabilityReport {
  double mu1 = 0.0;
  SolutionProfile eigenfunction;  // xi^T B xi = 1, positive
  bool semi_stable = false;       // mu1 >= -tol_eig
  int iterations = 0;             // inverse-iteration steps
};

constexpr double kTolEig = 1e-6;

/// Smallest mu with A xi = mu B xi: A is the matrix of stability_form on
/// the free nodes (Dirichlet at r = 1, natural at the pole), B the lumped
/// psi^{N-1} mass. The eigenvalue is isolated by Sturm-count bisection, the
/// eigenvector refined by shifted inverse iteration and mu1 reported as its
/// Rayleigh quotient.
StabilityReport principal_eigenvalue(const RiemannianModel& model, const OperatorConfig& cfg,
                                     const SolutionProfile& u, const ReactionDerivative& fprime,
                                     double tol_eig = kTolEig);

/// Fills mu1 of every point with f' = lambda h'.
void annotate_stability(const RiemannianModel& model, const OperatorConfig& cfg, const Nonlinearity& h,
                        Branch& branch);

/// int |u_r|^p [(p-1) eta_r^2 + V eta^2] psi^{N-1} dr, V = stability_potential,
/// midpoint rule (eta averaged onto midpoints). eta must vanish at both ends.
double hardy_form(const RiemannianModel& model, const OperatorConfig& cfg, const SolutionProfile& u,
                  const Eigen::VectorXd& eta);

/// int |u_r|^p psi^{N-1} dr; the natural scale of hardy_form.
double gradient_energy(const RiemannianModel& model, const OperatorConfig& cfg, const SolutionProfile& u);

/// 1 + sqrt((N-1)/(p-1)).
double alpha_max(int N, double p);

/// Lipschitz cutoff psi(max(r, eps))^{-alpha} - psi(delta)^{-alpha} on
/// [0, delta], zero beyond.
class PropTestFunction {
 public:
  /// Requires 1 <= alpha < alpha_max and 0 < eps < delta < min(1, horizon).
  PropTestFunction(const RiemannianModel& model, const OperatorConfig& cfg, double alpha, double delta,
                   double eps);

  double operator()(double r) const;
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }
  double eps() const { return eps_; }

 private:
  WarpingProfile profile_;
  double alpha_;
  double delta_;
  double eps_;
  double floor_;  // psi(delta)^{-alpha}
};

PropTestFunction prop_test_function(const RiemannianModel& model, const OperatorConfig& cfg, double alpha,
                                    double delta, double eps);

struct WeightedEstimateReport {
  double alpha = 0.0;
  double delta = 0.0;
  double lhs = 0.0;    // int_0^delta |u_r|^p psi^{N-1-2 alpha} dr
  double ratio = 0.0;  // lhs / ||u||_p^p
};

/// Midpoint rule over the cells inside (0, delta) plus the partial cell at
/// delta, delta = delta_admissible(model).
WeightedEstimateReport weighted_gradient_estimate(const RiemannianModel& model, const OperatorConfig& cfg,
                                                  const SolutionProfile& u, double alpha);

enum class Regime { kBounded, kEstimate };
std::string to_string(Regime regime);

struct ExponentReport {
  int N = 0;
  double p = 0.0;
  double threshold = 0.0;  // p + 4p/(p-1)
  Regime regime = Regime::kBounded;
  double q0 = 0.0;  // +inf when the denominator is nonpositive
  double q1 = 0.0;
  double alpha_max = 0.0;
};

double regularity_threshold(double p);

/// Requires N >= 2 and 1 < p <= N.
ExponentReport regularity_exponents(int N, double p);

struct NormAuditRow {
  double lambda = 0.0;
  // bounded regime; NaN when not applicable
  double linf_over_lp = std::numeric_limits<double>::quiet_NaN();
  double linf_over_l1_lp = std::numeric_limits<double>::quiet_NaN();  // against max(||u||_1, ||u||_p)
  // estimate regime at q = 0.9 q0 and 0.9 q1; NaN when not applicable
  double q_lebesgue = std::numeric_limits<double>::quiet_NaN();
  double lq_over_lp = std::numeric_limits<double>::quiet_NaN();
  double q_sobolev = std::numeric_limits<double>::quiet_NaN();
  double w1q_over_lp = std::numeric_limits<double>::quiet_NaN();
};

struct NormAudit {
  ExponentReport exponents;
  std::vector<NormAuditRow> rows;
  double max_linf_over_lp = std::numeric_limits<double>::quiet_NaN();
  double max_lq_over_lp = std::numeric_limits<double>::quiet_NaN();
  double max_w1q_over_lp = std::numeric_limits<double>::quiet_NaN();
};

/// Empirical ratios of the regularity norms to ||u||_p along a branch.
/// W^{1,q} is ||u||_q + ||u_r||_q.
NormAudit norm_estimate_audit(const RiemannianModel& model, const OperatorConfig& cfg, const Branch& branch);

}  // namespace rplap
