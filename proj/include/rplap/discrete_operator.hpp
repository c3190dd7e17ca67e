#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>

#include "rplap/geometry.hpp"
#include "rplap/grid.hpp"
#include "rplap/newton.hpp"
#include "rplap/tridiagonal.hpp"

namespace rplap {

/// p and the gradient regularization of the flux.
struct OperatorConfig {
  double p = 2.0;
  double eps_reg = 1e-8;

  /// Throws PreconditionError unless p > 1 and 0 < eps_reg <= 1e-4.
  void validate() const;
};

/// phi(s) = (s^2 + eps^2)^{(p-2)/2} s.
double flux_phi(double slope, const OperatorConfig& cfg);
/// phi'(s) = (s^2 + eps^2)^{(p-4)/2} ((p-1) s^2 + eps^2).
double flux_phi_derivative(double slope, const OperatorConfig& cfg);
/// Inverse of the strictly increasing map phi.
double flux_phi_inverse(double flux, const OperatorConfig& cfg);

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Radial function sampled on a grid.
struct SolutionProfile {
  GridPtr grid;
  Eigen::VectorXd u;           // nodal values
  Eigen::VectorXd slope;       // divided differences, one per interval (midpoints)
  Eigen::VectorXd derivative;  // nodal u_r: 0 at the pole, centered inside, one-sided at r = 1
  bool decreasing = false;

  static SolutionProfile from_values(GridPtr grid, Eigen::VectorXd values);
  static SolutionProfile from_function(GridPtr grid, const std::function<double(double)>& f);

  Eigen::Index size() const { return u.size(); }
};

/// True when every midpoint slope is <= tol.
bool is_radially_decreasing(const SolutionProfile& profile, double tol = 1e-10);

/// Flags the profile decreasing; throws NumericalError if a slope exceeds tol.
void mark_decreasing(SolutionProfile& profile, double tol = 1e-10);

/// Conservative discretization of -(psi^{N-1} phi(u_r))' = psi^{N-1} rhs on a
/// fixed grid. Geometric weights are evaluated once at construction.
///
/// Row i < n of the residual is
///   -(F_{i+1/2} - F_{i-1/2}) / dr_i - psi(r_i)^{N-1} rhs_i,
/// F = psi^{N-1}(midpoint) phi(divided difference), F_{-1/2} = 0 and dr_i the
/// dual-cell width; row n is the Dirichlet condition u_n = 0.
class RadialDiscretization {
 public:
  RadialDiscretization(const RiemannianModel& model, const OperatorConfig& cfg, GridPtr grid);

  const RiemannianModel& model() const { return model_; }
  const OperatorConfig& config() const { return cfg_; }
  const GridPtr& grid() const { return grid_; }
  Eigen::Index size() const { return grid_->node_count(); }

  /// psi^{N-1} at interval midpoints.
  const Eigen::VectorXd& flux_weights() const { return flux_weights_; }
  /// psi(r_i)^{N-1} at nodes (0 at the pole).
  const Eigen::VectorXd& node_weights() const { return node_weights_; }
  /// Trapezoid masses dr_i psi(r_i)^{N-1}.
  const Eigen::VectorXd& masses() const { return masses_; }

  Eigen::VectorXd residual(const Eigen::VectorXd& u, const Eigen::VectorXd& rhs) const;

  /// Exact derivative of residual() with respect to u, given drhs = d rhs / d u
  /// (diagonal).
  TridiagonalXd jacobian(const Eigen::VectorXd& u, const Eigen::VectorXd& drhs) const;

  /// Symmetric form dr * J restricted to the free nodes 0..n-1.
  TridiagonalXd symmetric_jacobian(const Eigen::VectorXd& u, const Eigen::VectorXd& drhs) const;

  /// Integrates the frozen-rhs problem outward from the pole (flux recursion,
  /// scalar inversion of phi) and inward from the Dirichlet node.
  Eigen::VectorXd integrate_fixed_rhs(const Eigen::VectorXd& rhs) const;

  /// Fixed-rhs solve: flux-integration predictor polished by damped Newton.
  SolutionProfile solve_fixed_rhs(const Eigen::VectorXd& rhs, const NewtonSettings& newton = {}) const;

  /// Damped Newton from an explicit initial guess.
  SolutionProfile solve_fixed_rhs_from(const Eigen::VectorXd& rhs, Eigen::VectorXd initial,
                                       const NewtonSettings& newton = {}) const;

  Eigen::VectorXd sample(const std::function<double(double)>& f) const;

 private:
  RiemannianModel model_;
  OperatorConfig cfg_;
  GridPtr grid_;
  Eigen::VectorXd flux_weights_;
  Eigen::VectorXd node_weights_;
  Eigen::VectorXd masses_;
};

using RadialMap = std::function<double(double)>;

Eigen::VectorXd assemble_residual(const RiemannianModel& model, const OperatorConfig& cfg,
                                  const SolutionProfile& u, const RadialMap& rhs);

TridiagonalXd assemble_jacobian(const RiemannianModel& model, const OperatorConfig& cfg,
                                const SolutionProfile& u, const RadialMap& rhs_derivative);

/// Unique solution of the frozen-rhs problem with u(1) = 0; requires rhs >= 0.
SolutionProfile plap_solve_fixed_rhs(const RiemannianModel& model, const OperatorConfig& cfg,
                                     GridPtr grid, const RadialMap& rhs,
                                     const NewtonSettings& newton = {});

/// Solution of -div(|grad w|^{p-2} grad w) = 1, w(1) = 0, flagged decreasing.
SolutionProfile torsion_function(const RiemannianModel& model, const OperatorConfig& cfg,
                                 GridPtr grid);

/// (int |u|^q psi^{N-1} dr)^{1/q}, trapezoid rule on the grid nodes.
double lq_norm(const RiemannianModel& model, const SolutionProfile& u, double q);
/// max_i |u_i|.
double linf_norm(const SolutionProfile& u);
/// (int |u_r|^q psi^{N-1} dr)^{1/q}, midpoint rule with divided differences.
double w1q_seminorm(const RiemannianModel& model, const SolutionProfile& u, double q);

/// Trapezoid integral of g(u_i) psi(r_i)^{N-1}.
double weighted_integral(const RiemannianModel& model, const SolutionProfile& u,
                         const std::function<double(double)>& g);

}  // namespace rplap
