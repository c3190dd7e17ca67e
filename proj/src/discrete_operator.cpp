#include "rplap/discrete_operator.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "rplap/errors.hpp"
#include "rplap/quadrature.hpp"

namespace rplap {

void OperatorConfig::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw PreconditionError("p must exceed 1");
  if (!(eps_reg > 0.0) || eps_reg > 1e-4) {
    throw PreconditionError("eps_reg must lie in (0, 1e-4]");
  }
}

double flux_phi(double slope, const OperatorConfig& cfg) {
  if (cfg.p == 2.0) return slope;
  const double e2 = cfg.eps_reg * cfg.eps_reg;
  return std::pow(slope * slope + e2, 0.5 * (cfg.p - 2.0)) * slope;
}

double flux_phi_derivative(double slope, const OperatorConfig& cfg) {
  if (cfg.p == 2.0) return 1.0;
  const double s2 = slope * slope;
  const double e2 = cfg.eps_reg * cfg.eps_reg;
  return std::pow(s2 + e2, 0.5 * (cfg.p - 4.0)) * ((cfg.p - 1.0) * s2 + e2);
}

double flux_phi_inverse(double flux, const OperatorConfig& cfg) {
  if (cfg.p == 2.0 || flux == 0.0) return flux;
  const double target = std::abs(flux);
  // phi(s) <= min(s^{p-1}, eps^{p-2} s) for p < 2 and >= max(...) for p > 2,
  // so the two power-law inversions bound the root from one side.
  const double power_guess = std::pow(target, 1.0 / (cfg.p - 1.0));
  const double linear_guess = target * std::pow(cfg.eps_reg, 2.0 - cfg.p);
  double s = cfg.p < 2.0 ? std::max(power_guess, linear_guess) : std::min(power_guess, linear_guess);
  double lo = 0.0;
  double hi = s;
  while (flux_phi(hi, cfg) < target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double g = flux_phi(s, cfg) - target;
    if (g == 0.0) break;
    (g > 0.0 ? hi : lo) = s;
    double next = s - g / flux_phi_derivative(s, cfg);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * next;
    s = next;
    if (done || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return std::copysign(s, flux);
}

SolutionProfile SolutionProfile::from_values(GridPtr grid, Eigen::VectorXd values) {
  if (!grid) throw PreconditionError("profile needs a grid");
  const Eigen::Index count = grid->node_count();
  if (values.size() != count) throw PreconditionError("profile size does not match the grid");
  SolutionProfile profile;
  profile.u = std::move(values);
  const Eigen::VectorXd& h = grid->spacing();
  profile.slope = (profile.u.tail(count - 1) - profile.u.head(count - 1)).cwiseQuotient(h);
  profile.derivative = Eigen::VectorXd::Zero(count);
  for (Eigen::Index i = 1; i + 1 < count; ++i) {
    const double left = h(i - 1);
    const double right = h(i);
    profile.derivative(i) =
        (left * profile.slope(i) + right * profile.slope(i - 1)) / (left + right);
  }
  profile.derivative(count - 1) = profile.slope(count - 2);
  profile.grid = std::move(grid);
  return profile;
}

SolutionProfile SolutionProfile::from_function(GridPtr grid, const std::function<double(double)>& f) {
  Eigen::VectorXd values(grid->node_count());
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = f(grid->node(i));
  return from_values(std::move(grid), std::move(values));
}

bool is_radially_decreasing(const SolutionProfile& profile, double tol) {
  return (profile.slope.array() <= tol).all();
}

void mark_decreasing(SolutionProfile& profile, double tol) {
  if (!is_radially_decreasing(profile, tol)) {
    throw NumericalError("profile is not radially decreasing");
  }
  profile.decreasing = true;
}

RadialDiscretization::RadialDiscretization(const RiemannianModel& model, const OperatorConfig& cfg,
                                           GridPtr grid)
    : model_(model), cfg_(cfg), grid_(std::move(grid)) {
  cfg_.validate();
  if (!grid_) throw PreconditionError("discretization needs a grid");
  const int exponent = model_.dimension() - 1;
  const Eigen::VectorXd& mid = grid_->midpoints();
  flux_weights_.resize(mid.size());
  for (Eigen::Index j = 0; j < mid.size(); ++j) {
    flux_weights_(j) = std::pow(model_.profile().psi(mid(j)), exponent);
  }
  node_weights_.resize(grid_->node_count());
  for (Eigen::Index i = 0; i < node_weights_.size(); ++i) {
    node_weights_(i) = i == 0 ? 0.0 : std::pow(model_.profile().psi(grid_->node(i)), exponent);
  }
  masses_ = node_weights_.cwiseProduct(grid_->dual_widths());
}

Eigen::VectorXd RadialDiscretization::residual(const Eigen::VectorXd& u, const Eigen::VectorXd& rhs) const {
  const Eigen::Index count = size();
  if (u.size() != count || rhs.size() != count) throw PreconditionError("residual: size mismatch");
  if (!rhs.allFinite()) throw NumericalError("residual assembly: rhs is not finite");
  const Eigen::VectorXd& h = grid_->spacing();
  const Eigen::VectorXd& dual = grid_->dual_widths();

  Eigen::VectorXd r(count);
  double left_flux = 0.0;
  for (Eigen::Index i = 0; i + 1 < count; ++i) {
    const double right_flux = flux_weights_(i) * flux_phi((u(i + 1) - u(i)) / h(i), cfg_);
    r(i) = -(right_flux - left_flux) / dual(i) - node_weights_(i) * rhs(i);
    left_flux = right_flux;
  }
  r(count - 1) = u(count - 1);
  return r;
}

TridiagonalXd RadialDiscretization::jacobian(const Eigen::VectorXd& u, const Eigen::VectorXd& drhs) const {
  const Eigen::Index count = size();
  if (u.size() != count || drhs.size() != count) throw PreconditionError("jacobian: size mismatch");
  const Eigen::VectorXd& h = grid_->spacing();
  const Eigen::VectorXd& dual = grid_->dual_widths();

  TridiagonalXd jac(count);
  double left = 0.0;
  for (Eigen::Index i = 0; i + 1 < count; ++i) {
    const double right = flux_weights_(i) * flux_phi_derivative((u(i + 1) - u(i)) / h(i), cfg_) / h(i);
    jac.diag()(i) = (left + right) / dual(i) - node_weights_(i) * drhs(i);
    jac.upper()(i) = -right / dual(i);
    if (i > 0) jac.lower()(i - 1) = -left / dual(i);
    left = right;
  }
  jac.diag()(count - 1) = 1.0;
  jac.lower()(count - 2) = 0.0;
  return jac;
}

TridiagonalXd RadialDiscretization::symmetric_jacobian(const Eigen::VectorXd& u,
                                                       const Eigen::VectorXd& drhs) const {
  const Eigen::Index free = size() - 1;
  const Eigen::VectorXd& h = grid_->spacing();
  TridiagonalXd sym(free);
  double left = 0.0;
  for (Eigen::Index i = 0; i < free; ++i) {
    const double right = flux_weights_(i) * flux_phi_derivative((u(i + 1) - u(i)) / h(i), cfg_) / h(i);
    sym.diag()(i) = left + right - masses_(i) * drhs(i);
    if (i + 1 < free) {
      sym.upper()(i) = -right;
      sym.lower()(i) = -right;
    }
    left = right;
  }
  return sym;
}

Eigen::VectorXd RadialDiscretization::integrate_fixed_rhs(const Eigen::VectorXd& rhs) const {
  const Eigen::Index count = size();
  if (rhs.size() != count) throw PreconditionError("integrate_fixed_rhs: size mismatch");
  if (!rhs.allFinite()) throw NumericalError("fixed-rhs solve: rhs is not finite");
  const Eigen::VectorXd& h = grid_->spacing();

  Eigen::VectorXd slope(count - 1);
  double flux = 0.0;
  for (Eigen::Index i = 0; i + 1 < count; ++i) {
    flux -= masses_(i) * rhs(i);
    slope(i) = flux_phi_inverse(flux / flux_weights_(i), cfg_);
  }
  Eigen::VectorXd u(count);
  u(count - 1) = 0.0;
  for (Eigen::Index i = count - 2; i >= 0; --i) u(i) = u(i + 1) - h(i) * slope(i);
  return u;
}

SolutionProfile RadialDiscretization::solve_fixed_rhs(const Eigen::VectorXd& rhs,
                                                      const NewtonSettings& newton) const {
  return solve_fixed_rhs_from(rhs, integrate_fixed_rhs(rhs), newton);
}

SolutionProfile RadialDiscretization::solve_fixed_rhs_from(const Eigen::VectorXd& rhs,
                                                           Eigen::VectorXd initial,
                                                           const NewtonSettings& newton) const {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(size());
  newton_solve([&](const Eigen::VectorXd& v) { return residual(v, rhs); },
               [&](const Eigen::VectorXd& v) { return jacobian(v, zero); }, initial, newton);
  return SolutionProfile::from_values(grid_, std::move(initial));
}

Eigen::VectorXd RadialDiscretization::sample(const std::function<double(double)>& f) const {
  Eigen::VectorXd values(size());
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = f(grid_->node(i));
  return values;
}

Eigen::VectorXd assemble_residual(const RiemannianModel& model, const OperatorConfig& cfg,
                                  const SolutionProfile& u, const RadialMap& rhs) {
  const RadialDiscretization disc(model, cfg, u.grid);
  return disc.residual(u.u, disc.sample(rhs));
}

TridiagonalXd assemble_jacobian(const RiemannianModel& model, const OperatorConfig& cfg,
                                const SolutionProfile& u, const RadialMap& rhs_derivative) {
  const RadialDiscretization disc(model, cfg, u.grid);
  return disc.jacobian(u.u, disc.sample(rhs_derivative));
}

SolutionProfile plap_solve_fixed_rhs(const RiemannianModel& model, const OperatorConfig& cfg, GridPtr grid,
                                     const RadialMap& rhs, const NewtonSettings& newton) {
  const RadialDiscretization disc(model, cfg, std::move(grid));
  return disc.solve_fixed_rhs(disc.sample(rhs), newton);
}

SolutionProfile torsion_function(const RiemannianModel& model, const OperatorConfig& cfg, GridPtr grid) {
  SolutionProfile w = plap_solve_fixed_rhs(model, cfg, std::move(grid), [](double) { return 1.0; });
  mark_decreasing(w);
  return w;
}

namespace {

Eigen::VectorXd node_masses(const RiemannianModel& model, const RadialGrid& grid) {
  Eigen::VectorXd masses(grid.node_count());
  masses(0) = 0.0;
  for (Eigen::Index i = 1; i < masses.size(); ++i) {
    masses(i) = std::pow(model.profile().psi(grid.node(i)), model.dimension() - 1) * grid.dual_widths()(i);
  }
  return masses;
}

Eigen::VectorXd midpoint_masses(const RiemannianModel& model, const RadialGrid& grid) {
  const Eigen::VectorXd& mid = grid.midpoints();
  Eigen::VectorXd masses(mid.size());
  for (Eigen::Index j = 0; j < mid.size(); ++j) {
    masses(j) = std::pow(model.profile().psi(mid(j)), model.dimension() - 1) * grid.spacing()(j);
  }
  return masses;
}

}  // namespace

double lq_norm(const RiemannianModel& model, const SolutionProfile& u, double q) {
  if (!(q >= 1.0)) throw PreconditionError("lq_norm needs q >= 1");
  return weighted_lq(u.u, node_masses(model, *u.grid), q);
}

double linf_norm(const SolutionProfile& u) { return u.u.lpNorm<Eigen::Infinity>(); }

double w1q_seminorm(const RiemannianModel& model, const SolutionProfile& u, double q) {
  if (!(q >= 1.0)) throw PreconditionError("w1q_seminorm needs q >= 1");
  return weighted_lq(u.slope, midpoint_masses(model, *u.grid), q);
}

double weighted_integral(const RiemannianModel& model, const SolutionProfile& u,
                         const std::function<double(double)>& g) {
  const Eigen::VectorXd masses = node_masses(model, *u.grid);
  double sum = 0.0;
  for (Eigen::Index i = 1; i < masses.size(); ++i) sum += masses(i) * g(u.u(i));
  return sum;
}

}  // namespace rplap
