#include "rplap/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rplap/errors.hpp"

namespace rplap {

namespace {

constexpr double kSupportTolerance = 1e-12;

// (p-1)(s^2 + eps^2)^{(p-2)/2} W / h on each interval.
Eigen::VectorXd stiffness(const RadialDiscretization& disc, const SolutionProfile& u) {
  const OperatorConfig& cfg = disc.config();
  const Eigen::VectorXd& h = disc.grid()->spacing();
  Eigen::VectorXd k(h.size());
  const double e2 = cfg.eps_reg * cfg.eps_reg;
  for (Eigen::Index j = 0; j < k.size(); ++j) {
    const double s = u.slope(j);
    const double weight = cfg.p == 2.0 ? 1.0 : (cfg.p - 1.0) * std::pow(s * s + e2, 0.5 * (cfg.p - 2.0));
    k(j) = weight * disc.flux_weights()(j) / h(j);
  }
  return k;
}

Eigen::VectorXd reaction(const SolutionProfile& u, const ReactionDerivative& fprime) {
  Eigen::VectorXd out(u.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = fprime ? fprime(u.u(i)) : 0.0;
  return out;
}

// Matrix of the stability form on the free nodes 0..n-1.
TridiagonalXd stability_matrix(const RadialDiscretization& disc, const SolutionProfile& u,
                               const ReactionDerivative& fprime) {
  const Eigen::VectorXd k = stiffness(disc, u);
  const Eigen::VectorXd f = reaction(u, fprime);
  const Eigen::Index free = disc.size() - 1;
  TridiagonalXd a(free);
  for (Eigen::Index i = 0; i < free; ++i) {
    a.diag()(i) = (i > 0 ? k(i - 1) : 0.0) + k(i) - disc.masses()(i) * f(i);
    if (i + 1 < free) a.upper()(i) = a.lower()(i) = -k(i);
  }
  return a;
}

void check_grid(const SolutionProfile& u, const Eigen::VectorXd& v, const char* name) {
  if (v.size() != u.size()) throw PreconditionError(std::string(name) + " does not match the grid of u");
}

double support_slack(const Eigen::VectorXd& v) {
  return kSupportTolerance * (1.0 + v.lpNorm<Eigen::Infinity>());
}

}  // namespace

double stability_form(const RiemannianModel& model, const OperatorConfig& cfg, const SolutionProfile& u,
                      const ReactionDerivative& fprime, const Eigen::VectorXd& xi) {
  check_grid(u, xi, "xi");
  const Eigen::Index n = xi.size() - 1;
  if (std::abs(xi(n)) > support_slack(xi)) throw PreconditionError("xi must vanish at r = 1");
  const RadialDiscretization disc(model, cfg, u.grid);
  const Eigen::VectorXd k = stiffness(disc, u);
  const Eigen::VectorXd f = reaction(u, fprime);
  const Eigen::VectorXd dxi = xi.tail(n) - xi.head(n);
  return k.dot(dxi.cwiseAbs2()) - disc.masses().head(n).dot(f.head(n).cwiseProduct(xi.head(n).cwiseAbs2()));
}

StabilityReport principal_eigenvalue(const RiemannianModel& model, const OperatorConfig& cfg,
                                     const SolutionProfile& u, const ReactionDerivative& fprime, double tol_eig) {
  if (!u.decreasing && !u.u.isZero(0.0)) {
    throw PreconditionError("principal_eigenvalue needs a decreasing profile (or u = 0)");
  }
  const RadialDiscretization disc(model, cfg, u.grid);
  const TridiagonalXd a = stability_matrix(disc, u, fprime);
  const Eigen::Index free = a.size();
  const Eigen::VectorXd mass = disc.masses().head(free);

  // Bracket: A >= -max f' B from below; any Rayleigh quotient from above.
  const Eigen::VectorXd f = reaction(u, fprime);
  double lo = -f.head(free).tail(free - 1).maxCoeff() - 1.0;
  while (a.count_negative_pivots(lo, mass) > 0) lo = 2.0 * lo - 1.0;
  Eigen::VectorXd x(free);
  for (Eigen::Index i = 0; i < free; ++i) x(i) = 1.0 - u.grid->node(i);
  double hi = x.dot(a * x) / x.dot(mass.cwiseProduct(x));
  for (double pad = 1e-12 * (1.0 + std::abs(hi)); a.count_negative_pivots(hi, mass) == 0; pad *= 2.0) hi += pad;

  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    (a.count_negative_pivots(mid, mass) == 0 ? lo : hi) = mid;
  }

  // Shifted inverse iteration just below the isolated eigenvalue.
  const double shift = lo - 1e-12 * (1.0 + std::abs(lo));
  TridiagonalXd shifted = a;
  shifted.diag() -= shift * mass;
  StabilityReport report;
  double rayleigh = std::numeric_limits<double>::quiet_NaN();
  constexpr int kMaxSteps = 10000;
  for (int it = 1;; ++it) {
    x = shifted.solve(mass.cwiseProduct(x));
    x /= std::sqrt(x.dot(mass.cwiseProduct(x)));
    const double next = x.dot(a * x);
    report.iterations = it;
    const bool settled = std::abs(next - rayleigh) <= 1e-12 * (1.0 + std::abs(next));
    rayleigh = next;
    if (settled && it >= 2) break;
    if (it == kMaxSteps) throw NumericalError("inverse iteration did not converge in 10^4 steps");
  }
  if (x.sum() < 0.0) x = -x;

  Eigen::VectorXd values = Eigen::VectorXd::Zero(free + 1);
  values.head(free) = x;
  report.mu1 = rayleigh;
  report.eigenfunction = SolutionProfile::from_values(u.grid, std::move(values));
  report.semi_stable = report.mu1 >= -tol_eig;
  return report;
}

void annotate_stability(const RiemannianModel& model, const OperatorConfig& cfg, const Nonlinearity& h,
                        Branch& branch) {
  for (BranchPoint& point : branch.points) {
    const double lambda = point.lambda;
    point.mu1 =
        principal_eigenvalue(model, cfg, point.profile, [&](double s) { return lambda * h.derivative(s); }).mu1;
  }
}

double hardy_form(const RiemannianModel& model, const OperatorConfig& cfg, const SolutionProfile& u,
                  const Eigen::VectorXd& eta) {
  cfg.validate();
  check_grid(u, eta, "eta");
  const Eigen::Index n = eta.size() - 1;
  if (std::abs(eta(0)) > support_slack(eta) || std::abs(eta(n)) > support_slack(eta)) {
    throw PreconditionError("eta must vanish at r = 0 and r = 1");
  }
  const RadialGrid& grid = *u.grid;
  const Eigen::VectorXd& h = grid.spacing();
  const Eigen::VectorXd& mid = grid.midpoints();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double gradient = std::pow(std::abs(u.slope(j)), cfg.p);
    if (gradient == 0.0) continue;
    const double deta = (eta(j + 1) - eta(j)) / h(j);
    const double eta_mid = 0.5 * (eta(j) + eta(j + 1));
    const double weight = std::pow(model.profile().psi(mid(j)), model.dimension() - 1);
    sum += h(j) * weight * gradient *
           ((cfg.p - 1.0) * deta * deta + stability_potential(model, mid(j)) * eta_mid * eta_mid);
  }
  return sum;
}

double gradient_energy(const RiemannianModel& model, const OperatorConfig& cfg, const SolutionProfile& u) {
  return std::pow(w1q_seminorm(model, u, cfg.p), cfg.p);
}

double alpha_max(int N, double p) {
  if (!(p > 1.0)) throw PreconditionError("p must exceed 1");
  return 1.0 + std::sqrt((N - 1.0) / (p - 1.0));
}

PropTestFunction::PropTestFunction(const RiemannianModel& model, const OperatorConfig& cfg, double alpha,
                                   double delta, double eps)
    : profile_(model.profile()), alpha_(alpha), delta_(delta), eps_(eps) {
  const double amax = alpha_max(model.dimension(), cfg.p);
  if (!(alpha >= 1.0) || !(alpha < amax)) {
    throw PreconditionError("alpha = " + std::to_string(alpha) + " outside [1, alpha_max) with alpha_max = " +
                            std::to_string(amax));
  }
  if (!(eps > 0.0) || !(eps < delta)) throw PreconditionError("test function needs 0 < eps < delta");
  if (!(delta < 1.0)) throw PreconditionError("test function needs delta < 1");
  floor_ = std::pow(profile_.psi(delta_), -alpha_);
}

double PropTestFunction::operator()(double r) const {
  if (r > delta_) return 0.0;
  return std::pow(profile_.psi(std::max(r, eps_)), -alpha_) - floor_;
}

PropTestFunction prop_test_function(const RiemannianModel& model, const OperatorConfig& cfg, double alpha,
                                    double delta, double eps) {
  return PropTestFunction(model, cfg, alpha, delta, eps);
}

WeightedEstimateReport weighted_gradient_estimate(const RiemannianModel& model, const OperatorConfig& cfg,
                                                  const SolutionProfile& u, double alpha) {
  cfg.validate();
  const double amax = alpha_max(model.dimension(), cfg.p);
  if (!(alpha >= 1.0) || !(alpha < amax)) {
    throw PreconditionError("alpha = " + std::to_string(alpha) + " outside the admissible range [1, alpha_max)" +
                            " with alpha_max = " + std::to_string(amax));
  }
  if (!u.decreasing) throw PreconditionError("weighted_gradient_estimate needs a decreasing profile");

  WeightedEstimateReport report;
  report.alpha = alpha;
  report.delta = delta_admissible(model);
  const RadialGrid& grid = *u.grid;
  const double exponent = model.dimension() - 1.0 - 2.0 * alpha;
  for (Eigen::Index j = 0; j < grid.intervals() && grid.node(j) < report.delta; ++j) {
    const double a = grid.node(j);
    const double b = std::min(grid.node(j + 1), report.delta);
    const double gradient = std::pow(std::abs(u.slope(j)), cfg.p);
    if (gradient == 0.0) continue;
    report.lhs += (b - a) * gradient * std::pow(model.profile().psi(0.5 * (a + b)), exponent);
  }
  const double lp = std::pow(lq_norm(model, u, cfg.p), cfg.p);
  report.ratio = lp > 0.0 ? report.lhs / lp : 0.0;
  return report;
}

std::string to_string(Regime regime) { return regime == Regime::kBounded ? "bounded" : "estimate"; }

double regularity_threshold(double p) {
  if (!(p > 1.0)) throw PreconditionError("p must exceed 1");
  return p + 4.0 * p / (p - 1.0);
}

ExponentReport regularity_exponents(int N, double p) {
  if (N < 2) throw PreconditionError("N must be >= 2");
  if (!(p > 1.0)) throw PreconditionError("p must exceed 1");
  if (p > N) throw PreconditionError("p must not exceed N (1 < p <= N)");
  ExponentReport report;
  report.N = N;
  report.p = p;
  report.threshold = regularity_threshold(p);
  report.regime = N < report.threshold ? Regime::kBounded : Regime::kEstimate;
  const double root = 2.0 * std::sqrt((N - 1.0) / (p - 1.0));
  const double inf = std::numeric_limits<double>::infinity();
  const double d0 = N - p - 2.0 - root;
  const double d1 = N - 2.0 - root;
  report.q0 = d0 > 0.0 ? N * p / d0 : inf;
  report.q1 = d1 > 0.0 ? N * p / d1 : inf;
  report.alpha_max = alpha_max(N, p);
  return report;
}

NormAudit norm_estimate_audit(const RiemannianModel& model, const OperatorConfig& cfg, const Branch& branch) {
  NormAudit audit;
  audit.exponents = regularity_exponents(model.dimension(), cfg.p);
  const bool bounded = audit.exponents.regime == Regime::kBounded;
  const double q0 = 0.9 * audit.exponents.q0;
  const double q1 = 0.9 * audit.exponents.q1;
  auto track = [](double& best, double value) {
    if (std::isnan(value)) return;
    best = std::isnan(best) ? value : std::max(best, value);
  };
  for (const BranchPoint& point : branch.points) {
    NormAuditRow row;
    row.lambda = point.lambda;
    const double lp = lq_norm(model, point.profile, cfg.p);
    if (bounded) {
      const double linf = linf_norm(point.profile);
      row.linf_over_lp = linf / lp;
      row.linf_over_l1_lp = linf / std::max(lq_norm(model, point.profile, 1.0), lp);
    } else {
      if (std::isfinite(q0) && q0 >= 1.0) {
        row.q_lebesgue = q0;
        row.lq_over_lp = lq_norm(model, point.profile, q0) / lp;
      }
      if (std::isfinite(q1) && q1 >= 1.0) {
        row.q_sobolev = q1;
        row.w1q_over_lp = (lq_norm(model, point.profile, q1) + w1q_seminorm(model, point.profile, q1)) / lp;
      }
    }
    track(audit.max_linf_over_lp, row.linf_over_lp);
    track(audit.max_lq_over_lp, row.lq_over_lp);
    track(audit.max_w1q_over_lp, row.w1q_over_lp);
    audit.rows.push_back(row);
  }
  return audit;
}

}  // namespace rplap
