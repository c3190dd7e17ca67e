#include "rplap/branch_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include "rplap/errors.hpp"

namespace rplap {

namespace {

constexpr unsigned kCertificationSeed = 20240613u;
constexpr int kCertificationSamples = 3;
constexpr double kMinimalityTolerance = 1e-7;
constexpr double kMonotoneTolerance = 1e-10;

Eigen::VectorXd apply(const Nonlinearity& h, const Eigen::VectorXd& v, bool derivative) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = derivative ? h.derivative(v(i)) : h.value(v(i));
  return out;
}

double monotone_slack(const Eigen::VectorXd& v) {
  return kMonotoneTolerance * (1.0 + v.lpNorm<Eigen::Infinity>());
}

// Newton on the full problem R(u, lambda h(u)) = 0, updating u in place.
// Returns false on any failure; u is then unspecified.
bool full_newton(const RadialDiscretization& disc, const Nonlinearity& h, double lambda,
                 Eigen::VectorXd& u, const NewtonSettings& newton) {
  try {
    newton_solve([&](const Eigen::VectorXd& v) { return disc.residual(v, lambda * apply(h, v, false)); },
                 [&](const Eigen::VectorXd& v) { return disc.jacobian(v, lambda * apply(h, v, true)); }, u,
                 newton);
  } catch (const NumericalError&) {
    return false;
  } catch (const SaturationError&) {
    return false;
  }
  return u.allFinite();
}

bool linearly_stable(const RadialDiscretization& disc, const Nonlinearity& h, double lambda,
                     const Eigen::VectorXd& u) {
  try {
    return disc.symmetric_jacobian(u, lambda * apply(h, u, true)).count_negative_pivots() == 0;
  } catch (const SaturationError&) {
    return false;
  }
}

}  // namespace

void SolverSettings::validate() const {
  if (!(tol_fix > 0.0) || max_recursion <= 0 || !(blowup_cutoff > 0.0) || !(bisect_tol > 0.0) ||
      max_doublings <= 0 || !(newton.tolerance > 0.0) || newton.max_iterations <= 0) {
    throw PreconditionError("solver settings must all be positive");
  }
}

std::string to_string(DivergenceReason reason) {
  switch (reason) {
    case DivergenceReason::kNone:
      return "none";
    case DivergenceReason::kBlowUp:
      return "blow-up";
    case DivergenceReason::kSaturation:
      return "saturation";
    case DivergenceReason::kStall:
      return "stall";
  }
  return "unknown";
}

double lower_bound_lambda0(const RiemannianModel& model, const OperatorConfig& cfg, const Nonlinearity& h,
                           const GridPtr& grid) {
  const SolutionProfile w = torsion_function(model, cfg, grid);
  const double h_max = h.value(w.u.maxCoeff());
  if (!(h.value(0.0) > 0.0)) throw PreconditionError("lambda_0 needs h(0) > 0");
  return 1.0 / h_max;
}

MinimalSolveResult monotone_minimal_solution(const RiemannianModel& model, const OperatorConfig& cfg,
                                             const Nonlinearity& h, double lambda, const GridPtr& grid,
                                             const SolverSettings& settings, const Eigen::VectorXd* warm_start) {
  settings.validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw PreconditionError("lambda must be positive");
  const RadialDiscretization disc(model, cfg, grid);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(disc.size());
  if (warm_start) {
    if (warm_start->size() != disc.size()) throw PreconditionError("warm start does not match the grid");
    v = *warm_start;
  }

  MinimalSolveResult result;
  auto diverge = [&](DivergenceReason reason, int k) {
    result.reason = reason;
    result.iterations = k;
    result.u_max = v.allFinite() ? v.lpNorm<Eigen::Infinity>() : std::numeric_limits<double>::infinity();
    result.profile = SolutionProfile::from_values(grid, v);
    return result;
  };

  double previous_increment = std::numeric_limits<double>::infinity();
  int cooldown = 0;
  int backoff = 4;
  for (int k = 1; k <= settings.max_recursion; ++k) {
    Eigen::VectorXd rhs;
    try {
      rhs = lambda * apply(h, v, false);
    } catch (const SaturationError&) {
      return diverge(DivergenceReason::kSaturation, k - 1);
    }
    Eigen::VectorXd next = disc.integrate_fixed_rhs(rhs);
    if (!next.allFinite() || next.lpNorm<Eigen::Infinity>() > settings.blowup_cutoff) {
      return diverge(DivergenceReason::kBlowUp, k);
    }
    next = disc.solve_fixed_rhs_from(rhs, std::move(next), settings.newton).u;

    if ((next - v).minCoeff() < -monotone_slack(next)) {
      throw NumericalError("monotone recursion certificate violated at iteration " + std::to_string(k));
    }
    const double increment = (next - v).lpNorm<Eigen::Infinity>();
    v = std::move(next);

    if (increment < settings.tol_fix) {
      // Polish to the full residual tolerance; the recursion limit is within
      // O(tol_fix) of it, so Newton lands on the same (minimal) solution.
      Eigen::VectorXd polished = v;
      if (full_newton(disc, h, lambda, polished, settings.newton) &&
          (polished - v).lpNorm<Eigen::Infinity>() <= 1e-6 * (1.0 + v.lpNorm<Eigen::Infinity>())) {
        v = std::move(polished);
      }
      result.converged = true;
      result.iterations = k;
      result.u_max = v.lpNorm<Eigen::Infinity>();
      result.profile = SolutionProfile::from_values(grid, std::move(v));
      mark_decreasing(result.profile);
      return result;
    }

    const double ratio = increment / previous_increment;
    previous_increment = increment;
    if (cooldown > 0) --cooldown;
    if (!settings.accelerate || k < 3 || !(ratio > 0.5) || cooldown > 0) continue;

    Eigen::VectorXd jump = v;
    if (full_newton(disc, h, lambda, jump, settings.newton) &&
        jump.lpNorm<Eigen::Infinity>() <= settings.blowup_cutoff && (jump - v).minCoeff() >= -monotone_slack(v) &&
        linearly_stable(disc, h, lambda, jump)) {
      v = std::move(jump);
      previous_increment = std::numeric_limits<double>::infinity();
    } else {
      cooldown = backoff;
      backoff = std::min(2 * backoff, 64);
    }
  }
  return diverge(DivergenceReason::kStall, settings.max_recursion);
}

LambdaStarBracket estimate_lambda_star(const RiemannianModel& model, const OperatorConfig& cfg,
                                       const Nonlinearity& h, const GridPtr& grid, const SolverSettings& settings) {
  settings.validate();
  LambdaStarBracket bracket;
  bracket.h1_warning = !check_H1(h, cfg.p).holds;
  bracket.lambda0 = lower_bound_lambda0(model, cfg, h, grid);

  MinimalSolveResult lo = monotone_minimal_solution(model, cfg, h, bracket.lambda0, grid, settings);
  ++bracket.solves;
  if (!lo) {
    throw DivergenceError("minimal solution diverged at the lower bound lambda_0 = " +
                         std::to_string(bracket.lambda0) + " (" + to_string(lo.reason) + ")");
  }
  bracket.lambda_lo = bracket.lambda0;
  bracket.profile_lo = std::move(lo.profile);

  double up = 2.0 * bracket.lambda_lo;
  bool found = false;
  for (int d = 0; d < settings.max_doublings; ++d, up *= 2.0) {
    MinimalSolveResult trial =
        monotone_minimal_solution(model, cfg, h, up, grid, settings, &bracket.profile_lo.u);
    ++bracket.solves;
    if (!trial) {
      bracket.lambda_hi = up;
      bracket.hi_reason = trial.reason;
      found = true;
      break;
    }
    bracket.lambda_lo = up;
    bracket.profile_lo = std::move(trial.profile);
  }
  if (!found) {
    throw NumericalError("no divergence after " + std::to_string(settings.max_doublings) +
                         " doublings of lambda: lambda* appears unbounded");
  }

  while (bracket.lambda_hi - bracket.lambda_lo > settings.bisect_tol * bracket.lambda_lo) {
    const double mid = 0.5 * (bracket.lambda_lo + bracket.lambda_hi);
    MinimalSolveResult trial =
        monotone_minimal_solution(model, cfg, h, mid, grid, settings, &bracket.profile_lo.u);
    ++bracket.solves;
    if (trial) {
      bracket.lambda_lo = mid;
      bracket.profile_lo = std::move(trial.profile);
    } else {
      bracket.lambda_hi = mid;
      bracket.hi_reason = trial.reason;
    }
  }
  return bracket;
}

std::vector<double> default_lambda_samples(double lambda_lo) {
  if (!(lambda_lo > 0.0)) throw PreconditionError("lambda_lo must be positive");
  std::vector<double> samples;
  constexpr int kGeometric = 16;
  const double first = 0.05;
  const double last = 0.99;
  for (int i = 0; i < kGeometric; ++i) {
    samples.push_back(lambda_lo * first * std::pow(last / first, static_cast<double>(i) / (kGeometric - 1)));
  }
  for (double f : {0.9625, 0.975, 0.9875, 1.0}) samples.push_back(f * lambda_lo);
  std::sort(samples.begin(), samples.end());
  return samples;
}

Branch continue_branch(const RiemannianModel& model, const OperatorConfig& cfg, const Nonlinearity& h,
                       const GridPtr& grid, const SolverSettings& settings, const std::vector<double>& samples,
                       const LambdaStarBracket& bracket) {
  std::vector<double> lambdas = samples;
  std::sort(lambdas.begin(), lambdas.end());
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw PreconditionError("branch samples must be positive");
    if (lambda > bracket.lambda_lo) {
      throw PreconditionError("branch sample " + std::to_string(lambda) + " exceeds lambda_lo = " +
                              std::to_string(bracket.lambda_lo));
    }
  }

  Branch branch;
  branch.bracket = bracket;
  const double p = cfg.p;
  for (double lambda : lambdas) {
    const Eigen::VectorXd* warm = branch.points.empty() ? nullptr : &branch.points.back().profile.u;
    MinimalSolveResult solved = monotone_minimal_solution(model, cfg, h, lambda, grid, settings, warm);
    if (!solved) {
      throw DivergenceError("minimal solution diverged at lambda = " + std::to_string(lambda) + " (" +
                           to_string(solved.reason) + ")");
    }
    BranchPoint point;
    point.lambda = lambda;
    point.u_max = linf_norm(solved.profile);
    point.iters = solved.iterations;
    point.uniform_bounds.l1_up =
        weighted_integral(model, solved.profile, [p](double u) { return std::pow(std::max(u, 0.0), p - 1.0); });
    point.uniform_bounds.l1_hu = weighted_integral(model, solved.profile, [&h](double u) { return h.value(u); });
    point.profile = std::move(solved.profile);
    branch.points.push_back(std::move(point));
  }

  // Cold re-runs from zero at a few deterministic random samples.
  std::vector<std::size_t> order(branch.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937 rng(kCertificationSeed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(std::min<std::size_t>(order.size(), kCertificationSamples));
  for (std::size_t index : order) {
    const BranchPoint& point = branch.points[index];
    MinimalSolveResult cold = monotone_minimal_solution(model, cfg, h, point.lambda, grid, settings);
    if (!cold) {
      throw DivergenceError("cold re-run diverged at lambda = " + std::to_string(point.lambda));
    }
    const double deviation = (cold.profile.u - point.profile.u).lpNorm<Eigen::Infinity>();
    branch.certification_deviation = std::max(branch.certification_deviation, deviation);
    if (deviation > kMinimalityTolerance) {
      throw NumericalError("minimality certification failed at lambda = " + std::to_string(point.lambda) +
                           " (deviation " + std::to_string(deviation) + ")");
    }
    ++branch.certified_samples;
  }
  return branch;
}

Branch continue_branch(const RiemannianModel& model, const OperatorConfig& cfg, const Nonlinearity& h,
                       const GridPtr& grid, const SolverSettings& settings, const std::vector<double>& samples) {
  return continue_branch(model, cfg, h, grid, settings, samples,
                         estimate_lambda_star(model, cfg, h, grid, settings));
}

bool branch_is_monotone(const Branch& branch, double tol) {
  for (std::size_t i = 1; i < branch.points.size(); ++i) {
    const Eigen::VectorXd& a = branch.points[i - 1].profile.u;
    const Eigen::VectorXd& b = branch.points[i].profile.u;
    if ((a - b).maxCoeff() > tol) return false;
  }
  return true;
}

ExtremalApproximation extremal_approximation(const Branch& branch) {
  const double lambda_lo = branch.bracket.lambda_lo;
  const auto near = std::count_if(branch.points.begin(), branch.points.end(),
                                  [&](const BranchPoint& pt) { return pt.lambda >= 0.95 * lambda_lo; });
  if (near < 3) {
    throw PreconditionError("extremal approximation needs three branch points within 5% of lambda_lo");
  }
  const BranchPoint& a = branch.points[branch.points.size() - 2];
  const BranchPoint& b = branch.points.back();

  ExtremalApproximation out;
  out.profile = b.profile;
  out.lambda = b.lambda;
  out.u_max = b.u_max;
  out.lambda_star = 0.5 * (branch.bracket.lambda_lo + branch.bracket.lambda_hi);
  const double da = std::sqrt(out.lambda_star - a.lambda);
  const double db = std::sqrt(out.lambda_star - b.lambda);
  if (!(da > db)) throw PreconditionError("extremal approximation needs distinct lambda samples");
  out.extrapolated_u_max = (b.u_max * da - a.u_max * db) / (da - db);
  return out;
}

}  // namespace rplap
