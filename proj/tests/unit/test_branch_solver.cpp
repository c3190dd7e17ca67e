#include <cmath>

#include "doctest.h"
#include "rplap/branch_solver.hpp"
#include "rplap/errors.hpp"

using namespace rplap;
using doctest::Approx;

namespace {

GridPtr uniform(int n) { return std::make_shared<const RadialGrid>(RadialGrid::uniform(n)); }

const RiemannianModel kDisk(2, WarpingProfile::euclidean());

}  // namespace

TEST_CASE("lower bound lambda_0") {
  const GridPtr grid = uniform(1024);
  CHECK(std::abs(lower_bound_lambda0(kDisk, {}, Nonlinearity::exponential(), grid) - std::exp(-0.25)) <= 1e-4);
  CHECK(std::abs(lower_bound_lambda0(RiemannianModel(3, WarpingProfile::euclidean()), {}, Nonlinearity::exponential(),
                                     grid) -
                 std::exp(-1.0 / 6)) <= 1e-4);
  CHECK(std::abs(lower_bound_lambda0(kDisk, {}, Nonlinearity::power(3), grid) - 0.512) <= 1e-3);
}

TEST_CASE("minimal solution on the disk") {
  const GridPtr grid = uniform(1024);
  const double b = 3 - 2 * std::sqrt(2.0);  // explicit family at lambda = 1
  const MinimalSolveResult one = monotone_minimal_solution(kDisk, {}, Nonlinearity::exponential(), 1.0, grid);
  REQUIRE(one.converged);
  CHECK(std::abs(one.profile.u(0) - 2 * std::log(1 + b)) <= 5e-4);
  CHECK(one.profile.decreasing);
  CHECK(one.u_max == linf_norm(one.profile));

  // fixed-point residual of the full problem
  const RadialDiscretization disc(kDisk, {}, grid);
  const Eigen::VectorXd rhs = one.profile.u.array().exp().matrix();
  CHECK(disc.residual(one.profile.u, rhs).lpNorm<Eigen::Infinity>() <= 10 * 1e-10);

  const MinimalSolveResult tiny = monotone_minimal_solution(kDisk, {}, Nonlinearity::exponential(), 1e-6, grid);
  REQUIRE(tiny.converged);
  CHECK(tiny.u_max <= 1e-5);

  const MinimalSolveResult beyond = monotone_minimal_solution(kDisk, {}, Nonlinearity::exponential(), 3.0, grid);
  CHECK_FALSE(beyond.converged);
  CHECK(beyond.reason != DivergenceReason::kNone);

  CHECK_THROWS_AS(monotone_minimal_solution(kDisk, {}, Nonlinearity::exponential(), -1.0, grid), PreconditionError);
}

TEST_CASE("recursion without acceleration reaches the same minimal solution") {
  const GridPtr grid = uniform(256);
  SolverSettings plain;
  plain.accelerate = false;
  const auto a = monotone_minimal_solution(kDisk, {}, Nonlinearity::exponential(), 1.0, grid, plain);
  const auto b = monotone_minimal_solution(kDisk, {}, Nonlinearity::exponential(), 1.0, grid);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  CHECK((a.profile.u - b.profile.u).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("lambda* bracket on the disk") {
  const LambdaStarBracket br = estimate_lambda_star(kDisk, {}, Nonlinearity::exponential(), uniform(1024));
  CHECK(br.lambda_lo <= 2.0);
  CHECK(br.lambda_hi >= 2.0);
  CHECK(br.lambda_hi - br.lambda_lo <= 0.002 * 2.0);
  CHECK(br.lambda0 <= br.lambda_lo);
  CHECK_FALSE(br.h1_warning);
  CHECK(br.profile_lo.decreasing);
}

TEST_CASE("unbounded lambda* is reported") {
  SolverSettings s;
  s.max_doublings = 3;
  s.blowup_cutoff = 1e300;
  const auto sublinear = Nonlinearity::power(0.5);
  CHECK_THROWS_AS(estimate_lambda_star(kDisk, {}, sublinear, uniform(64), s), NumericalError);
}

TEST_CASE("continuation along the disk branch") {
  const GridPtr grid = uniform(512);
  const auto h = Nonlinearity::exponential();
  const LambdaStarBracket bracket = estimate_lambda_star(kDisk, {}, h, grid);
  const Branch branch = continue_branch(kDisk, {}, h, grid, {}, {1.9, 0.5, 1.5, 1.0}, bracket);
  REQUIRE(branch.points.size() == 4);
  for (std::size_t i = 1; i < branch.points.size(); ++i) {
    CHECK(branch.points[i].lambda > branch.points[i - 1].lambda);
    CHECK(branch.points[i].u_max > branch.points[i - 1].u_max);
  }
  CHECK(branch_is_monotone(branch));
  CHECK(branch.certified_samples == 3);
  CHECK(branch.certification_deviation <= 1e-7);
  for (const BranchPoint& pt : branch.points) {
    CHECK(pt.profile.slope.maxCoeff() <= 1e-10);
    CHECK_FALSE(pt.mu1.has_value());
  }

  const Branch empty = continue_branch(kDisk, {}, h, grid, {}, {}, bracket);
  CHECK(empty.points.empty());
  CHECK(empty.bracket.lambda_hi == bracket.lambda_hi);

  CHECK_THROWS_AS(continue_branch(kDisk, {}, h, grid, {}, {2.5}, bracket), PreconditionError);
}

TEST_CASE("default samples") {
  const auto s = default_lambda_samples(2.0);
  REQUIRE(s.size() == 20);
  CHECK(s.front() == Approx(0.1));
  CHECK(s.back() == 2.0);
  CHECK(std::count_if(s.begin(), s.end(), [](double x) { return x >= 0.95 * 2.0; }) == 5);
  CHECK(std::is_sorted(s.begin(), s.end()));
}

TEST_CASE("uniform L1 bounds on the hyperbolic branch") {
  const RiemannianModel model(3, WarpingProfile::hyperbolic());
  const GridPtr grid = uniform(512);
  const auto h = Nonlinearity::exponential();
  const LambdaStarBracket bracket = estimate_lambda_star(model, {}, h, grid);
  const Branch branch = continue_branch(model, {}, h, grid, {}, default_lambda_samples(bracket.lambda_lo), bracket);
  for (const BranchPoint& pt : branch.points) {
    CHECK(std::isfinite(pt.uniform_bounds.l1_up));
    CHECK(std::isfinite(pt.uniform_bounds.l1_hu));
  }
  // bounded as lambda -> lambda*: the last two samples agree closely
  const std::size_t m = branch.points.size();
  const double a = branch.points[m - 2].uniform_bounds.l1_hu;
  const double b = branch.points[m - 1].uniform_bounds.l1_hu;
  CHECK(std::abs(b - a) <= 0.25 * a);
}

TEST_CASE("extremal approximation") {
  const auto h = Nonlinearity::exponential();
  {
    const GridPtr grid = uniform(1024);
    const LambdaStarBracket bracket = estimate_lambda_star(kDisk, {}, h, grid);
    const Branch branch = continue_branch(kDisk, {}, h, grid, {}, default_lambda_samples(bracket.lambda_lo), bracket);
    const ExtremalApproximation ex = extremal_approximation(branch);
    CHECK(std::abs(ex.extrapolated_u_max - 2 * std::log(2.0)) <= 0.05);
    CHECK(ex.lambda == bracket.lambda_lo);
  }
  {
    const RiemannianModel ball(3, WarpingProfile::euclidean());
    const GridPtr grid = uniform(512);
    const LambdaStarBracket bracket = estimate_lambda_star(ball, {}, h, grid);
    const Branch branch = continue_branch(ball, {}, h, grid, {}, default_lambda_samples(bracket.lambda_lo), bracket);
    const ExtremalApproximation ex = extremal_approximation(branch);
    CHECK(std::isfinite(ex.extrapolated_u_max));
    CHECK(ex.extrapolated_u_max < 10.0);
    CHECK(ex.extrapolated_u_max >= ex.u_max);

    Branch single = branch;
    single.points.resize(1);
    CHECK_THROWS_AS(extremal_approximation(single), PreconditionError);
  }
}

TEST_CASE("N = 1 is rejected") {
  CHECK_THROWS_AS(RiemannianModel(1, WarpingProfile::euclidean()), PreconditionError);
}
