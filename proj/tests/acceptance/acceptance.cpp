// Acceptance gate: one PASS/FAIL line per criterion, tolerances fixed below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rplap/branch_solver.hpp"
#include "rplap/commands.hpp"
#include "rplap/config.hpp"
#include "rplap/errors.hpp"
#include "rplap/stability.hpp"

using namespace rplap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

GridPtr uniform(int n) { return std::make_shared<const RadialGrid>(RadialGrid::uniform(n)); }

double max_error(const SolutionProfile& u, const std::function<double(double)>& exact) {
  double err = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u.u(i) - exact(u.grid->node(i))));
  return err;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Branch solved_branch(const RiemannianModel& model, const OperatorConfig& cfg, const Nonlinearity& h, const GridPtr& grid,
                     std::vector<double> extra_fractions = {}) {
  const LambdaStarBracket bracket = estimate_lambda_star(model, cfg, h, grid);
  std::vector<double> samples = default_lambda_samples(bracket.lambda_lo);
  for (double f : extra_fractions) samples.push_back(f * bracket.lambda_lo);
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
  return continue_branch(model, cfg, h, grid, {}, samples, bracket);
}

const BranchPoint& at_fraction(const Branch& branch, double fraction) {
  const double target = fraction * branch.bracket.lambda_lo;
  const BranchPoint* best = &branch.points.front();
  for (const BranchPoint& pt : branch.points) {
    if (std::abs(pt.lambda - target) < std::abs(best->lambda - target)) best = &pt;
  }
  return *best;
}

// --- criteria ---------------------------------------------------------------

Outcome torsion_oracles() {
  Outcome out;
  for (int N : {2, 3}) {
    const RiemannianModel model(N, WarpingProfile::euclidean());
    const auto exact = [N](double r) { return (1 - r * r) / (2.0 * N); };
    auto t0 = std::chrono::steady_clock::now();
    const double e1024 = max_error(torsion_function(model, {}, uniform(1024)), exact);
    const double t = seconds_since(t0);
    const double e512 = max_error(torsion_function(model, {}, uniform(512)), exact);
    const double ratio = e512 / e1024;
    out.require(e1024 <= 1e-6, fmt("N=%.0f err(n=1024)=%.3e <= 1e-6", N, e1024));
    out.require(ratio >= 3.5 && ratio <= 4.5, fmt("N=%.0f ratio=%.3f in [3.5,4.5]", N, ratio));
    out.require(t < 1.0, fmt("N=%.0f runtime %.3fs < 1s", N, t));
  }
  const RiemannianModel model(3, WarpingProfile::euclidean());
  auto t0 = std::chrono::steady_clock::now();
  const double u0 = torsion_function(model, {3.0, 1e-8}, uniform(2048)).u(0);
  const double t = seconds_since(t0);
  const double exact = 2 / (3 * std::sqrt(3.0));
  out.require(std::abs(u0 - exact) <= 1e-4, fmt("p=3 u(0)=%.6f vs %.6f within 1e-4", u0, exact));
  out.require(t < 1.0, fmt("p=3 runtime %.3fs < 1s", t));
  return out;
}

Outcome gelfand_disk() {
  Outcome out;
  const RiemannianModel disk(2, WarpingProfile::euclidean());
  const auto h = Nonlinearity::exponential();
  const GridPtr grid = uniform(1024);
  const LambdaStarBracket br = estimate_lambda_star(disk, {}, h, grid);
  const double width = (br.lambda_hi - br.lambda_lo) / br.lambda_lo;
  out.require(br.lambda_lo <= 2.0 && 2.0 <= br.lambda_hi,
              fmt("bracket [%.6f, %.6f] contains 2", br.lambda_lo, br.lambda_hi));
  out.require(width <= 2e-3, fmt("relative width %.2e <= 2e-3", width));
  const double b = 3 - 2 * std::sqrt(2.0);
  const MinimalSolveResult one = monotone_minimal_solution(disk, {}, h, 1.0, grid);
  const double u0 = one.converged ? one.profile.u(0) : NAN;
  out.require(std::abs(u0 - 2 * std::log(1 + b)) <= 5e-4, fmt("u(0) at lambda=1: %.5f vs %.5f", u0, 2 * std::log(1 + b)));
  out.require(std::abs(br.lambda0 - std::exp(-0.25)) <= 1e-4, fmt("lambda0=%.6f vs e^-1/4", br.lambda0));
  out.require(br.lambda0 <= br.lambda_lo, "lambda0 <= lambda_lo");
  return out;
}

Outcome singular_regime() {
  Outcome out;
  const RiemannianModel model(10, WarpingProfile::euclidean());
  const GridPtr grid = std::make_shared<const RadialGrid>(RadialGrid::boundary_refined(4096));
  SolverSettings settings;
  settings.bisect_tol = 1e-6;
  const LambdaStarBracket br = estimate_lambda_star(model, {}, Nonlinearity::exponential(), grid, settings);
  const double lo = std::abs(br.lambda_lo - 16.0) / 16.0;
  const double hi = std::abs(br.lambda_hi - 16.0) / 16.0;
  out.require(lo <= 0.02 && hi <= 0.02, fmt("bracket [%.6f, %.6f] within 2%% of 16", br.lambda_lo, br.lambda_hi));
  double dev = 0.0;
  for (Eigen::Index i = 0; i < br.profile_lo.size(); ++i) {
    const double r = grid->node(i);
    if (r >= 0.05 && r <= 0.5) dev = std::max(dev, std::abs(br.profile_lo.u(i) + 2 * std::log(r)));
  }
  out.require(dev <= 0.3, fmt("max |u + 2 log r| on [0.05,0.5] = %.4f <= 0.3", dev));
  return out;
}

Outcome eigenvalues() {
  Outcome out;
  const GridPtr grid = uniform(1024);
  const auto zero = SolutionProfile::from_values(grid, Eigen::VectorXd::Zero(grid->node_count()));
  const ReactionDerivative none = [](double) { return 0.0; };
  for (auto [N, exact, name] : {std::tuple{3, M_PI * M_PI, "pi^2"}, std::tuple{2, 5.783185962946784, "j01^2"}}) {
    const RiemannianModel model(N, WarpingProfile::euclidean());
    const double mu = principal_eigenvalue(model, {}, zero, none).mu1;
    out.require(std::abs(mu - exact) <= 1e-3, fmt("N=%.0f mu1=%.6f vs %.6f", N, mu, exact));
    double worst = 0.0;
    for (double c : {-3.0, 1.0, 4.5, 20.0}) {
      const double shifted = principal_eigenvalue(model, {}, zero, [c](double) { return c; }).mu1;
      worst = std::max(worst, std::abs(shifted - (mu - c)));
    }
    out.require(worst <= 1e-8, fmt("N=%.0f shift identity error %.2e <= 1e-8", N, worst));
  }
  return out;
}

Outcome semi_stability() {
  Outcome out;
  const auto h = Nonlinearity::exponential();
  for (auto [name, model] : {std::pair{"euclidean N=2", RiemannianModel(2, WarpingProfile::euclidean())},
                             std::pair{"hyperbolic N=3", RiemannianModel(3, WarpingProfile::hyperbolic())}}) {
    Branch branch = solved_branch(model, {}, h, uniform(1024), {0.5, 0.99});
    annotate_stability(model, {}, h, branch);
    double worst = INFINITY;
    for (const BranchPoint& pt : branch.points) {
      if (pt.lambda <= 0.99 * branch.bracket.lambda_lo * (1 + 1e-12)) worst = std::min(worst, *pt.mu1);
    }
    const double mid = *at_fraction(branch, 0.5).mu1;
    const double near = *at_fraction(branch, 0.99).mu1;
    out.require(worst >= -1e-6, std::string(name) + fmt(": min mu1=%.4e >= -1e-6", worst));
    out.require(near < mid, std::string(name) + fmt(": mu1(0.99)=%.4f < mu1(0.5)=%.4f", near, mid));
  }
  return out;
}

Outcome hardy_suite() {
  Outcome out;
  const auto h = Nonlinearity::exponential();
  const GridPtr grid = uniform(1024);
  for (double p : {2.0, 3.0}) {
    for (auto profile : {WarpingProfile::euclidean(), WarpingProfile::hyperbolic(), WarpingProfile::spherical()}) {
      const RiemannianModel model(3, profile);
      const OperatorConfig cfg{p, 1e-8};
      const Branch branch = solved_branch(model, cfg, h, grid);
      const double delta = delta_admissible(model);
      const double amax = alpha_max(3, p);
      std::vector<Eigen::VectorXd> tests;
      for (int ia = 0; ia < 5; ++ia) {
        for (int ie = 0; ie < 5; ++ie) {
          const PropTestFunction eta = prop_test_function(model, cfg, 1 + (amax - 1) * ia / 5.0, delta,
                                                          delta * (0.02 + 0.18 * ie));
          Eigen::VectorXd v(grid->node_count());
          for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = profile.psi(grid->node(i)) * eta(grid->node(i));
          tests.push_back(std::move(v));
        }
      }
      double worst = INFINITY;
      for (const BranchPoint& pt : branch.points) {
        const double scale = gradient_energy(model, cfg, pt.profile);
        for (const Eigen::VectorXd& eta : tests) worst = std::min(worst, hardy_form(model, cfg, pt.profile, eta) / scale);
      }
      out.require(worst >= -1e-8, to_string(profile.kind()) + fmt(" p=%.0f: min form/scale=%.3e over %.0f points",
                                                                   p, worst, branch.points.size()));
    }
  }
  return out;
}

Outcome weighted_gradient_audit() {
  Outcome out;
  const RiemannianModel model(3, WarpingProfile::euclidean());
  const Branch branch = solved_branch(model, {}, Nonlinearity::exponential(), uniform(1024), {0.5, 0.99});
  for (double alpha : {1.0, 1.3, 1.5}) {
    bool finite = true;
    for (const BranchPoint& pt : branch.points) {
      finite = finite && std::isfinite(weighted_gradient_estimate(model, {}, pt.profile, alpha).ratio);
    }
    const double mid = weighted_gradient_estimate(model, {}, at_fraction(branch, 0.5).profile, alpha).ratio;
    const double near = weighted_gradient_estimate(model, {}, at_fraction(branch, 0.99).profile, alpha).ratio;
    out.require(finite, fmt("alpha=%.1f ratios finite", alpha));
    out.require(near <= 3 * mid, fmt("alpha=%.1f ratio(0.99)=%.4g <= 3*ratio(0.5)=%.4g", alpha, near, 3 * mid));
  }
  std::string message;
  try {
    weighted_gradient_estimate(model, {}, branch.points.front().profile, 2.5);
  } catch (const PreconditionError& e) {
    message = e.what();
  }
  out.require(message.find("alpha_max") != std::string::npos && message.find("2.41421") != std::string::npos,
              "alpha=2.5 rejected naming alpha_max=2.41421");
  return out;
}

Outcome exponent_calculator() {
  Outcome out;
  out.require(regularity_threshold(2.0) == 10.0 && regularity_threshold(3.0) == 9.0 &&
                  regularity_threshold(1.5) == 13.5,
              "thresholds 10, 9, 13.5 exact");
  const ExponentReport r = regularity_exponents(11, 2.0);
  out.require(std::abs(r.q0 - 32.571) <= 1e-3 && std::abs(r.q1 - 8.2230) <= 1e-3,
              fmt("q0(11,2)=%.4f q1(11,2)=%.4f", r.q0, r.q1));
  const ExponentReport b = regularity_exponents(10, 2.0);
  out.require(std::isinf(b.q0) && b.q0 > 0, "q0(10,2)=+inf");
  int checked = 0;
  bool remark = true;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (int N = static_cast<int>(std::ceil(regularity_threshold(p) + 1)); N <= 50; ++N) {
      const ExponentReport e = regularity_exponents(N, p);
      if (std::isfinite(e.q0)) remark = remark && e.q0 > N * p / (N - p);
      if (std::isfinite(e.q1)) remark = remark && e.q1 > p;
      ++checked;
    }
  }
  out.require(remark, fmt("remark inequalities on %.0f (N,p) pairs", checked));
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome property_suites() {
  Outcome out;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // maximum and comparison principles
  bool max_ok = true;
  bool cmp_ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    const double p = trial % 2 ? 3.0 : 2.0;
    const RiemannianModel model(2 + trial % 3, trial % 3 == 1 ? WarpingProfile::hyperbolic() : WarpingProfile::spherical());
    const RadialDiscretization disc(model, {p, 1e-8}, uniform(256));
    Eigen::VectorXd lo(257), hi(257);
    for (Eigen::Index i = 0; i < 257; ++i) {
      lo(i) = 2 * unif(rng);
      hi(i) = lo(i) + unif(rng);
    }
    const SolutionProfile a = disc.solve_fixed_rhs(lo);
    const SolutionProfile b = disc.solve_fixed_rhs(hi);
    max_ok = max_ok && a.u.minCoeff() >= -1e-12 && b.u.minCoeff() >= -1e-12;
    cmp_ok = cmp_ok && (a.u - b.u).maxCoeff() <= 1e-10;
  }
  out.require(max_ok, "maximum principle, 10 random rhs pairs");
  out.require(cmp_ok, "comparison principle, 10 random rhs pairs");

  // monotone recursion certificate (checked inside every recursion step) and
  // branch monotonicity
  const auto h = Nonlinearity::exponential();
  int solves = 0;
  bool certificate = true;
  bool monotone = true;
  for (auto model : {RiemannianModel(2, WarpingProfile::euclidean()), RiemannianModel(3, WarpingProfile::spherical())}) {
    for (double p : {2.0, 3.0}) {
      try {
        const Branch branch = solved_branch(model, {p, 1e-8}, h, uniform(512));
        solves += static_cast<int>(branch.points.size()) + branch.bracket.solves + branch.certified_samples;
        monotone = monotone && branch_is_monotone(branch);
      } catch (const NumericalError& e) {
        certificate = false;
      }
    }
  }
  out.require(certificate, fmt("monotone certificate held on %.0f recursion solves", solves));
  out.require(monotone, "branch monotone in lambda (4 branches)");

  // byte-determinism of every command's outputs
  const RunConfig cfg = parse_config(R"({"geometry":{"kind":"hyperbolic","N":3},"p":2,
      "nonlinearity":{"kind":"exp"},"grid":{"n":256},"lambda":1.5,"lambdas":[0.5,1.0,2.0,3.0]})");
  const fs::path root = fs::temp_directory_path() / "rplap_acceptance_determinism";
  fs::remove_all(root);
  std::ostringstream log;
  bool same = true;
  int files = 0;
  for (const std::string& command : command_names()) {
    const int a = run_command(command, cfg, root / "a" / command, log);
    const int b = run_command(command, cfg, root / "b" / command, log);
    same = same && a == kExitOk && a == b;
    for (const auto& entry : fs::directory_iterator(root / "a" / command)) {
      same = same && slurp(entry.path()) == slurp(root / "b" / command / entry.path().filename());
      ++files;
    }
  }
  out.require(same, fmt("byte-identical outputs across two runs (%.0f files, 7 commands)", files));
  fs::remove_all(root);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 torsion oracles", torsion_oracles},
      {"2 Gelfand disk", gelfand_disk},
      {"3 singular regime N=10", singular_regime},
      {"4 eigenvalue validation", eigenvalues},
      {"5 semi-stability along the branch", semi_stability},
      {"6 Hardy-form suite", hardy_suite},
      {"7 weighted gradient audit", weighted_gradient_audit},
      {"8 exponent calculator", exponent_calculator},
      {"9 property suites", property_suites},
  };
  const std::vector<double> budget{1e9, 30.0, 300.0, 1e9, 1e9, 1e9, 1e9, 1e9, 1e9};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(t0);
    if (elapsed > budget[i]) outcome.require(false, fmt("runtime %.1fs over budget %.0fs", elapsed, budget[i]));
    if (!outcome.pass) ++failures;
    std::printf("%s [%s] %s (%.2fs)\n", outcome.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                outcome.detail.c_str(), elapsed);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
