#include "rplap/commands.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <ostream>

#include "rplap/branch_solver.hpp"
#include "rplap/errors.hpp"
#include "rplap/output.hpp"
#include "rplap/stability.hpp"

namespace rplap {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Context {
  const RunConfig& cfg;
  std::filesystem::path out;
  std::ostream& log;

  void write(const std::string& name, const std::string& content) const {
    write_atomic(out / name, content);
    log << "wrote " << (out / name).string() << "\n";
  }

  void write_profile(double lambda, const SolutionProfile& profile) const {
    write("profile_" + format_label(lambda) + ".csv", profile_csv(profile));
  }
};

ordered_json json_number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(format_double(x)); }

LambdaStarBracket bracket_for(const Context& ctx, const RiemannianModel& model, const Nonlinearity& h,
                              const GridPtr& grid) {
  LambdaStarBracket bracket = estimate_lambda_star(model, ctx.cfg.op, h, grid, ctx.cfg.solver);
  if (bracket.h1_warning) ctx.log << "warning: superlinearity of h at infinity is not established\n";
  ordered_json doc;
  doc["lambda_lo"] = bracket.lambda_lo;
  doc["lambda_hi"] = bracket.lambda_hi;
  doc["lambda0"] = bracket.lambda0;
  doc["hi_reason"] = to_string(bracket.hi_reason);
  doc["solves"] = bracket.solves;
  doc["h1_warning"] = bracket.h1_warning;
  ctx.write("bracket.json", doc.dump(2) + "\n");
  ctx.log << "lambda* in [" << format_double(bracket.lambda_lo) << ", " << format_double(bracket.lambda_hi) << "]\n";
  return bracket;
}

Branch branch_for(const Context& ctx, const RiemannianModel& model, const Nonlinearity& h, const GridPtr& grid) {
  const LambdaStarBracket bracket = bracket_for(ctx, model, h, grid);
  const std::vector<double> samples = ctx.cfg.lambdas ? *ctx.cfg.lambdas : default_lambda_samples(bracket.lambda_lo);
  Branch branch = continue_branch(model, ctx.cfg.op, h, grid, ctx.cfg.solver, samples, bracket);
  annotate_stability(model, ctx.cfg.op, h, branch);
  return branch;
}

int cmd_solve(const Context& ctx) {
  if (!ctx.cfg.lambda) throw ConfigError("lambda: is required for the solve command");
  const RiemannianModel model = ctx.cfg.model();
  const Nonlinearity h = ctx.cfg.reaction();
  const double lambda = *ctx.cfg.lambda;
  const MinimalSolveResult result = monotone_minimal_solution(model, ctx.cfg.op, h, lambda, ctx.cfg.make_grid(),
                                                              ctx.cfg.solver);
  ordered_json doc;
  doc["lambda"] = lambda;
  doc["converged"] = result.converged;
  doc["reason"] = to_string(result.reason);
  doc["iterations"] = result.iterations;
  doc["u_max"] = json_number(result.u_max);
  ctx.write("solve.json", doc.dump(2) + "\n");
  if (!result) {
    ctx.log << "error: minimal-solution recursion diverged at lambda = " << format_double(lambda) << " ("
            << to_string(result.reason) << ")\n";
    return kExitDivergence;
  }
  ctx.write_profile(lambda, result.profile);
  return kExitOk;
}

int cmd_lambda_star(const Context& ctx) {
  const LambdaStarBracket bracket =
      bracket_for(ctx, ctx.cfg.model(), ctx.cfg.reaction(), ctx.cfg.make_grid());
  ctx.write_profile(bracket.lambda_lo, bracket.profile_lo);
  return kExitOk;
}

int cmd_branch(const Context& ctx) {
  const RiemannianModel model = ctx.cfg.model();
  const Branch branch = branch_for(ctx, model, ctx.cfg.reaction(), ctx.cfg.make_grid());
  CsvTable table({"lambda", "u_max", "mu1", "iters", "l1_up", "l1_hu"});
  for (const BranchPoint& pt : branch.points) {
    table.row({pt.lambda, pt.u_max, pt.mu1.value_or(std::nan("")), static_cast<double>(pt.iters),
               pt.uniform_bounds.l1_up, pt.uniform_bounds.l1_hu});
    ctx.write_profile(pt.lambda, pt.profile);
  }
  ctx.write("branch.csv", table.str());

  const auto near = std::count_if(branch.points.begin(), branch.points.end(), [&](const BranchPoint& pt) {
    return pt.lambda >= 0.95 * branch.bracket.lambda_lo;
  });
  if (near >= 3) {
    const ExtremalApproximation extremal = extremal_approximation(branch);
    ordered_json doc;
    doc["lambda"] = extremal.lambda;
    doc["lambda_star"] = extremal.lambda_star;
    doc["u_max"] = extremal.u_max;
    doc["extrapolated_u_max"] = extremal.extrapolated_u_max;
    ctx.write("extremal.json", doc.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_stability(const Context& ctx) {
  const RiemannianModel model = ctx.cfg.model();
  const Nonlinearity h = ctx.cfg.reaction();
  const GridPtr grid = ctx.cfg.make_grid();
  CsvTable table({"lambda", "mu1", "semi_stable"});
  auto add = [&](double lambda, double mu1) {
    table.row_cells({format_double(lambda), format_double(mu1), mu1 >= -kTolEig ? "true" : "false"});
  };
  if (ctx.cfg.lambda) {
    const double lambda = *ctx.cfg.lambda;
    const MinimalSolveResult solved = monotone_minimal_solution(model, ctx.cfg.op, h, lambda, grid, ctx.cfg.solver);
    if (!solved) {
      ctx.log << "error: minimal-solution recursion diverged at lambda = " << format_double(lambda) << "\n";
      return kExitDivergence;
    }
    const StabilityReport report = principal_eigenvalue(model, ctx.cfg.op, solved.profile,
                                                        [&](double s) { return lambda * h.derivative(s); });
    add(lambda, report.mu1);
    ctx.write("eigenfunction_" + format_label(lambda) + ".csv", profile_csv(report.eigenfunction));
  } else {
    const Branch branch = branch_for(ctx, model, h, grid);
    for (const BranchPoint& pt : branch.points) add(pt.lambda, *pt.mu1);
  }
  ctx.write("stability.csv", table.str());
  return kExitOk;
}

int cmd_estimates(const Context& ctx) {
  const RiemannianModel model = ctx.cfg.model();
  const Branch branch = branch_for(ctx, model, ctx.cfg.reaction(), ctx.cfg.make_grid());

  CsvTable estimate({"lambda", "alpha", "delta", "lhs", "ratio"});
  for (const BranchPoint& pt : branch.points) {
    for (double alpha : ctx.cfg.alphas) {
      const WeightedEstimateReport r = weighted_gradient_estimate(model, ctx.cfg.op, pt.profile, alpha);
      estimate.row({pt.lambda, r.alpha, r.delta, r.lhs, r.ratio});
    }
  }
  ctx.write("estimate.csv", estimate.str());

  const NormAudit audit = norm_estimate_audit(model, ctx.cfg.op, branch);
  CsvTable table({"lambda", "linf_over_lp", "linf_over_l1_lp", "q_lebesgue", "lq_over_lp", "q_sobolev", "w1q_over_lp"});
  for (const NormAuditRow& row : audit.rows) {
    table.row({row.lambda, row.linf_over_lp, row.linf_over_l1_lp, row.q_lebesgue, row.lq_over_lp, row.q_sobolev,
               row.w1q_over_lp});
  }
  ctx.write("audit.csv", table.str());
  ctx.write("exponents.json", exponents_json(audit.exponents));
  return kExitOk;
}

int cmd_exponents(const Context& ctx) {
  const ExponentReport report = regularity_exponents(ctx.cfg.geometry.N, ctx.cfg.op.p);
  ctx.write("exponents.json", exponents_json(report));
  ctx.log << "regime " << to_string(report.regime) << ", threshold " << format_double(report.threshold) << "\n";
  return kExitOk;
}

int cmd_torsion(const Context& ctx) {
  const SolutionProfile w = torsion_function(ctx.cfg.model(), ctx.cfg.op, ctx.cfg.make_grid());
  ctx.write("torsion.csv", profile_csv(w));
  ctx.log << "max w = " << format_double(w.u.maxCoeff()) << "\n";
  return kExitOk;
}

const std::vector<std::pair<std::string, std::function<int(const Context&)>>>& table() {
  static const std::vector<std::pair<std::string, std::function<int(const Context&)>>> commands{
      {"solve", cmd_solve},         {"branch", cmd_branch},       {"lambda-star", cmd_lambda_star},
      {"stability", cmd_stability}, {"estimates", cmd_estimates}, {"exponents", cmd_exponents},
      {"torsion", cmd_torsion}};
  return commands;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : table()) out.push_back(entry.first);
    return out;
  }();
  return names;
}

int run_command(const std::string& command, const RunConfig& cfg, const std::filesystem::path& out,
                std::ostream& log) {
  const auto it = std::find_if(table().begin(), table().end(), [&](const auto& e) { return e.first == command; });
  if (it == table().end()) {
    log << "error: unknown command '" << command << "'\n";
    return kExitConfig;
  }
  try {
    std::filesystem::create_directories(out);
    return it->second(Context{cfg, out, log});
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    log << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DivergenceError& e) {
    log << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace rplap
