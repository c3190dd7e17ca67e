#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rplap/branch_solver.hpp"
#include "rplap/discrete_operator.hpp"
#include "rplap/geometry.hpp"
#include "rplap/grid.hpp"
#include "rplap/nonlinearity.hpp"

namespace rplap {

struct GeometrySpec {
  WarpingKind kind = WarpingKind::kEuclidean;
  int N = 2;
  // custom kind: expressions in r
  std::string psi;
  std::string dpsi;
  std::string d2psi;  // optional
  double horizon = std::numeric_limits<double>::infinity();
};

struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::kExponential;
  double m = 0.0;
  // custom kind: expressions in s
  std::string f;
  std::string fprime;
};

struct GridSpec {
  int n = 1024;
  Grading grading = Grading::kUniform;
  double stretch = RadialGrid::kDefaultStretch;
};

/// Validated run configuration with defaults filled in.
struct RunConfig {
  GeometrySpec geometry;
  OperatorConfig op;  // p, eps_reg
  NonlinearitySpec nonlinearity;
  GridSpec grid;
  SolverSettings solver;
  std::optional<double> lambda;                // solve; stability at one point
  std::optional<std::vector<double>> lambdas;  // branch samples (default rule otherwise)
  std::vector<double> alphas{1.0, 1.3, 1.5};   // weighted estimate exponents

  RiemannianModel model() const;
  Nonlinearity reaction() const;
  GridPtr make_grid() const;
};

/// Parses a JSON document. Unknown keys and range violations throw
/// ConfigError naming the key and the constraint.
///
/// {"geometry": {"kind": "euclidean"|"hyperbolic"|"spherical"|"custom", "N": int,
///               "psi", "dpsi", "d2psi": expr(r), "horizon": number},
///  "p": number, "eps_reg": number,
///  "nonlinearity": {"kind": "exp"} | {"kind": "power", "m": number}
///                | {"kind": "custom", "f": expr(s), "fprime": expr(s)},
///  "grid": {"n": int, "grading": "uniform"|"boundary-refined", "stretch": number},
///  "solver": {"tol_fix", "max_recursion", "blowup_cutoff", "bisect_tol", "max_doublings",
///             "newton_tol", "newton_max_iterations", "accelerate"},
///  "lambda": number, "lambdas": [number], "alphas": [number]}
RunConfig parse_config(std::string_view text);

/// Reads `path` and parses it; text starting with '{' is parsed inline.
RunConfig load_config(const std::string& path_or_text);

}  // namespace rplap
