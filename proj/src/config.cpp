#include "rplap/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

#include "rplap/errors.hpp"
#include "rplap/expression.hpp"

namespace rplap {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& message) {
  throw ConfigError(key + ": " + message);
}

void reject_unknown(const json& object, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!object.is_object()) fail(where.empty() ? "config" : where, "must be a JSON object");
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) fail(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
  }
}

double number(const json& value, const std::string& key) {
  if (!value.is_number()) fail(key, "must be a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) fail(key, "must be finite");
  return x;
}

int integer(const json& value, const std::string& key) {
  if (!value.is_number_integer()) fail(key, "must be an integer");
  return value.get<int>();
}

std::string text(const json& value, const std::string& key) {
  if (!value.is_string()) fail(key, "must be a string");
  return value.get<std::string>();
}

double positive(const json& value, const std::string& key) {
  const double x = number(value, key);
  if (!(x > 0.0)) fail(key, "must be positive");
  return x;
}

std::vector<double> positive_list(const json& value, const std::string& key) {
  if (!value.is_array()) fail(key, "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) out.push_back(positive(value[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

// Compiles once to surface grammar errors at parse time.
void check_expression(const std::string& source, const char* variable, const std::string& key) {
  try {
    Expression::parse(source, variable);
  } catch (const ConfigError& e) {
    fail(key, e.what());
  }
}

GeometrySpec parse_geometry(const json& g) {
  reject_unknown(g, "geometry", {"kind", "N", "psi", "dpsi", "d2psi", "horizon"});
  GeometrySpec spec;
  if (!g.contains("kind")) fail("geometry.kind", "is required");
  const std::string kind = text(g["kind"], "geometry.kind");
  if (kind == "euclidean") {
    spec.kind = WarpingKind::kEuclidean;
  } else if (kind == "hyperbolic") {
    spec.kind = WarpingKind::kHyperbolic;
  } else if (kind == "spherical") {
    spec.kind = WarpingKind::kSpherical;
  } else if (kind == "custom") {
    spec.kind = WarpingKind::kCustom;
  } else {
    fail("geometry.kind", "must be one of euclidean, hyperbolic, spherical, custom");
  }
  if (!g.contains("N")) fail("geometry.N", "is required");
  spec.N = integer(g["N"], "geometry.N");
  if (spec.N < 2) fail("geometry.N", "N must be ≥ 2");

  const bool custom = spec.kind == WarpingKind::kCustom;
  for (const char* key : {"psi", "dpsi", "d2psi", "horizon"}) {
    if (!custom && g.contains(key)) fail(std::string("geometry.") + key, "only allowed for kind custom");
  }
  if (custom) {
    if (!g.contains("psi") || !g.contains("dpsi")) fail("geometry", "custom kind requires psi and dpsi");
    spec.psi = text(g["psi"], "geometry.psi");
    spec.dpsi = text(g["dpsi"], "geometry.dpsi");
    check_expression(spec.psi, "r", "geometry.psi");
    check_expression(spec.dpsi, "r", "geometry.dpsi");
    if (g.contains("d2psi")) {
      spec.d2psi = text(g["d2psi"], "geometry.d2psi");
      check_expression(spec.d2psi, "r", "geometry.d2psi");
    }
    if (g.contains("horizon")) {
      spec.horizon = number(g["horizon"], "geometry.horizon");
      if (!(spec.horizon > 1.0)) fail("geometry.horizon", "must exceed 1");
    }
  }
  return spec;
}

NonlinearitySpec parse_nonlinearity(const json& h) {
  reject_unknown(h, "nonlinearity", {"kind", "m", "f", "fprime"});
  NonlinearitySpec spec;
  if (!h.contains("kind")) fail("nonlinearity.kind", "is required");
  const std::string kind = text(h["kind"], "nonlinearity.kind");
  if (kind == "exp") {
    spec.kind = NonlinearityKind::kExponential;
  } else if (kind == "power") {
    spec.kind = NonlinearityKind::kPower;
    if (!h.contains("m")) fail("nonlinearity.m", "is required for kind power");
    spec.m = positive(h["m"], "nonlinearity.m");
  } else if (kind == "custom") {
    spec.kind = NonlinearityKind::kCustom;
    if (!h.contains("f") || !h.contains("fprime")) fail("nonlinearity", "custom kind requires f and fprime");
    spec.f = text(h["f"], "nonlinearity.f");
    spec.fprime = text(h["fprime"], "nonlinearity.fprime");
    check_expression(spec.f, "s", "nonlinearity.f");
    check_expression(spec.fprime, "s", "nonlinearity.fprime");
  } else {
    fail("nonlinearity.kind", "must be one of exp, power, custom");
  }
  if (spec.kind != NonlinearityKind::kPower && h.contains("m")) fail("nonlinearity.m", "only allowed for kind power");
  if (spec.kind != NonlinearityKind::kCustom && (h.contains("f") || h.contains("fprime"))) {
    fail("nonlinearity", "f and fprime only allowed for kind custom");
  }
  return spec;
}

GridSpec parse_grid(const json& g) {
  reject_unknown(g, "grid", {"n", "grading", "stretch"});
  GridSpec spec;
  if (g.contains("n")) {
    spec.n = integer(g["n"], "grid.n");
    if (spec.n < RadialGrid::kMinIntervals) fail("grid.n", "must be ≥ 16");
  }
  if (g.contains("grading")) {
    const std::string grading = text(g["grading"], "grid.grading");
    if (grading == "uniform") {
      spec.grading = Grading::kUniform;
    } else if (grading == "boundary-refined") {
      spec.grading = Grading::kBoundaryRefined;
    } else {
      fail("grid.grading", "must be uniform or boundary-refined");
    }
  }
  if (g.contains("stretch")) spec.stretch = positive(g["stretch"], "grid.stretch");
  return spec;
}

SolverSettings parse_solver(const json& s) {
  reject_unknown(s, "solver", {"tol_fix", "max_recursion", "blowup_cutoff", "bisect_tol", "max_doublings",
                               "newton_tol", "newton_max_iterations", "accelerate"});
  SolverSettings out;
  auto positive_int = [&](const char* key, int& target) {
    if (!s.contains(key)) return;
    target = integer(s[key], std::string("solver.") + key);
    if (target <= 0) fail(std::string("solver.") + key, "must be positive");
  };
  if (s.contains("tol_fix")) out.tol_fix = positive(s["tol_fix"], "solver.tol_fix");
  if (s.contains("blowup_cutoff")) out.blowup_cutoff = positive(s["blowup_cutoff"], "solver.blowup_cutoff");
  if (s.contains("bisect_tol")) out.bisect_tol = positive(s["bisect_tol"], "solver.bisect_tol");
  if (s.contains("newton_tol")) out.newton.tolerance = positive(s["newton_tol"], "solver.newton_tol");
  positive_int("max_recursion", out.max_recursion);
  positive_int("max_doublings", out.max_doublings);
  positive_int("newton_max_iterations", out.newton.max_iterations);
  if (s.contains("accelerate")) {
    if (!s["accelerate"].is_boolean()) fail("solver.accelerate", "must be true or false");
    out.accelerate = s["accelerate"].get<bool>();
  }
  return out;
}

}  // namespace

RiemannianModel RunConfig::model() const {
  switch (geometry.kind) {
    case WarpingKind::kEuclidean:
      return RiemannianModel(geometry.N, WarpingProfile::euclidean());
    case WarpingKind::kHyperbolic:
      return RiemannianModel(geometry.N, WarpingProfile::hyperbolic());
    case WarpingKind::kSpherical:
      return RiemannianModel(geometry.N, WarpingProfile::spherical());
    case WarpingKind::kCustom:
      break;
  }
  const Expression psi = Expression::parse(geometry.psi, "r");
  const Expression dpsi = Expression::parse(geometry.dpsi, "r");
  std::optional<WarpingProfile::Function> d2psi;
  if (!geometry.d2psi.empty()) d2psi = Expression::parse(geometry.d2psi, "r");
  return RiemannianModel(geometry.N, WarpingProfile::custom(psi, dpsi, d2psi, geometry.horizon));
}

Nonlinearity RunConfig::reaction() const {
  switch (nonlinearity.kind) {
    case NonlinearityKind::kExponential:
      return Nonlinearity::exponential();
    case NonlinearityKind::kPower:
      return Nonlinearity::power(nonlinearity.m);
    case NonlinearityKind::kCustom:
      break;
  }
  return Nonlinearity::custom(Expression::parse(nonlinearity.f, "s"), Expression::parse(nonlinearity.fprime, "s"),
                              nonlinearity.f);
}

GridPtr RunConfig::make_grid() const {
  return std::make_shared<const RadialGrid>(RadialGrid::make(grid.n, grid.grading, grid.stretch));
}

RunConfig parse_config(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(doc, "", {"geometry", "p", "eps_reg", "nonlinearity", "grid", "solver", "lambda", "lambdas", "alphas"});

  RunConfig cfg;
  if (!doc.contains("geometry")) fail("geometry", "is required");
  cfg.geometry = parse_geometry(doc["geometry"]);
  if (!doc.contains("p")) fail("p", "is required");
  cfg.op.p = number(doc["p"], "p");
  if (!(cfg.op.p > 1.0)) fail("p", "p must exceed 1");
  if (doc.contains("eps_reg")) {
    cfg.op.eps_reg = number(doc["eps_reg"], "eps_reg");
    if (!(cfg.op.eps_reg > 0.0) || cfg.op.eps_reg > 1e-4) fail("eps_reg", "must lie in (0, 1e-4]");
  }
  if (doc.contains("nonlinearity")) cfg.nonlinearity = parse_nonlinearity(doc["nonlinearity"]);
  if (doc.contains("grid")) cfg.grid = parse_grid(doc["grid"]);
  if (doc.contains("solver")) cfg.solver = parse_solver(doc["solver"]);
  if (doc.contains("lambda")) cfg.lambda = positive(doc["lambda"], "lambda");
  if (doc.contains("lambdas")) cfg.lambdas = positive_list(doc["lambdas"], "lambdas");
  if (doc.contains("alphas")) {
    cfg.alphas = positive_list(doc["alphas"], "alphas");
    for (double a : cfg.alphas) {
      if (a < 1.0) fail("alphas", "every alpha must be ≥ 1");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path_or_text) {
  const auto first = path_or_text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && path_or_text[first] == '{') return parse_config(path_or_text);
  std::ifstream in(path_or_text, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path_or_text);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace rplap
