#include "rplap/nonlinearity.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "rplap/errors.hpp"

namespace rplap {

namespace {

double guard(double v, double s) {
  if (!std::isfinite(v) || std::abs(v) > Nonlinearity::kSaturationLevel) {
    throw SaturationError("nonlinearity saturated at s = " + std::to_string(s), s);
  }
  return v;
}

}  // namespace

Nonlinearity Nonlinearity::exponential() {
  Nonlinearity nl(NonlinearityKind::kExponential, 0.0, "exp");
  nl.value_ = [](double s) { return std::exp(s); };
  nl.derivative_ = [](double s) { return std::exp(s); };
  return nl;
}

Nonlinearity Nonlinearity::power(double m) {
  if (!std::isfinite(m)) throw PreconditionError("power exponent must be finite");
  Nonlinearity nl(NonlinearityKind::kPower, m, "power");
  nl.value_ = [m](double s) { return std::pow(1.0 + s, m); };
  nl.derivative_ = [m](double s) { return m * std::pow(1.0 + s, m - 1.0); };
  return nl;
}

Nonlinearity Nonlinearity::custom(Function value, Function derivative, std::string label) {
  if (!value || !derivative) throw PreconditionError("custom nonlinearity needs f and f'");
  Nonlinearity nl(NonlinearityKind::kCustom, 0.0, std::move(label));
  nl.value_ = std::move(value);
  nl.derivative_ = std::move(derivative);
  return nl;
}

double Nonlinearity::value(double s) const {
  if (!std::isfinite(s)) throw SaturationError("nonlinearity argument is not finite", s);
  return guard(value_(s), s);
}

double Nonlinearity::derivative(double s) const {
  if (!std::isfinite(s)) throw SaturationError("nonlinearity argument is not finite", s);
  return guard(derivative_(s), s);
}

double eval(const Nonlinearity& nl, double s) { return nl.value(s); }

SuperlinearityVerdict check_H1(const Nonlinearity& nl, double p) {
  if (!(p > 1.0)) throw PreconditionError("p must exceed 1");
  switch (nl.kind()) {
    case NonlinearityKind::kExponential:
      return {true, false};
    case NonlinearityKind::kPower:
      return {nl.exponent() > p - 1.0, false};
    case NonlinearityKind::kCustom:
      break;
  }
  double previous = -std::numeric_limits<double>::infinity();
  for (const double t : {1e2, 1e4, 1e6}) {
    double ratio = std::numeric_limits<double>::infinity();
    try {
      ratio = nl.value(t) / std::pow(t, p - 1.0);
    } catch (const SaturationError&) {
      // Overflow before t^{p-1} does: growth is superlinear at this scale.
    }
    const bool both_saturated = std::isinf(ratio) && std::isinf(previous) && previous > 0.0;
    if (!(ratio > previous) && !both_saturated) return {false, true};
    previous = ratio;
  }
  return {true, true};
}

}  // namespace rplap
