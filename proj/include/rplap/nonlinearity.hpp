#pragma once

#include <functional>
#include <string>

namespace rplap {

enum class NonlinearityKind { kExponential, kPower, kCustom };

/// Reaction term h (or f) with its derivative.
///
/// Power nonlinearities are (1 + s)^m so that h(0) = 1 > 0. Evaluation
/// throws SaturationError once |h(s)| exceeds kSaturationLevel or turns
/// non-finite; the branch solver reads that as blow-up.
class Nonlinearity {
 public:
  using Function = std::function<double(double)>;

  static constexpr double kSaturationLevel = 1e300;

  static Nonlinearity exponential();
  static Nonlinearity power(double m);
  static Nonlinearity custom(Function value, Function derivative, std::string label = "custom");

  NonlinearityKind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  const std::string& label() const { return label_; }

  double value(double s) const;
  double derivative(double s) const;

 private:
  Nonlinearity(NonlinearityKind kind, double exponent, std::string label)
      : kind_(kind), exponent_(exponent), label_(std::move(label)) {}

  NonlinearityKind kind_;
  double exponent_ = 0.0;
  std::string label_;
  Function value_;
  Function derivative_;
};

double eval(const Nonlinearity& nl, double s);

struct SuperlinearityVerdict {
  bool holds = false;
  bool heuristic = false;  // custom kinds are probed numerically
  explicit operator bool() const { return holds; }
};

/// Superlinearity lim h(t)/t^{p-1} = +inf. Exponential always holds,
/// (1+s)^m holds iff m > p - 1, custom kinds are probed at t = 1e2, 1e4, 1e6
/// and must show strictly growing ratios.
SuperlinearityVerdict check_H1(const Nonlinearity& nl, double p);

}  // namespace rplap
