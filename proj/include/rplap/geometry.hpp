#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace rplap {

enum class WarpingKind { kEuclidean, kHyperbolic, kSpherical, kCustom };

std::string to_string(WarpingKind kind);

/// psi and its first two derivatives at one radius.
struct WarpingValues {
  double psi = 0.0;
  double dpsi = 0.0;
  double d2psi = 0.0;
};

/// Warping function of the model metric dr^2 + psi(r)^2 dtheta^2.
///
/// Built-in kinds evaluate r, sinh r, sin r in closed form. Custom profiles
/// take callables for psi and psi'; when psi'' is not supplied it is formed
/// by a centered difference of psi' with step `kCustomSecondDerivativeStep`
/// (second-order one-sided near r = 0), which costs roughly 1e-10 in
/// absolute accuracy.
class WarpingProfile {
 public:
  using Function = std::function<double(double)>;

  static constexpr double kCustomSecondDerivativeStep = 1e-5;

  static WarpingProfile euclidean();
  static WarpingProfile hyperbolic();
  static WarpingProfile spherical();
  static WarpingProfile custom(Function psi, Function dpsi,
                               std::optional<Function> d2psi = std::nullopt,
                               double horizon = std::numeric_limits<double>::infinity());

  WarpingKind kind() const { return kind_; }
  double horizon() const { return horizon_; }

  /// Throws DomainError unless 0 <= r < horizon.
  WarpingValues eval(double r) const;

  double psi(double r) const { return eval(r).psi; }

 private:
  WarpingProfile(WarpingKind kind, double horizon) : kind_(kind), horizon_(horizon) {}

  WarpingKind kind_;
  double horizon_;
  Function psi_;
  Function dpsi_;
  std::optional<Function> d2psi_;
};

WarpingValues psi_eval(const WarpingProfile& profile, double r);

/// Riemannian model of dimension N >= 2 posed on the unit geodesic ball.
class RiemannianModel {
 public:
  /// Validates N >= 2, horizon > 1 and, for custom profiles, the pole
  /// conditions psi(0)=0, psi'(0)=1, psi''(0)=0 (linear extrapolation from
  /// r -> 0+, tolerance 1e-8) and psi > 0 on (0, min(R, 1 + margin)).
  RiemannianModel(int dimension, WarpingProfile profile);

  int dimension() const { return dimension_; }
  const WarpingProfile& profile() const { return profile_; }

 private:
  int dimension_;
  WarpingProfile profile_;
};

/// psi(r)^{N-1}; the radial volume density with the sphere area dropped.
double volume_weight(const RiemannianModel& model, double r);

/// -psi''/psi.
double sectional_curvature(const WarpingProfile& profile, double r);

/// d/dr((N-1) psi'/psi) = (N-1)(psi'' psi - psi'^2)/psi^2.
double stability_potential(const RiemannianModel& model, double r);

/// Largest delta <= 0.45 such that psi' > 0 on [0, delta].
double delta_admissible(const WarpingProfile& profile);
double delta_admissible(const RiemannianModel& model);

}  // namespace rplap
