#include "rplap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rplap/errors.hpp"

namespace rplap {

namespace {

constexpr double kDeltaCap = 0.45;
constexpr double kPoleTolerance = 1e-6;
constexpr double kPositivityMargin = 0.05;

std::string format_radius(double r) { return std::to_string(r); }

}  // namespace

std::string to_string(WarpingKind kind) {
  switch (kind) {
    case WarpingKind::kEuclidean:
      return "euclidean";
    case WarpingKind::kHyperbolic:
      return "hyperbolic";
    case WarpingKind::kSpherical:
      return "spherical";
    case WarpingKind::kCustom:
      return "custom";
  }
  return "unknown";
}

WarpingProfile WarpingProfile::euclidean() {
  return WarpingProfile(WarpingKind::kEuclidean, std::numeric_limits<double>::infinity());
}

WarpingProfile WarpingProfile::hyperbolic() {
  return WarpingProfile(WarpingKind::kHyperbolic, std::numeric_limits<double>::infinity());
}

WarpingProfile WarpingProfile::spherical() { return WarpingProfile(WarpingKind::kSpherical, M_PI); }

WarpingProfile WarpingProfile::custom(Function psi, Function dpsi, std::optional<Function> d2psi,
                                      double horizon) {
  if (!psi || !dpsi) throw PreconditionError("custom warping profile needs psi and psi'");
  if (!(horizon > 0.0)) throw PreconditionError("custom warping horizon must be positive");
  WarpingProfile profile(WarpingKind::kCustom, horizon);
  profile.psi_ = std::move(psi);
  profile.dpsi_ = std::move(dpsi);
  profile.d2psi_ = std::move(d2psi);
  return profile;
}

WarpingValues WarpingProfile::eval(double r) const {
  if (!(r >= 0.0) || !(r < horizon_)) {
    throw DomainError("radius " + format_radius(r) + " outside [0, horizon)");
  }
  switch (kind_) {
    case WarpingKind::kEuclidean:
      return {r, 1.0, 0.0};
    case WarpingKind::kHyperbolic: {
      const double s = std::sinh(r);
      return {s, std::cosh(r), s};
    }
    case WarpingKind::kSpherical: {
      const double s = std::sin(r);
      return {s, std::cos(r), -s};
    }
    case WarpingKind::kCustom:
      break;
  }

  WarpingValues v{psi_(r), dpsi_(r), 0.0};
  if (d2psi_) {
    v.d2psi = (*d2psi_)(r);
  } else {
    const double h = kCustomSecondDerivativeStep;
    if (r >= h && r + h < horizon_) {
      v.d2psi = (dpsi_(r + h) - dpsi_(r - h)) / (2.0 * h);
    } else if (r < h) {
      v.d2psi = (-3.0 * v.dpsi + 4.0 * dpsi_(r + h) - dpsi_(r + 2.0 * h)) / (2.0 * h);
    } else {
      v.d2psi = (3.0 * v.dpsi - 4.0 * dpsi_(r - h) + dpsi_(r - 2.0 * h)) / (2.0 * h);
    }
  }
  return v;
}

WarpingValues psi_eval(const WarpingProfile& profile, double r) { return profile.eval(r); }

RiemannianModel::RiemannianModel(int dimension, WarpingProfile profile)
    : dimension_(dimension), profile_(std::move(profile)) {
  if (dimension_ < 2) throw PreconditionError("N must be >= 2");
  if (!(profile_.horizon() > 1.0)) {
    throw PreconditionError("warping horizon R must exceed 1 (problem posed on the unit ball)");
  }
  if (profile_.kind() != WarpingKind::kCustom) return;

  // Pole conditions by Richardson extrapolation from h, h/2, h/4 -> f(0).
  const double h = 1e-3;
  const WarpingValues a = profile_.eval(h);
  const WarpingValues b = profile_.eval(0.5 * h);
  const WarpingValues c = profile_.eval(0.25 * h);
  const auto at_pole = [](double fa, double fb, double fc) { return (8.0 * fc - 6.0 * fb + fa) / 3.0; };
  const double psi0 = at_pole(a.psi, b.psi, c.psi);
  const double dpsi0 = at_pole(a.dpsi, b.dpsi, c.dpsi);
  const double d2psi0 = at_pole(a.d2psi, b.d2psi, c.d2psi);
  if (std::abs(psi0) > kPoleTolerance) throw PreconditionError("custom warping needs psi(0) = 0");
  if (std::abs(dpsi0 - 1.0) > kPoleTolerance) {
    throw PreconditionError("custom warping needs psi'(0) = 1");
  }
  if (std::abs(d2psi0) > kPoleTolerance) {
    throw PreconditionError("custom warping needs psi''(0) = 0");
  }

  const double upper = std::min(profile_.horizon(), 1.0 + kPositivityMargin);
  constexpr int kSamples = 4096;
  for (int i = 1; i < kSamples; ++i) {
    const double r = upper * i / kSamples;
    const double value = profile_.psi(r);
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw PreconditionError("custom warping psi must be positive on (0, 1]; fails at r = " +
                              format_radius(r));
    }
  }
}

double volume_weight(const RiemannianModel& model, double r) {
  if (!(r > 0.0)) throw DomainError("volume_weight needs r > 0");
  return std::pow(model.profile().psi(r), model.dimension() - 1);
}

double sectional_curvature(const WarpingProfile& profile, double r) {
  const WarpingValues v = profile.eval(r);
  if (v.psi == 0.0) throw SingularPointError("sectional curvature undefined where psi = 0");
  return -v.d2psi / v.psi;
}

double stability_potential(const RiemannianModel& model, double r) {
  const WarpingValues v = model.profile().eval(r);
  if (v.psi == 0.0) throw SingularPointError("stability potential undefined where psi = 0");
  return (model.dimension() - 1) * (v.d2psi * v.psi - v.dpsi * v.dpsi) / (v.psi * v.psi);
}

double delta_admissible(const WarpingProfile& profile) {
  constexpr int kSamples = 4500;
  const double upper = std::min(kDeltaCap, std::nextafter(profile.horizon(), 0.0));
  double last_good = 0.0;
  for (int i = 1; i <= kSamples; ++i) {
    const double r = upper * i / kSamples;
    if (profile.eval(r).dpsi > 0.0) {
      last_good = r;
      continue;
    }
    // Refine the sign change of psi' on (last_good, r); keep the positive side.
    double lo = last_good;
    double hi = r;
    for (int k = 0; k < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++k) {
      const double mid = 0.5 * (lo + hi);
      (profile.eval(mid).dpsi > 0.0 ? lo : hi) = mid;
    }
    return lo;
  }
  return upper;
}

double delta_admissible(const RiemannianModel& model) { return delta_admissible(model.profile()); }

}  // namespace rplap
