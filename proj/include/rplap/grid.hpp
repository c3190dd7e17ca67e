#pragma once

#include <Eigen/Core>
#include <string>

namespace rplap {

enum class Grading { kUniform, kBoundaryRefined };

std::string to_string(Grading grading);

/// Radial nodes 0 = r_0 < r_1 < ... < r_n = 1 with n >= 16 intervals.
class RadialGrid {
 public:
  static constexpr int kMinIntervals = 16;
  static constexpr double kDefaultStretch = 8.0;

  static RadialGrid uniform(int intervals);

  /// tanh clustering at both ends, r(s) = (1 + tanh(b(s - 1/2)) / tanh(b/2)) / 2.
  /// Near each end the spacing grows geometrically with ratio ~exp(2b/n),
  /// which resolves both the psi^{N-1} -> 0 pole and the boundary layer.
  static RadialGrid boundary_refined(int intervals, double stretch = kDefaultStretch);

  static RadialGrid make(int intervals, Grading grading, double stretch = kDefaultStretch);

  /// Throws PreconditionError unless the invariants hold.
  RadialGrid(Eigen::VectorXd nodes, Grading grading);

  int intervals() const { return static_cast<int>(nodes_.size()) - 1; }
  Eigen::Index node_count() const { return nodes_.size(); }
  Grading grading() const { return grading_; }

  const Eigen::VectorXd& nodes() const { return nodes_; }
  double node(Eigen::Index i) const { return nodes_(i); }

  /// r_{i+1} - r_i, one per interval.
  const Eigen::VectorXd& spacing() const { return spacing_; }
  /// (r_i + r_{i+1}) / 2, one per interval.
  const Eigen::VectorXd& midpoints() const { return midpoints_; }
  /// Dual-cell width about each node: half of each adjacent interval.
  const Eigen::VectorXd& dual_widths() const { return dual_widths_; }

 private:
  Eigen::VectorXd nodes_;
  Eigen::VectorXd spacing_;
  Eigen::VectorXd midpoints_;
  Eigen::VectorXd dual_widths_;
  Grading grading_;
};

}  // namespace rplap
