#include "rplap/grid.hpp"

#include <cmath>
#include <utility>

#include "rplap/errors.hpp"

namespace rplap {

std::string to_string(Grading grading) {
  return grading == Grading::kUniform ? "uniform" : "boundary-refined";
}

RadialGrid RadialGrid::uniform(int intervals) {
  if (intervals < kMinIntervals) throw PreconditionError("grid needs n >= 16 intervals");
  Eigen::VectorXd nodes = Eigen::VectorXd::LinSpaced(intervals + 1, 0.0, 1.0);
  nodes(intervals) = 1.0;
  return RadialGrid(std::move(nodes), Grading::kUniform);
}

RadialGrid RadialGrid::boundary_refined(int intervals, double stretch) {
  if (intervals < kMinIntervals) throw PreconditionError("grid needs n >= 16 intervals");
  if (!(stretch > 0.0)) throw PreconditionError("grid stretch must be positive");
  Eigen::VectorXd nodes(intervals + 1);
  const double scale = std::tanh(0.5 * stretch);
  for (int i = 0; i <= intervals; ++i) {
    const double s = static_cast<double>(i) / intervals;
    nodes(i) = 0.5 * (1.0 + std::tanh(stretch * (s - 0.5)) / scale);
  }
  nodes(0) = 0.0;
  nodes(intervals) = 1.0;
  return RadialGrid(std::move(nodes), Grading::kBoundaryRefined);
}

RadialGrid RadialGrid::make(int intervals, Grading grading, double stretch) {
  return grading == Grading::kUniform ? uniform(intervals) : boundary_refined(intervals, stretch);
}

RadialGrid::RadialGrid(Eigen::VectorXd nodes, Grading grading)
    : nodes_(std::move(nodes)), grading_(grading) {
  const Eigen::Index count = nodes_.size();
  if (count < kMinIntervals + 1) throw PreconditionError("grid needs n >= 16 intervals");
  if (nodes_(0) != 0.0) throw PreconditionError("grid must start at r = 0");
  if (nodes_(count - 1) != 1.0) throw PreconditionError("grid must end at r = 1");
  spacing_ = nodes_.tail(count - 1) - nodes_.head(count - 1);
  if ((spacing_.array() <= 0.0).any()) throw PreconditionError("grid nodes must increase strictly");
  midpoints_ = 0.5 * (nodes_.tail(count - 1) + nodes_.head(count - 1));
  dual_widths_ = Eigen::VectorXd::Zero(count);
  dual_widths_.head(count - 1) += 0.5 * spacing_;
  dual_widths_.tail(count - 1) += 0.5 * spacing_;
}

}  // namespace rplap
