#pragma once

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <string>

#include "rplap/errors.hpp"

namespace rplap {

/// Square tridiagonal matrix stored as three diagonals.
///
/// lower(i) = A(i+1, i), diag(i) = A(i, i), upper(i) = A(i, i+1).
template <typename Scalar>
class Tridiagonal {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Tridiagonal() = default;
  explicit Tridiagonal(Eigen::Index n)
      : lower_(Vector::Zero(n > 0 ? n - 1 : 0)),
        diag_(Vector::Zero(n)),
        upper_(Vector::Zero(n > 0 ? n - 1 : 0)) {}

  Eigen::Index size() const { return diag_.size(); }

  Vector& lower() { return lower_; }
  Vector& diag() { return diag_; }
  Vector& upper() { return upper_; }
  const Vector& lower() const { return lower_; }
  const Vector& diag() const { return diag_; }
  const Vector& upper() const { return upper_; }

  /// Entry (i, j); zero off the band.
  Scalar coeff(Eigen::Index i, Eigen::Index j) const {
    if (i == j) return diag_(i);
    if (j == i + 1) return upper_(i);
    if (i == j + 1) return lower_(j);
    return Scalar(0);
  }

  template <typename Derived>
  Vector operator*(const Eigen::MatrixBase<Derived>& x) const {
    const Eigen::Index n = size();
    Vector y = diag_.cwiseProduct(x);
    if (n > 1) {
      y.head(n - 1) += upper_.cwiseProduct(x.tail(n - 1));
      y.tail(n - 1) += lower_.cwiseProduct(x.head(n - 1));
    }
    return y;
  }

  /// Thomas algorithm without pivoting. Throws NumericalError on a zero or
  /// non-finite pivot.
  template <typename Derived>
  Vector solve(const Eigen::MatrixBase<Derived>& rhs) const {
    const Eigen::Index n = size();
    Vector c(n);
    Vector d(n);
    Scalar pivot = diag_(0);
    check_pivot(pivot, 0);
    c(0) = n > 1 ? upper_(0) / pivot : Scalar(0);
    d(0) = rhs(0) / pivot;
    for (Eigen::Index i = 1; i < n; ++i) {
      pivot = diag_(i) - lower_(i - 1) * c(i - 1);
      check_pivot(pivot, i);
      c(i) = i + 1 < n ? upper_(i) / pivot : Scalar(0);
      d(i) = (rhs(i) - lower_(i - 1) * d(i - 1)) / pivot;
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) d(i) -= c(i) * d(i + 1);
    return d;
  }

  /// Number of negative pivots of the LDL^T factorization of the symmetric
  /// matrix A - shift * diag(mass) (Sylvester inertia). `upper` is used for
  /// the off-diagonal, `lower` is ignored.
  template <typename Derived>
  Eigen::Index count_negative_pivots(Scalar shift, const Eigen::MatrixBase<Derived>& mass) const {
    const Eigen::Index n = size();
    const Scalar tiny = std::numeric_limits<Scalar>::min();
    Eigen::Index negatives = 0;
    Scalar pivot = diag_(0) - shift * mass(0);
    for (Eigen::Index i = 0;;) {
      if (pivot == Scalar(0)) pivot = -tiny;
      if (pivot < Scalar(0)) ++negatives;
      if (++i == n) break;
      pivot = diag_(i) - shift * mass(i) - upper_(i - 1) * upper_(i - 1) / pivot;
    }
    return negatives;
  }

  Eigen::Index count_negative_pivots() const {
    return count_negative_pivots(Scalar(0), Vector::Zero(size()));
  }

 private:
  static void check_pivot(Scalar pivot, Eigen::Index i) {
    using std::isfinite;
    if (pivot == Scalar(0) || !isfinite(pivot)) {
      throw NumericalError("tridiagonal solve: singular pivot at row " + std::to_string(i));
    }
  }

  Vector lower_;
  Vector diag_;
  Vector upper_;
};

using TridiagonalXd = Tridiagonal<double>;

}  // namespace rplap
