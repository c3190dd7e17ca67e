#pragma once

#include <Eigen/Core>
#include <cmath>

namespace rplap {

/// sum_i m_i |v_i|^q for nonnegative masses m.
template <typename DerivedV, typename DerivedM>
typename DerivedV::Scalar weighted_power_sum(const Eigen::MatrixBase<DerivedV>& values,
                                             const Eigen::MatrixBase<DerivedM>& masses,
                                             typename DerivedV::Scalar q) {
  using Scalar = typename DerivedV::Scalar;
  if (q == Scalar(1)) return masses.dot(values.cwiseAbs());
  if (q == Scalar(2)) return masses.dot(values.cwiseAbs2());
  return masses.dot(values.cwiseAbs().array().pow(q).matrix());
}

/// (sum_i m_i |v_i|^q)^{1/q}.
template <typename DerivedV, typename DerivedM>
typename DerivedV::Scalar weighted_lq(const Eigen::MatrixBase<DerivedV>& values,
                                      const Eigen::MatrixBase<DerivedM>& masses,
                                      typename DerivedV::Scalar q) {
  using std::pow;
  return pow(weighted_power_sum(values, masses, q), 1 / q);
}

}  // namespace rplap
