#include <Eigen/Dense>

#include "doctest.h"
#include "rplap/errors.hpp"
#include "rplap/tridiagonal.hpp"

using namespace rplap;

namespace {

TridiagonalXd laplacian(Eigen::Index n) {
  TridiagonalXd t(n);
  t.diag().setConstant(2.0);
  t.lower().setConstant(-1.0);
  t.upper().setConstant(-1.0);
  return t;
}

Eigen::MatrixXd dense(const TridiagonalXd& t) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(t.size(), t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i)
    for (Eigen::Index j = 0; j < t.size(); ++j) m(i, j) = t.coeff(i, j);
  return m;
}

}  // namespace

TEST_CASE("product and solve agree with dense algebra") {
  TridiagonalXd t(6);
  t.diag() << 4, 5, 6, 7, 8, 9;
  t.lower() << 1, -1, 2, -2, 0.5;
  t.upper() << -1, 2, 0.3, 1, -1;
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(6, -1.0, 2.0);
  CHECK((t * x - dense(t) * x).norm() <= 1e-14);
  const Eigen::VectorXd b = t * x;
  CHECK((t.solve(b) - x).norm() <= 1e-13);
}

TEST_CASE("singular pivot throws") {
  TridiagonalXd t(3);
  CHECK_THROWS_AS(t.solve(Eigen::VectorXd::Ones(3)), NumericalError);
}

TEST_CASE("Sturm count matches the spectrum of the discrete Laplacian") {
  const Eigen::Index n = 20;
  const TridiagonalXd t = laplacian(n);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense(t)).eigenvalues();
  for (double shift : {0.0, 0.5, 1.1, 2.0, 3.9, 4.1}) {
    const auto expected = (eig.array() < shift).count();
    CHECK(t.count_negative_pivots(shift, ones) == expected);
  }
  CHECK(t.count_negative_pivots() == 0);
}
