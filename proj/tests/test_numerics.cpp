#include <doctest.h>

#include "mahc/errors.hpp"
#include "mahc/numerics.hpp"
#include "mahc/rng.hpp"

using namespace mahc;

namespace {

MatrixXr gaussian_matrix(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
  MatrixXr m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = sample_gaussian(0.0, 1.0, rng);
  return m;
}

}  // namespace

TEST_CASE("mat_vec small cases") {
  VectorXr x(3);
  x << 1, 2, 3;
  CHECK(mat_vec(MatrixXr::Identity(3, 3), x) == x);

  VectorXr x2(2);
  x2 << 5, -7;
  CHECK(mat_vec(MatrixXr::Zero(2, 2), x2) == VectorXr::Zero(2));

  MatrixXr a(2, 2);
  a << 1, 2, 3, 4;
  VectorXr ones = VectorXr::Ones(2);
  const VectorXr y = mat_vec(a, ones);
  CHECK(y(0) == 3.0);
  CHECK(y(1) == 7.0);
}

TEST_CASE("mat_vec rejects bad input") {
  CHECK_THROWS_AS(mat_vec(MatrixXr::Identity(3, 3), VectorXr::Ones(2)), InvalidInput);
  MatrixXr a = MatrixXr::Identity(2, 2);
  a(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(mat_vec(a, VectorXr::Ones(2)), InvalidInput);
}

TEST_CASE("least squares trivial systems") {
  VectorXr y(4);
  y << 1, -2, 3.5, 0;
  CHECK((least_squares_solve(MatrixXr::Identity(4, 4), y) - y).norm() == doctest::Approx(0.0));

  MatrixXr g(2, 1);
  g << 1, 1;
  VectorXr y2(2);
  y2 << 1, 3;
  CHECK(least_squares_solve(g, y2)(0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("least squares recovers a planted solution") {
  RngStream rng(101);
  const MatrixXr g = gaussian_matrix(5, 3, rng);
  VectorXr z(3);
  z << 0.25, -1.5, 3.0;
  const VectorXr got = least_squares_solve(g, VectorXr(g * z));
  CHECK((got - z).norm() / z.norm() < 1e-10);
}

TEST_CASE("least squares property: random well-conditioned systems up to 200x50") {
  RngStream rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cols = static_cast<Eigen::Index>(1 + sample_index(50, rng));
    const auto rows = cols + static_cast<Eigen::Index>(sample_index(static_cast<std::uint64_t>(201 - cols), rng));
    const MatrixXr g = gaussian_matrix(rows, cols, rng);
    const MatrixXr zm = gaussian_matrix(cols, 1, rng);
    const VectorXr z = zm.col(0);
    const VectorXr got = least_squares_solve(g, VectorXr(g * z));
    CHECK((got - z).norm() / z.norm() < 1e-9);
  }
}

TEST_CASE("least squares error paths") {
  CHECK_THROWS_AS(least_squares_solve(MatrixXr::Ones(2, 3), VectorXr::Ones(2)), InsufficientResults);
  CHECK_THROWS_AS(least_squares_solve(MatrixXr::Ones(3, 2), VectorXr::Ones(2)), InvalidInput);

  MatrixXr dup(3, 2);
  dup << 1, 1, 2, 2, 3, 3;
  try {
    least_squares_solve(dup, VectorXr::Ones(3));
    FAIL("expected SingularSystem");
  } catch (const SingularSystem& e) {
    CHECK(e.condition() > kDefaultConditionCap);
  }
}

TEST_CASE("numerical rank") {
  MatrixXr m(3, 3);
  m << 1, 2, 3, 2, 4, 6, 0, 1, 1;
  CHECK(numerical_rank(m) == 2);
  CHECK(numerical_rank(MatrixXr::Identity(4, 4)) == 4);
}
