#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>

#include "mahc/errors.hpp"

namespace mahc {

// Dense row-major storage, matching how encoded rows are handed to workers.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXr = Matrix<double>;
using VectorXr = Vector<double>;

/// Largest condition estimate of G^T G accepted by least_squares_solve.
inline constexpr double kDefaultConditionCap = 1e12;

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entry");
}

template <typename DerivedA, typename DerivedX>
Vector<typename DerivedA::Scalar> mat_vec(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedX>& x) {
  if (a.cols() != x.rows() || x.cols() != 1) {
    throw InvalidInput("mat_vec: matrix has " + std::to_string(a.cols()) +
                       " columns but vector has length " + std::to_string(x.rows()));
  }
  Vector<typename DerivedA::Scalar> y = a * x;
  require_finite(y, "mat_vec result");
  return y;
}

/// Minimizes ||G z - y||_2 through column-pivoted Householder QR.
///
/// The condition number of G^T G is estimated as (|r_11| / |r_pp|)^2 from the
/// pivoted R factor; anything above `condition_cap` is rejected as singular.
/// Requires at least as many rows as columns.
template <typename DerivedG, typename DerivedY>
Vector<typename DerivedG::Scalar> least_squares_solve(const Eigen::MatrixBase<DerivedG>& g,
                                                      const Eigen::MatrixBase<DerivedY>& y,
                                                      double condition_cap = kDefaultConditionCap) {
  using Scalar = typename DerivedG::Scalar;
  if (g.rows() != y.rows() || y.cols() != 1) {
    throw InvalidInput("least_squares_solve: G has " + std::to_string(g.rows()) +
                       " rows but y has length " + std::to_string(y.rows()));
  }
  if (g.rows() < g.cols()) {
    throw InsufficientResults("least_squares_solve: " + std::to_string(g.rows()) +
                              " equations for " + std::to_string(g.cols()) + " unknowns");
  }
  require_finite(g, "least_squares_solve G");
  require_finite(y, "least_squares_solve y");

  Eigen::ColPivHouseholderQR<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> qr(g);
  const auto& r = qr.matrixR();
  const Eigen::Index n = g.cols();
  const double r_max = std::abs(static_cast<double>(r(0, 0)));
  const double r_min = std::abs(static_cast<double>(r(n - 1, n - 1)));
  const double ratio = r_min > 0.0 ? r_max / r_min : std::numeric_limits<double>::infinity();
  const double condition = ratio * ratio;
  if (!(condition <= condition_cap)) {
    throw SingularSystem("least_squares_solve: normal matrix is numerically singular", condition);
  }
  Vector<Scalar> z = qr.solve(y.derived());
  require_finite(z, "least_squares_solve result");
  return z;
}

/// Numerical rank via full-pivot LU; used by the encoding tests.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& m) {
  Eigen::FullPivLU<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(m);
  return lu.rank();
}

}  // namespace mahc
