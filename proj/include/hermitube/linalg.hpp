#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <stdexcept>
#include <vector>

namespace hermitube {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace detail {

inline Vec flatten(const Mat& X) {
  return Eigen::Map<const Vec>(X.data(), X.size());
}

inline Mat unflatten(const Vec& v, int rows, int cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

// Columns of the returned matrix span the kernel of M (singular value < tol).
inline Mat kernel(const Mat& M, double tol = 1e-8) {
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixV().rightCols(M.cols() - rank);
}

// Least-squares coordinate solver for a fixed spanning set.
class CoordSolver {
 public:
  CoordSolver() = default;
  explicit CoordSolver(const std::vector<Mat>& basis) {
    if (basis.empty()) throw std::invalid_argument("empty basis");
    rows_ = static_cast<int>(basis[0].rows());
    cols_ = static_cast<int>(basis[0].cols());
    Mat S(rows_ * cols_, static_cast<int>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) S.col(static_cast<int>(k)) = flatten(basis[k]);
    S_ = S;
    qr_.compute(S);
  }

  // Coordinates of X in the spanning set; residual reported through *residual.
  Vec coords(const Mat& X, double* residual = nullptr) const {
    Vec x = flatten(X);
    Vec c = qr_.solve(x);
    if (residual) *residual = (S_ * c - x).norm();
    return c;
  }

  bool contains(const Mat& X, double tol = 1e-9) const {
    double res = 0.0;
    coords(X, &res);
    return res <= tol * std::max(1.0, flatten(X).norm());
  }

  int size() const { return static_cast<int>(S_.cols()); }

 private:
  Mat S_;
  Eigen::ColPivHouseholderQR<Mat> qr_;
  int rows_ = 0, cols_ = 0;
};

}  // namespace detail
}  // namespace hermitube
