#pragma once

// The N-invariant potential of the Killing metric, its moment map (computed
// through two independent formulas and cross-checked), and the affine family
// of all N-invariant potentials.

#include "hermitube/levi.hpp"
#include "hermitube/siegel.hpp"

#include <cmath>
#include <random>

namespace hermitube {

// rho_hat(y) = -(b/4) sum ln y_j
inline double rho_hat(const LieModel& m, const Vec& y) {
  if (y.minCoeff() <= 0) throw std::invalid_argument("rho_hat: nonpositive coordinate");
  return -(m.b / 4.0) * y.array().log().sum();
}

inline BaseFunction rho_hat_function(const LieModel& m) {
  return BaseFunction::log_barrier(Vec::Constant(m.rank, m.b / 4.0));
}

// Sp(4,R) in Siegel coordinates S + iT with T symmetric positive definite:
// the potential is ln 1/(det T)^3, and the same value must come out of the
// slice coordinates e^{2a_1} = t1 - t3^2/t2, e^{2a_2} = t2.
inline double siegel_rho(const LieModel& m, const Mat& T) {
  if (m.family != Family::SpR || m.rank != 2)
    throw std::invalid_argument("siegel_rho: needs the rank-2 symplectic model");
  if (T.rows() != 2 || T.cols() != 2 || (T - T.transpose()).norm() > 1e-12)
    throw std::invalid_argument("siegel_rho: T must be symmetric 2x2");
  Eigen::SelfAdjointEigenSolver<Mat> es(T);
  if (es.eigenvalues().minCoeff() <= 0)
    throw std::invalid_argument("siegel_rho: T must be positive definite");
  double det_route = std::log(1.0 / std::pow(T.determinant(), 3));
  Vec y(2);
  y << T(0, 0) - T(0, 1) * T(0, 1) / T(1, 1), T(1, 1);
  double coord_route = rho_hat(m, y);
  if (std::abs(det_route - coord_route) > 1e-10 * std::max(1.0, std::abs(det_route)))
    throw std::logic_error("siegel potential routes disagree");
  return det_route;
}

// Moment map at z = n exp(H) K paired with X in n, via both formulas:
//   -(b/4) sum_j e^{-2 a_j} (E^j)*(Ad_{n^-1} X)  and  B(Ad_{n^-1} X, Ad_a Z0).
// Their agreement is a model consistency requirement, enforced here.
inline double moment_map_group(const LieModel& m, const Mat& n, const Vec& H, const Mat& X) {
  Mat ni = n.inverse();
  Mat AdnX = ni * X * n;
  double f1 = 0.0;
  for (int j = 0; j < m.rank; ++j)
    f1 += -(m.b / 4.0) * std::exp(-2.0 * H(j)) * m.Ejstar(j, AdnX);
  Mat Ha = Mat::Zero(m.matrix_dim, m.matrix_dim);
  for (int j = 0; j < m.rank; ++j) Ha += H(j) * m.A[j];
  Mat ea = Ha.exp();
  double f2 = m.killing(AdnX, ea * m.Z0 * ea.inverse());
  if (std::abs(f1 - f2) > 1e-8 * std::max(1.0, std::abs(f1)))
    throw std::logic_error("moment map formulas disagree");
  return f1;
}

// n given by its nilpotent logarithm
inline double moment_map(const LieModel& m, const Mat& n_log, const Vec& H, const Mat& X) {
  return moment_map_group(m, n_log.exp(), H, X);
}

// Restriction identity: the same value as B(Ad_{(na)^-1} X, Z0).
inline double moment_map_global_form(const LieModel& m, const Mat& n_log, const Vec& H,
                                     const Mat& X) {
  Mat Ha = Mat::Zero(m.matrix_dim, m.matrix_dim);
  for (int j = 0; j < m.rank; ++j) Ha += H(j) * m.A[j];
  Mat na = n_log.exp() * Ha.exp();
  Mat nai = na.inverse();
  return m.killing(nai * X * na, m.Z0);
}

// ---------------------------------------------------------------------------

struct PotentialSpec {
  double c = 0.0;  // coefficient on y_r; admissible only in the tube case
  double d = 0.0;
  BaseFunction sigma_hat;
};

inline PotentialSpec potential_family(const LieModel& m, double c, double d) {
  if (!m.tube && c != 0.0)
    throw std::invalid_argument("non-tube models admit only constant shifts of the potential");
  Vec cy = Vec::Zero(m.rank);
  cy(m.rank - 1) = c;
  BaseFunction sigma = BaseFunction::sum(
      {rho_hat_function(m), BaseFunction::affine(cy, d)}, Vec::Ones(2));
  return {c, d, std::move(sigma)};
}

// f is a potential of the Killing metric iff its Levi form matches the one of
// rho_hat at every sample (1e-7 per entry).
inline bool is_killing_potential(const LieModel& m, const BaseFunction& fhat,
                                 const std::vector<Vec>& samples) {
  BaseFunction rho = rho_hat_function(m);
  for (auto& y : samples) {
    Mat a = assemble_levi(m, fhat, y).dense(m);
    Mat b = assemble_levi(m, rho, y).dense(m);
    if (((a - b).array().abs() > 1e-7).any()) return false;
  }
  return true;
}

// assemble_levi(rho_hat) must reproduce the invariant metric B(phi X, phi Y)
// on every basis pair of s.
inline VerificationReport verify_killing_identity(const LieModel& m, int points = 5,
                                                  unsigned seed = 42) {
  VerificationReport rep{"killing potential identity", points, 0.0, true, ""};
  BaseFunction rho = rho_hat_function(m);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> P(0.3, 3.0);
  for (int t = 0; t < points; ++t) {
    Vec y(m.rank);
    for (int j = 0; j < m.rank; ++j) y(j) = P(rng);
    Mat dense = assemble_levi(m, rho, y).dense(m);
    for (int p = 0; p < m.dim_s(); ++p)
      for (int q = 0; q < m.dim_s(); ++q) {
        double want = m.inner(m.basis_s()[p].X, m.basis_s()[q].X);
        rep.max_residual = std::max(rep.max_residual, std::abs(dense(p, q) - want));
      }
  }
  rep.pass = rep.max_residual <= 1e-8;
  return rep;
}

}  // namespace hermitube
