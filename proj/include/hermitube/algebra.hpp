#pragma once

// Concrete matrix models of the Lie algebras behind the classical Hermitian
// symmetric spaces of tube and non-tube type: sl(2,R), sp(2r,R) and su(p,q),
// the latter realified so that every computation stays in real arithmetic.
//
// The model exposes the normalized structural data used everywhere else in
// the library: the Killing form, the Cartan involution theta(X) = -X^T, the
// restricted-root basis of s = n + a, the sl(2)-triples (E^j, theta E^j, A_j)
// with [A_j, E^l] = 2 delta_{jl} E^l, the complex structure J on s, and the
// constant b = B(A_j, A_j).

#include "hermitube/linalg.hpp"

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hermitube {

enum class Family { SL2R, SpR, SUpq };

enum class RootKind {
  ABlock,   // a itself (not a root space)
  TwoE,     // g^{2e_j}
  EminusE,  // g^{e_j - e_l}, j < l
  EplusE,   // g^{e_j + e_l}, j < l
  EShort    // g^{e_j}, non-tube only
};

struct RootLabel {
  RootKind kind = RootKind::ABlock;
  int j = -1;
  int l = -1;  // second index for e_j -+ e_l

  // alpha(A_k), the restricted-root coefficient on the k-th coordinate of a.
  double coeff(int k) const {
    switch (kind) {
      case RootKind::ABlock: return 0.0;
      case RootKind::TwoE: return k == j ? 2.0 : 0.0;
      case RootKind::EminusE: return k == j ? 1.0 : (k == l ? -1.0 : 0.0);
      case RootKind::EplusE: return k == j ? 1.0 : (k == l ? 1.0 : 0.0);
      case RootKind::EShort: return k == j ? 1.0 : 0.0;
    }
    return 0.0;
  }

  std::string str() const {
    switch (kind) {
      case RootKind::ABlock: return "a" + std::to_string(j + 1);
      case RootKind::TwoE: return "2e" + std::to_string(j + 1);
      case RootKind::EminusE:
        return "e" + std::to_string(j + 1) + "-e" + std::to_string(l + 1);
      case RootKind::EplusE:
        return "e" + std::to_string(j + 1) + "+e" + std::to_string(l + 1);
      case RootKind::EShort: return "e" + std::to_string(j + 1);
    }
    return "?";
  }

  friend bool operator==(const RootLabel& a, const RootLabel& b) {
    return a.kind == b.kind && a.j == b.j && a.l == b.l;
  }
};

struct SBasisVector {
  Mat X;
  RootLabel label;
  double norm2 = 0.0;  // <X, X> = B(phi X, phi X)
  int pair = -1;       // index of the paired vector X' in the same root space, if any
};

class LieModel {
 public:
  static LieModel build(Family family, int r_or_p, int q = 0);

  Family family = Family::SL2R;
  int rank = 0;
  int matrix_dim = 0;  // size of the (real) defining representation
  bool tube = true;
  double b = 0.0;

  std::vector<Mat> A;  // A_1, ..., A_r
  std::vector<Mat> E;  // E^1, ..., E^r
  Mat Z0;              // center element of k inducing the complex structure
  Mat E0;              // E^1 + ... + E^r
  Mat A0;              // (A_1 + ... + A_r)/2

  Mat theta(const Mat& X) const { return -X.transpose(); }
  Mat phi(const Mat& X) const { return 0.5 * (X - theta(X)); }

  double killing(const Mat& X, const Mat& Y) const {
    if (X.rows() != matrix_dim || Y.rows() != matrix_dim)
      throw std::invalid_argument("killing: dimension mismatch");
    return kappa_ * (X * Y).trace();
  }

  // Positive definite inner product <X,Y> = B(phi(X), phi(Y)) on s.
  // Equals -1/2 B(X, theta Y) on n; on a it equals B(X, Y).
  double inner(const Mat& X, const Mat& Y) const {
    require_in_s(X);
    require_in_s(Y);
    return killing(phi(X), phi(Y));
  }

  const std::vector<SBasisVector>& basis_s() const { return basis_s_; }
  int dim_s() const { return static_cast<int>(basis_s_.size()); }

  // Coordinates of X in basis_s; throws if X is not in s.
  Vec s_coords(const Mat& X) const {
    double res = 0.0;
    Vec c = s_solver_.coords(X, &res);
    if (res > 1e-8 * std::max(1.0, X.norm()))
      throw std::invalid_argument("element outside span of s");
    return c;
  }

  Mat from_s_coords(const Vec& c) const {
    Mat X = Mat::Zero(matrix_dim, matrix_dim);
    for (int i = 0; i < dim_s(); ++i) X += c(i) * basis_s_[i].X;
    return X;
  }

  bool in_s(const Mat& X, double tol = 1e-9) const { return s_solver_.contains(X, tol); }

  // The complex structure J = phi^{-1} o ad(Z0) o phi on s.
  Mat J(const Mat& X) const { return from_s_coords(Jmat_ * s_coords(X)); }
  const Mat& J_matrix() const { return Jmat_; }

  // Root-space membership by ad-a eigenvalue test, relative tolerance 1e-9.
  bool in_root_space(const Mat& X, const RootLabel& label, double tol = 1e-9) const {
    double n = X.norm();
    if (n == 0.0) return true;
    for (int k = 0; k < rank; ++k) {
      Mat r = bracket(A[k], X) - label.coeff(k) * X;
      if (r.norm() > tol * n) return false;
    }
    return true;
  }

  // Identifies the single root space containing X, if any.
  std::optional<RootLabel> root_space_of(const Mat& X, double tol = 1e-9) const {
    for (const auto& lab : root_labels_)
      if (lab.kind != RootKind::ABlock && in_root_space(X, lab, tol)) return lab;
    return std::nullopt;
  }

  std::vector<int> basis_indices(const RootLabel& label) const {
    std::vector<int> idx;
    for (int i = 0; i < dim_s(); ++i)
      if (basis_s_[i].label == label) idx.push_back(i);
    return idx;
  }

  const std::vector<RootLabel>& root_labels() const { return root_labels_; }

  // Coefficient s in [JX, X] = s E^j for X in an off-a root space.
  // Checks s > 0 and s = 4|X|^2/b within 1e-8 relative.
  double bracket_constant(const Mat& X) const;

  // Lemma on paired root vectors: returns true iff [JX', X] vanishes, where X'
  // is the partner of X in its 2-dimensional root space. nullopt when the root
  // space has no partner (real dimension 1).
  std::optional<bool> orthogonality_check(const Mat& X) const;

  // Dual functional (E^j)* on n, via B-duality against theta E^j.
  double Ejstar(int j, const Mat& X) const {
    return killing(X, theta(E[j])) / killing(E[j], theta(E[j]));
  }

  static Mat bracket(const Mat& X, const Mat& Y) { return X * Y - Y * X; }

  std::string name() const {
    switch (family) {
      case Family::SL2R: return "sl(2,R)";
      case Family::SpR: return "sp(" + std::to_string(2 * rank) + ",R)";
      case Family::SUpq:
        return "su(" + std::to_string(su_p_) + "," + std::to_string(su_q_) + ")";
    }
    return "?";
  }

  int su_p() const { return su_p_; }
  int su_q() const { return su_q_; }

 private:
  double kappa_ = 0.0;  // B(X,Y) = kappa * tr(XY), verified against ad-trace
  int su_p_ = 0, su_q_ = 0;
  std::vector<SBasisVector> basis_s_;
  std::vector<RootLabel> root_labels_;
  detail::CoordSolver s_solver_;
  Mat Jmat_;

  std::vector<Mat> basis_g_;  // full algebra, build-time only
  detail::CoordSolver g_solver_;

  void require_in_s(const Mat& X) const {
    if (!in_s(X, 1e-8)) throw std::invalid_argument("element outside span of s");
  }

  void finish_build();
  Mat ad_matrix(const Mat& H) const;
  void compute_killing_constant();
  std::vector<Mat> root_space(const RootLabel& label) const;
  void compute_Z0();
  void assemble_s_basis();
  void validate();
};

// ---------------------------------------------------------------------------
// construction

namespace detail {

// Realification of a complex n x n matrix: entry z at (a,b) becomes the
// 2x2 block [[x,-y],[y,x]] at (2a,2b).
inline void set_complex_entry(Mat& R, int a, int bcol, double re, double im) {
  R(2 * a, 2 * bcol) = re;
  R(2 * a, 2 * bcol + 1) = -im;
  R(2 * a + 1, 2 * bcol) = im;
  R(2 * a + 1, 2 * bcol + 1) = re;
}

inline std::complex<double> complex_entry(const Mat& R, int a, int bcol) {
  return {R(2 * a, 2 * bcol), R(2 * a + 1, 2 * bcol)};
}

}  // namespace detail

inline LieModel LieModel::build(Family family, int r_or_p, int q) {
  LieModel m;
  m.family = family;

  if (family == Family::SL2R || family == Family::SpR) {
    int r = (family == Family::SL2R) ? 1 : r_or_p;
    if (family == Family::SL2R && r_or_p != 0 && r_or_p != 1)
      throw std::invalid_argument("sl(2,R) has rank 1");
    if (r < 1) throw std::invalid_argument("rank must be positive");
    m.rank = r;
    m.matrix_dim = 2 * r;
    m.tube = true;
    int n = 2 * r;

    // g = sp(2r,R): block form [[P, Q],[S, -P^T]] with Q, S symmetric.
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        Mat M = Mat::Zero(n, n);
        M(i, j) = 1;
        M(r + j, r + i) = -1;
        m.basis_g_.push_back(M);
      }
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j) {
        Mat Q = Mat::Zero(n, n), S = Mat::Zero(n, n);
        Q(i, r + j) = 1;
        Q(j, r + i) = 1;
        S(r + i, j) = 1;
        S(r + j, i) = 1;
        m.basis_g_.push_back(Q);
        m.basis_g_.push_back(S);
      }

    for (int j = 0; j < r; ++j) {
      Mat Aj = Mat::Zero(n, n), Ej = Mat::Zero(n, n);
      Aj(j, j) = 1;
      Aj(r + j, r + j) = -1;
      Ej(j, r + j) = 1;
      m.A.push_back(Aj);
      m.E.push_back(Ej);
    }
  } else {
    int p = r_or_p;
    if (p < 1 || q < p) throw std::invalid_argument("su(p,q) needs 1 <= p <= q");
    m.su_p_ = p;
    m.su_q_ = q;
    m.rank = p;
    m.tube = (p == q);
    int nc = p + q;
    m.matrix_dim = 2 * nc;

    auto zero = [&] { return Mat::Zero(2 * nc, 2 * nc); };
    // su(p,q) = {X : X* I_{p,q} + I_{p,q} X = 0, tr X = 0}, realified.
    for (int k = 0; k + 1 < nc; ++k) {
      Mat M = zero();
      detail::set_complex_entry(M, k, k, 0, 1);
      detail::set_complex_entry(M, k + 1, k + 1, 0, -1);
      m.basis_g_.push_back(M);
    }
    for (int k = 0; k < nc; ++k)
      for (int l = k + 1; l < nc; ++l) {
        Mat M1 = zero(), M2 = zero();
        if ((k < p) == (l < p)) {
          detail::set_complex_entry(M1, k, l, 1, 0);
          detail::set_complex_entry(M1, l, k, -1, 0);
          detail::set_complex_entry(M2, k, l, 0, 1);
          detail::set_complex_entry(M2, l, k, 0, 1);
        } else {
          detail::set_complex_entry(M1, k, l, 1, 0);
          detail::set_complex_entry(M1, l, k, 1, 0);
          detail::set_complex_entry(M2, k, l, 0, 1);
          detail::set_complex_entry(M2, l, k, 0, -1);
        }
        m.basis_g_.push_back(M1);
        m.basis_g_.push_back(M2);
      }

    // sl(2)-triples on the coordinate pairs (j, p+j).
    for (int j = 0; j < p; ++j) {
      Mat Aj = zero(), Ej = zero();
      detail::set_complex_entry(Aj, j, p + j, 1, 0);
      detail::set_complex_entry(Aj, p + j, j, 1, 0);
      detail::set_complex_entry(Ej, j, j, 0, 0.5);
      detail::set_complex_entry(Ej, j, p + j, 0, -0.5);
      detail::set_complex_entry(Ej, p + j, j, 0, 0.5);
      detail::set_complex_entry(Ej, p + j, p + j, 0, -0.5);
      m.A.push_back(Aj);
      m.E.push_back(Ej);
    }
  }

  m.finish_build();
  return m;
}

inline Mat LieModel::ad_matrix(const Mat& H) const {
  int d = static_cast<int>(basis_g_.size());
  Mat M(d, d);
  for (int k = 0; k < d; ++k) {
    double res = 0.0;
    M.col(k) = g_solver_.coords(bracket(H, basis_g_[k]), &res);
    if (res > 1e-9) throw std::logic_error("bracket left the algebra");
  }
  return M;
}

inline void LieModel::compute_killing_constant() {
  // Killing form on a basis via trace of ad-composition, then the trace-form
  // proportionality constant; the proportionality itself is verified below.
  int d = static_cast<int>(basis_g_.size());
  std::vector<Mat> ads(d);
  for (int i = 0; i < d; ++i) ads[i] = ad_matrix(basis_g_[i]);

  Mat T(d, d), G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      G(i, j) = G(j, i) = (ads[i] * ads[j]).trace();
      T(i, j) = T(j, i) = (basis_g_[i] * basis_g_[j]).trace();
    }
  // kappa from the first basis pair with a non-vanishing trace form
  kappa_ = 0.0;
  for (int i = 0; i < d && kappa_ == 0.0; ++i)
    if (std::abs(T(i, i)) > 1e-12) kappa_ = G(i, i) / T(i, i);
  if (kappa_ == 0.0) throw std::logic_error("degenerate trace form");
  if ((G - kappa_ * T).norm() > 1e-8 * G.norm())
    throw std::logic_error("Killing form is not proportional to the trace form");
}

inline std::vector<Mat> LieModel::root_space(const RootLabel& label) const {
  int d = static_cast<int>(basis_g_.size());
  Mat M(rank * d, d);
  for (int k = 0; k < rank; ++k)
    M.middleRows(k * d, d) = ad_matrix(A[k]) - label.coeff(k) * Mat::Identity(d, d);
  Mat K = detail::kernel(M, 1e-8);
  std::vector<Mat> out;
  for (int c = 0; c < K.cols(); ++c) {
    Mat X = Mat::Zero(matrix_dim, matrix_dim);
    for (int i = 0; i < d; ++i) X += K(i, c) * basis_g_[i];
    out.push_back(X);
  }
  return out;
}

inline void LieModel::compute_Z0() {
  // k = fixed points of theta; its center is one-dimensional for these models.
  std::vector<Mat> kbasis;
  {
    int d = static_cast<int>(basis_g_.size());
    Mat Th(d, d);
    for (int k = 0; k < d; ++k) Th.col(k) = g_solver_.coords(theta(basis_g_[k]));
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Th + Th.transpose()));
    for (int i = 0; i < d; ++i)
      if (es.eigenvalues()(i) > 0.5) {
        Mat X = Mat::Zero(matrix_dim, matrix_dim);
        for (int kk = 0; kk < d; ++kk) X += es.eigenvectors()(kk, i) * basis_g_[kk];
        kbasis.push_back(X);
      }
  }
  int kd = static_cast<int>(kbasis.size());
  detail::CoordSolver ks(kbasis);
  Mat M(kd * kd, kd);
  for (int i = 0; i < kd; ++i) {
    Mat block(kd, kd);
    for (int c = 0; c < kd; ++c) block.col(c) = ks.coords(bracket(kbasis[c], kbasis[i]));
    M.middleRows(i * kd, kd) = block;
  }
  Mat K = detail::kernel(M, 1e-8);
  if (K.cols() != 1) throw std::logic_error("center of k is not one-dimensional");
  Mat Z = Mat::Zero(matrix_dim, matrix_dim);
  for (int i = 0; i < kd; ++i) Z += K(i, 0) * kbasis[i];

  // Normalization: [Z0, E^j - theta E^j] = A_j (I_0 on p), sign included.
  Mat P = E[0] - theta(E[0]);
  double scale = killing(bracket(Z, P), A[0]) / killing(A[0], A[0]);
  Z0 = Z / scale;
  for (int j = 0; j < rank; ++j) {
    Mat err = bracket(Z0, E[j] - theta(E[j])) - A[j];
    if (err.norm() > 1e-9) throw std::logic_error("Z0 normalization failed");
  }
}

inline void LieModel::assemble_s_basis() {
  // Canonical order: a-block, then per root space. The e_j+e_l basis is the
  // J-image [E^l, X] of the e_j-e_l basis, so J is block-structured by design.
  auto ip = [&](const Mat& X, const Mat& Y) { return killing(phi(X), phi(Y)); };

  auto orthonormalize = [&](std::vector<Mat> v) {
    std::vector<Mat> out;
    for (auto& X : v) {
      for (auto& U : out) X -= ip(X, U) / ip(U, U) * U;
      if (X.norm() > 1e-8) out.push_back(X / std::sqrt(ip(X, X)));
    }
    return out;
  };

  basis_s_.clear();
  root_labels_.clear();

  for (int j = 0; j < rank; ++j) {
    RootLabel lab{RootKind::ABlock, j, -1};
    root_labels_.push_back(lab);
    basis_s_.push_back({A[j], lab, ip(A[j], A[j]), -1});
  }
  for (int j = 0; j < rank; ++j) {
    RootLabel lab{RootKind::TwoE, j, -1};
    root_labels_.push_back(lab);
    basis_s_.push_back({E[j], lab, ip(E[j], E[j]), -1});
  }
  for (int j = 0; j < rank; ++j)
    for (int l = j + 1; l < rank; ++l) {
      RootLabel lm{RootKind::EminusE, j, l};
      RootLabel lp{RootKind::EplusE, j, l};
      auto base = orthonormalize(root_space(lm));
      if (base.empty()) continue;
      root_labels_.push_back(lm);
      root_labels_.push_back(lp);
      int start = static_cast<int>(basis_s_.size());
      int dim = static_cast<int>(base.size());
      for (int k = 0; k < dim; ++k) {
        // pairs (X, X') within the root space, when 2-dimensional
        int pair = (dim == 2) ? start + (1 - k) : -1;
        basis_s_.push_back({base[k], lm, ip(base[k], base[k]), pair});
      }
      for (int k = 0; k < dim; ++k) {
        Mat JX = bracket(E[l], base[k]);
        int pair = (dim == 2) ? start + dim + (1 - k) : -1;
        basis_s_.push_back({JX, lp, ip(JX, JX), pair});
      }
    }
  if (!tube) {
    for (int j = 0; j < rank; ++j) {
      RootLabel lab{RootKind::EShort, j, -1};
      auto sp = root_space(lab);
      if (sp.empty()) throw std::logic_error("missing short root space in non-tube model");
      root_labels_.push_back(lab);
      // J-stable pairs (X, JX); J on g^{e_j} realized through Z0
      auto Jshort = [&](const Mat& X) {
        Mat JP = bracket(Z0, phi(X));
        // phi^{-1}(JP) stays in the same root space; project onto it
        detail::CoordSolver sp_phi([&] {
          std::vector<Mat> v;
          for (auto& Y : sp) v.push_back(phi(Y));
          return v;
        }());
        Vec c = sp_phi.coords(JP);
        Mat out = Mat::Zero(matrix_dim, matrix_dim);
        for (std::size_t i = 0; i < sp.size(); ++i) out += c(static_cast<int>(i)) * sp[i];
        return out;
      };
      std::vector<Mat> remaining = orthonormalize(sp);
      std::vector<Mat> chosen;
      while (!chosen.empty() || !remaining.empty()) {
        if (remaining.empty()) break;
        Mat X = remaining.front();
        Mat JX = Jshort(X);
        chosen.push_back(X);
        chosen.push_back(JX / std::sqrt(ip(JX, JX)));
        std::vector<Mat> next;
        for (auto& Y : remaining) {
          Mat Z = Y;
          for (auto& U : chosen) Z -= ip(Z, U) / ip(U, U) * U;
          if (Z.norm() > 1e-8) next.push_back(Z / std::sqrt(ip(Z, Z)));
        }
        remaining = next;
      }
      int start = static_cast<int>(basis_s_.size());
      for (std::size_t k = 0; k < chosen.size(); ++k) {
        int pair = start + static_cast<int>(k % 2 == 0 ? k + 1 : k - 1);
        basis_s_.push_back({chosen[k], lab, ip(chosen[k], chosen[k]), pair});
      }
    }
  }

  std::vector<Mat> smats;
  for (auto& v : basis_s_) smats.push_back(v.X);
  s_solver_ = detail::CoordSolver(smats);

  // J in basis_s coordinates, via phi-conjugation with ad(Z0).
  std::vector<Mat> sphi;
  for (auto& v : basis_s_) sphi.push_back(phi(v.X));
  detail::CoordSolver phis(sphi);
  Jmat_ = Mat(dim_s(), dim_s());
  for (int k = 0; k < dim_s(); ++k) {
    double res = 0.0;
    Jmat_.col(k) = phis.coords(bracket(Z0, sphi[k]), &res);
    if (res > 1e-9) throw std::logic_error("J left the span of s");
  }
}

inline void LieModel::validate() {
  for (int j = 0; j < rank; ++j) {
    for (int l = 0; l < rank; ++l) {
      Mat err = bracket(A[j], E[l]) - (j == l ? 2.0 : 0.0) * E[l];
      if (err.norm() > 1e-12) throw std::logic_error("normalization [A_j,E^l] = 2 d_jl E^l failed");
    }
    Mat err = bracket(theta(E[j]), E[j]) - A[j];
    if (err.norm() > 1e-12) throw std::logic_error("sl(2)-triple normalization failed");
  }
  b = killing(A[0], A[0]);
  for (int j = 1; j < rank; ++j)
    if (std::abs(killing(A[j], A[j]) - b) > 1e-10 * b)
      throw std::logic_error("B(A_j, A_j) is not constant in j");
  if (b <= 0) throw std::logic_error("b must be positive");

  Mat J2 = Jmat_ * Jmat_ + Mat::Identity(dim_s(), dim_s());
  if (J2.norm() > 1e-10) throw std::logic_error("J^2 + id exceeded tolerance");

  // J maps root spaces as dictated by the restricted-root picture.
  for (const auto& v : basis_s_) {
    Mat JX = from_s_coords(Jmat_ * s_coords(v.X));
    RootLabel target = v.label;
    switch (v.label.kind) {
      case RootKind::ABlock: target.kind = RootKind::TwoE; break;
      case RootKind::TwoE: target.kind = RootKind::ABlock; break;
      case RootKind::EminusE: target.kind = RootKind::EplusE; break;
      case RootKind::EplusE: target.kind = RootKind::EminusE; break;
      case RootKind::EShort: break;
    }
    bool ok;
    if (target.kind == RootKind::ABlock) {
      ok = true;  // a = joint kernel of ad A_k
      for (int k = 0; k < rank; ++k)
        if (bracket(A[k], JX).norm() > 1e-8 * std::max(1.0, JX.norm())) ok = false;
    } else {
      ok = in_root_space(JX, target, 1e-8);
    }
    if (!ok) throw std::logic_error("J does not respect the root-space mapping");
  }
}

inline void LieModel::finish_build() {
  g_solver_ = detail::CoordSolver(basis_g_);
  compute_killing_constant();
  compute_Z0();
  assemble_s_basis();
  E0 = Mat::Zero(matrix_dim, matrix_dim);
  A0 = Mat::Zero(matrix_dim, matrix_dim);
  for (int j = 0; j < rank; ++j) {
    E0 += E[j];
    A0 += 0.5 * A[j];
  }
  validate();
}

inline double LieModel::bracket_constant(const Mat& X) const {
  if (X.norm() == 0.0) throw std::invalid_argument("bracket_constant: zero vector");
  auto lab = root_space_of(X);
  if (!lab || (lab->kind != RootKind::EminusE && lab->kind != RootKind::EShort))
    throw std::invalid_argument("bracket_constant: not in a g^{e_j-e_l} or g^{e_j} root space");
  int j = lab->j;
  Mat br = bracket(J(X), X);
  double s = killing(br, theta(E[j])) / killing(E[j], theta(E[j]));
  if ((br - s * E[j]).norm() > 1e-8 * std::max(1.0, br.norm()))
    throw std::logic_error("[JX, X] is not a multiple of E^j");
  double pred = 4.0 * inner(X, X) / b;
  if (s <= 0 || std::abs(s - pred) > 1e-8 * s)
    throw std::logic_error("bracket constant disagrees with 4|X|^2/b");
  return s;
}

inline std::optional<bool> LieModel::orthogonality_check(const Mat& X) const {
  auto lab = root_space_of(X);
  if (X.norm() == 0.0) return true;
  if (!lab || lab->kind != RootKind::EminusE)
    throw std::invalid_argument("orthogonality_check: not in a g^{e_j-e_l} root space");
  auto idx = basis_indices(*lab);
  if (idx.size() < 2) return std::nullopt;  // no paired X' in dimension 1
  // X' = component of X rotated within the pair: project X on the basis pair,
  // then swap onto the orthogonal partner.
  const Mat& U = basis_s_[idx[0]].X;
  const Mat& V = basis_s_[idx[1]].X;
  Mat Xp = inner(X, U) * V - inner(X, V) * U;  // orthogonal to X in the pair plane
  if (Xp.norm() < 1e-12) return true;
  return bracket(J(Xp), X).norm() <= 1e-10 * std::max(1.0, X.norm() * Xp.norm());
}

}  // namespace hermitube
