#pragma once

// Levi form of an N-invariant function at a slice point, assembled blockwise
// from the base data in y-coordinates, plus plurisubharmonicity classification
// by convexity and cone-monotonicity of the base function.

#include "hermitube/algebra.hpp"
#include "hermitube/coords.hpp"

#include <optional>
#include <string>

namespace hermitube {

struct LeviBlock {
  RootLabel label;
  std::vector<int> basis_index;  // indices into model.basis_s()
  Mat block;                     // dense symmetric block in those basis vectors
  bool derived_by_J = false;     // e_j + e_l blocks are filled by J-transport
};

struct LeviForm {
  Vec y;
  Vec H;
  Mat a_block;                    // on a, in the A_j basis
  std::vector<LeviBlock> blocks;  // every other root-space block, plus J a

  // full dense form on basis_s, block order = basis order
  Mat dense(const LieModel& m) const {
    Mat out = Mat::Zero(m.dim_s(), m.dim_s());
    for (int j = 0; j < m.rank; ++j)
      for (int l = 0; l < m.rank; ++l) out(j, l) = a_block(j, l);
    for (auto& b : blocks)
      for (std::size_t p = 0; p < b.basis_index.size(); ++p)
        for (std::size_t q = 0; q < b.basis_index.size(); ++q)
          out(b.basis_index[p], b.basis_index[q]) = b.block(static_cast<int>(p), static_cast<int>(q));
    return out;
  }

  double min_eigenvalue(const LieModel& m) const {
    Eigen::SelfAdjointEigenSolver<Mat> es(dense(m));
    return es.eigenvalues().minCoeff();
  }
};

// h_f on the a-block: -2 d_jl dftilde/da_l + d2ftilde/da_j da_l.
// Off-a root spaces g^{e_j-e_l} and g^{e_j}: diagonal with entry
// -2 (|X|^2 / b) dftilde/da_j per basis vector X.  g^{e_j+e_l} and J a are
// carried over by J-invariance of the form.
inline LeviForm assemble_levi(const LieModel& m, const BaseFunction& fhat, const Vec& y) {
  if (fhat.rank() != m.rank) throw std::invalid_argument("rank mismatch");
  if (y.minCoeff() <= 0) throw std::invalid_argument("slice point outside the octant");
  LeviForm lf;
  lf.y = y;
  lf.H = ell(y);
  Vec gt = grad_tilde_from_hat(fhat, lf.H);
  Mat ht = hess_tilde_from_hat(fhat, lf.H);
  lf.a_block = ht - Mat(2.0 * gt.asDiagonal());

  for (const auto& lab : m.root_labels()) {
    if (lab.kind == RootKind::ABlock) continue;
    auto idx = m.basis_indices(lab);
    LeviBlock blk;
    blk.label = lab;
    blk.basis_index = idx;
    int d = static_cast<int>(idx.size());
    blk.block = Mat::Zero(d, d);
    switch (lab.kind) {
      case RootKind::EminusE:
      case RootKind::EShort:
        for (int k = 0; k < d; ++k)
          blk.block(k, k) = -2.0 * m.basis_s()[idx[k]].norm2 / m.b * gt(lab.j);
        break;
      case RootKind::TwoE: {
        // J a block: h(JX, JY) = h(X, Y) with J A_j = -2 E^j, so in the E^j
        // basis the block is a_block / 4.
        for (int k = 0; k < d; ++k) blk.block(k, k) = 0.0;  // filled below
        blk.derived_by_J = true;
        break;
      }
      case RootKind::EplusE:
        blk.derived_by_J = true;
        break;
      default:
        break;
    }
    lf.blocks.push_back(std::move(blk));
  }

  // J-transport. For any basis vectors X, Y of a J-stable pair of root spaces
  // the form satisfies h(JX, JY) = h(X, Y); express JX in the target basis and
  // push the source block through the change of basis.
  for (auto& blk : lf.blocks) {
    if (!blk.derived_by_J) continue;
    if (blk.label.kind == RootKind::TwoE) {
      // source: a-block restricted to coordinate j. J A_j = -2 E^j, so
      // h(E^j, E^j) = h(-J A_j / 2, -J A_j / 2) = a_block(j,j) / 4.
      int j = blk.label.j;
      blk.block(0, 0) = lf.a_block(j, j) / 4.0;
    } else {
      // source: the e_j - e_l block; each basis vector of e_j + e_l is the
      // J-image of the corresponding e_j - e_l vector scaled by norm ratio.
      RootLabel src{RootKind::EminusE, blk.label.j, blk.label.l};
      auto sidx = m.basis_indices(src);
      int d = static_cast<int>(blk.basis_index.size());
      // change of basis: columns = coordinates of J(src basis) in this block
      Mat C(d, d);
      for (int c = 0; c < d; ++c) {
        Vec full = m.J_matrix() * Vec::Unit(m.dim_s(), sidx[c]);
        for (int rw = 0; rw < d; ++rw) C(rw, c) = full(blk.basis_index[rw]);
      }
      Mat src_block = Mat::Zero(d, d);
      for (int k = 0; k < d; ++k)
        src_block(k, k) = -2.0 * m.basis_s()[sidx[k]].norm2 / m.b * gt(src.j);
      // h(Ju, Jv) = h(u, v) with Ju = C e_u in this block's basis:
      // block = C^{-T} src_block C^{-1}
      Mat Ci = C.inverse();
      blk.block = Ci.transpose() * src_block * Ci;
    }
  }
  return lf;
}

// ---------------------------------------------------------------------------
// classification

enum class PshClass { StrictlyPsh, Psh, NotPsh };

struct PshVerdict {
  PshClass verdict = PshClass::NotPsh;
  bool sampled = true;  // verdicts rest on the provided sample set
  std::optional<Vec> witness_point;
  std::optional<Vec> witness_direction;
  std::string note;
};

// Gradient test on the cone generators (linearity in v makes generators
// sufficient); smooth kinds only.
inline bool is_cbar_decreasing(const BaseFunction& fhat, const std::vector<Vec>& samples,
                               const ConeSpec& cone, bool strict = false,
                               Witness* witness = nullptr) {
  auto gens = cone.generators();
  if (gens.empty()) return true;
  for (auto& y : samples) {
    if (fhat.smooth() || fhat.kind() == BaseFunction::Kind::NegLogDist) {
      Vec g = fhat.grad(y);
      for (auto& v : gens) {
        double dv = g.dot(v);
        if (dv > (strict ? -1e-12 : 1e-10)) {
          if (witness) *witness = {y, v, "gradient not decreasing along cone generator"};
          return false;
        }
      }
    } else {
      // sampled kind: monotonicity of restricted values along generator rays
      for (auto& v : gens) {
        double prev = fhat.value(y);
        for (double t : {0.05, 0.1, 0.2, 0.4}) {
          double cur;
          try {
            cur = fhat.value(y + t * v);
          } catch (const std::invalid_argument&) {
            break;  // probe left the grid; stop the ray
          }
          if (cur > prev + (strict ? 0.0 : 1e-10)) {
            if (witness) *witness = {y, v, "sampled values increase along cone generator"};
            return false;
          }
          prev = cur;
        }
      }
    }
  }
  return true;
}

// StrictlyPsh: Hess fhat positive definite and grad.v < 0 on generators at
// every sample. Psh: positive semidefinite (eigenvalue >= -1e-9 |Hess|) and
// grad.v <= 0.  Otherwise NotPsh with a witness.
inline PshVerdict classify_psh(const LieModel& m, const BaseFunction& fhat,
                               const std::vector<Vec>& samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample set");
  ConeSpec cone{m.rank, m.tube};
  auto gens = cone.generators();
  PshVerdict out;
  bool strict = true;
  for (auto& y : samples) {
    Mat h = fhat.hess(y);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    double lo = es.eigenvalues().minCoeff();
    double scale = std::max(1.0, h.norm());
    if (lo < -1e-9 * scale) {
      out.verdict = PshClass::NotPsh;
      out.witness_point = y;
      out.witness_direction = es.eigenvectors().col(0);
      out.note = "Hessian has a negative eigenvalue";
      return out;
    }
    if (lo < 1e-9 * scale) strict = false;
    Vec g = fhat.grad(y);
    for (auto& v : gens) {
      double dv = g.dot(v);
      if (dv > 1e-10 * std::max(1.0, g.norm())) {
        out.verdict = PshClass::NotPsh;
        out.witness_point = y;
        out.witness_direction = v;
        out.note = "increasing along a cone generator";
        return out;
      }
      if (dv > -1e-12) strict = false;
    }
  }
  out.verdict = strict ? PshClass::StrictlyPsh : PshClass::Psh;
  return out;
}

}  // namespace hermitube
