#pragma once

// The three coordinate pictures of an N-invariant function: f on the domain,
// f-tilde on the a-slice, f-hat on the base Omega in positive coordinates,
// with y_j = e^{2 a_j}. Values, gradients and Hessians are transported through
// the chain rule; a central finite-difference oracle backs every analytic
// evaluator in the tests.

#include "hermitube/domains.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <numeric>

namespace hermitube {

// H-coordinates of y: a_j = (1/2) ln y_j.
inline Vec ell(const Vec& y) {
  if (y.minCoeff() <= 0) throw std::invalid_argument("ell: nonpositive coordinate");
  return 0.5 * y.array().log().matrix();
}

inline Vec ell_inv(const Vec& H) { return (2.0 * H.array()).exp().matrix(); }

// ---------------------------------------------------------------------------

class BaseFunction {
 public:
  enum class Kind { Affine, LogBarrier, Reciprocal, NegLogDist, GridSampled, Sum };

  // f(y) = c.y + d
  static BaseFunction affine(Vec c, double d) {
    BaseFunction f;
    f.kind_ = Kind::Affine;
    f.rank_ = static_cast<int>(c.size());
    f.coef_ = std::move(c);
    f.offset_ = d;
    return f;
  }

  // f(y) = -sum alpha_j ln y_j
  static BaseFunction log_barrier(Vec alpha) {
    BaseFunction f;
    f.kind_ = Kind::LogBarrier;
    f.rank_ = static_cast<int>(alpha.size());
    f.coef_ = std::move(alpha);
    return f;
  }

  // f(y) = sum 1/y_j
  static BaseFunction reciprocal(int rank) {
    BaseFunction f;
    f.kind_ = Kind::Reciprocal;
    f.rank_ = rank;
    return f;
  }

  // f(y) = -ln d_Omega(y); gradient/Hessian only through finite differences
  static BaseFunction neg_log_dist(DomainBase dom) {
    BaseFunction f;
    f.kind_ = Kind::NegLogDist;
    f.rank_ = dom.rank();
    f.domain_ = std::make_shared<DomainBase>(std::move(dom));
    return f;
  }

  // tensor grid: axes[k] strictly increasing; values in row-major order with
  // the last axis fastest
  static BaseFunction grid_sampled(std::vector<Vec> axes, Vec values) {
    BaseFunction f;
    f.kind_ = Kind::GridSampled;
    f.rank_ = static_cast<int>(axes.size());
    long total = 1;
    for (auto& ax : axes) {
      if (ax.size() < 2) throw std::invalid_argument("grid axis too short");
      for (int i = 1; i < ax.size(); ++i)
        if (ax(i) <= ax(i - 1)) throw std::invalid_argument("grid axis not increasing");
      total *= ax.size();
    }
    if (values.size() != total) throw std::invalid_argument("grid value count mismatch");
    f.axes_ = std::move(axes);
    f.values_ = std::move(values);
    return f;
  }

  static BaseFunction sum(std::vector<BaseFunction> terms, Vec weights) {
    if (terms.empty() || static_cast<long>(terms.size()) != weights.size())
      throw std::invalid_argument("sum: term/weight mismatch");
    BaseFunction f;
    f.kind_ = Kind::Sum;
    f.rank_ = terms[0].rank();
    for (auto& t : terms)
      if (t.rank() != f.rank_) throw std::invalid_argument("sum: rank mismatch");
    f.terms_ = std::make_shared<std::vector<BaseFunction>>(std::move(terms));
    f.coef_ = std::move(weights);
    return f;
  }

  Kind kind() const { return kind_; }
  int rank() const { return rank_; }
  bool smooth() const { return kind_ != Kind::GridSampled && kind_ != Kind::NegLogDist; }
  const DomainBase* domain() const { return domain_.get(); }

  double value(const Vec& y) const {
    check(y);
    switch (kind_) {
      case Kind::Affine: return coef_.dot(y) + offset_;
      case Kind::LogBarrier: return -coef_.dot(y.array().log().matrix());
      case Kind::Reciprocal: return y.array().inverse().sum();
      case Kind::NegLogDist: return -std::log(domain_->distance_to_boundary(y));
      case Kind::GridSampled: return interpolate(y);
      case Kind::Sum: {
        double s = 0;
        for (std::size_t i = 0; i < terms_->size(); ++i) s += coef_(static_cast<int>(i)) * (*terms_)[i].value(y);
        return s;
      }
    }
    throw std::logic_error("unreachable");
  }

  Vec grad(const Vec& y) const {
    check(y);
    switch (kind_) {
      case Kind::Affine: return coef_;
      case Kind::LogBarrier: return (-coef_.array() / y.array()).matrix();
      case Kind::Reciprocal: return (-y.array().inverse().square()).matrix();
      case Kind::NegLogDist: return fd_grad(y);
      case Kind::GridSampled: return node_grad(y);
      case Kind::Sum: {
        Vec g = Vec::Zero(rank_);
        for (std::size_t i = 0; i < terms_->size(); ++i) g += coef_(static_cast<int>(i)) * (*terms_)[i].grad(y);
        return g;
      }
    }
    throw std::logic_error("unreachable");
  }

  Mat hess(const Vec& y) const {
    check(y);
    switch (kind_) {
      case Kind::Affine: return Mat::Zero(rank_, rank_);
      case Kind::LogBarrier: return (coef_.array() / y.array().square()).matrix().asDiagonal();
      case Kind::Reciprocal: return (2.0 * y.array().pow(-3)).matrix().asDiagonal();
      case Kind::NegLogDist: return fd_hess(y);
      case Kind::GridSampled: return node_hess(y);
      case Kind::Sum: {
        Mat h = Mat::Zero(rank_, rank_);
        for (std::size_t i = 0; i < terms_->size(); ++i) h += coef_(static_cast<int>(i)) * (*terms_)[i].hess(y);
        return h;
      }
    }
    throw std::logic_error("unreachable");
  }

 private:
  Kind kind_ = Kind::Reciprocal;
  int rank_ = 0;
  Vec coef_;
  double offset_ = 0.0;
  std::shared_ptr<DomainBase> domain_;
  std::vector<Vec> axes_;
  Vec values_;
  std::shared_ptr<std::vector<BaseFunction>> terms_;

  void check(const Vec& y) const {
    if (static_cast<int>(y.size()) != rank_) throw std::invalid_argument("rank mismatch");
    if (kind_ != Kind::Affine && y.minCoeff() <= 0)
      throw std::invalid_argument("evaluation outside the positive octant");
  }

  Vec fd_grad(const Vec& y) const;
  Mat fd_hess(const Vec& y) const;

  // multilinear interpolation, no extrapolation
  double interpolate(const Vec& y) const {
    std::vector<int> lo(rank_);
    std::vector<double> t(rank_);
    for (int k = 0; k < rank_; ++k) {
      const Vec& ax = axes_[k];
      if (y(k) < ax(0) - 1e-12 || y(k) > ax(ax.size() - 1) + 1e-12)
        throw std::invalid_argument("grid evaluation out of range");
      int i = 0;
      while (i + 2 < ax.size() && y(k) >= ax(i + 1)) ++i;
      lo[k] = i;
      t[k] = (y(k) - ax(i)) / (ax(i + 1) - ax(i));
    }
    double s = 0;
    for (int corner = 0; corner < (1 << rank_); ++corner) {
      double w = 1;
      long idx = 0;
      for (int k = 0; k < rank_; ++k) {
        int bit = (corner >> k) & 1;
        w *= bit ? t[k] : 1 - t[k];
        idx = idx * axes_[k].size() + (lo[k] + bit);
      }
      s += w * values_(idx);
    }
    return s;
  }

  long flat_index(const std::vector<int>& node) const {
    long idx = 0;
    for (int k = 0; k < rank_; ++k) idx = idx * axes_[k].size() + node[k];
    return idx;
  }

  std::vector<int> nearest_interior_node(const Vec& y) const {
    std::vector<int> node(rank_);
    for (int k = 0; k < rank_; ++k) {
      const Vec& ax = axes_[k];
      int best = 1;
      for (int i = 1; i + 1 < ax.size(); ++i)
        if (std::abs(ax(i) - y(k)) < std::abs(ax(best) - y(k))) best = i;
      if (ax.size() < 3) throw std::invalid_argument("grid too coarse for differencing");
      node[k] = best;
    }
    return node;
  }

  // central differences at the nearest interior node; no extrapolation
  Vec node_grad(const Vec& y) const {
    auto node = nearest_interior_node(y);
    Vec g(rank_);
    for (int k = 0; k < rank_; ++k) {
      auto up = node, dn = node;
      ++up[k];
      --dn[k];
      g(k) = (values_(flat_index(up)) - values_(flat_index(dn))) /
             (axes_[k](up[k]) - axes_[k](dn[k]));
    }
    return g;
  }

  Mat node_hess(const Vec& y) const {
    auto node = nearest_interior_node(y);
    Mat h(rank_, rank_);
    for (int k = 0; k < rank_; ++k)
      for (int l = k; l < rank_; ++l) {
        if (k == l) {
          auto up = node, dn = node;
          ++up[k];
          --dn[k];
          double hk = 0.5 * (axes_[k](up[k]) - axes_[k](dn[k]));
          h(k, k) = (values_(flat_index(up)) - 2 * values_(flat_index(node)) +
                     values_(flat_index(dn))) /
                    (hk * hk);
        } else {
          auto pp = node, pm = node, mp = node, mm = node;
          ++pp[k]; ++pp[l];
          ++pm[k]; --pm[l];
          --mp[k]; ++mp[l];
          --mm[k]; --mm[l];
          double hk = 0.5 * (axes_[k](node[k] + 1) - axes_[k](node[k] - 1));
          double hl = 0.5 * (axes_[l](node[l] + 1) - axes_[l](node[l] - 1));
          h(k, l) = h(l, k) = (values_(flat_index(pp)) - values_(flat_index(pm)) -
                               values_(flat_index(mp)) + values_(flat_index(mm))) /
                              (4 * hk * hl);
        }
      }
    return h;
  }
};

// ---------------------------------------------------------------------------
// finite-difference oracle (the independent cross-check used by the tests)

struct FiniteDiff {
  Vec grad;
  Mat hess;
};

inline FiniteDiff finite_diff_oracle(const std::function<double(const Vec&)>& f, const Vec& x,
                                     double h = 0.0) {
  int n = static_cast<int>(x.size());
  if (h <= 0) h = 1e-4 * std::max(1.0, x.norm());
  FiniteDiff out;
  out.grad = Vec(n);
  out.hess = Mat(n, n);
  auto at = [&](int i, double di, int j, double dj) {
    Vec p = x;
    p(i) += di;
    if (j >= 0) p(j) += dj;
    return f(p);
  };
  double f0 = f(x);
  for (int i = 0; i < n; ++i) {
    out.grad(i) = (at(i, h, -1, 0) - at(i, -h, -1, 0)) / (2 * h);
    out.hess(i, i) = (at(i, h, -1, 0) - 2 * f0 + at(i, -h, -1, 0)) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      double v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) /
                 (4 * h * h);
      out.hess(i, j) = out.hess(j, i) = v;
    }
  }
  return out;
}

inline Vec BaseFunction::fd_grad(const Vec& y) const {
  double h = 1e-5 * std::max(1.0, y.norm());
  auto fd = finite_diff_oracle([this](const Vec& p) { return value(p); }, y, h);
  return fd.grad;
}

inline Mat BaseFunction::fd_hess(const Vec& y) const {
  double h = 1e-4 * std::max(1.0, y.norm());
  auto fd = finite_diff_oracle([this](const Vec& p) { return value(p); }, y, h);
  return fd.hess;
}

// ---------------------------------------------------------------------------
// chain rule between the hat and tilde pictures, y_j = e^{2 a_j}

inline double value_tilde(const BaseFunction& fhat, const Vec& H) { return fhat.value(ell_inv(H)); }

// d ftilde / d a_j = 2 (d fhat / d y_j) e^{2 a_j}
inline Vec grad_tilde_from_hat(const BaseFunction& fhat, const Vec& H) {
  Vec y = ell_inv(H);
  return 2.0 * (fhat.grad(y).array() * y.array()).matrix();
}

// Hess ftilde = 4 diag(y) Hess fhat diag(y) + 2 diag(grad ftilde)
inline Mat hess_tilde_from_hat(const BaseFunction& fhat, const Vec& H) {
  Vec y = ell_inv(H);
  Mat D = y.asDiagonal();
  Mat hh = 4.0 * D * fhat.hess(y) * D;
  Vec gt = grad_tilde_from_hat(fhat, H);
  return hh + Mat(2.0 * gt.asDiagonal());
}

}  // namespace hermitube
