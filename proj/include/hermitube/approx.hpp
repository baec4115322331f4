#pragma once

// Mollified exhaustion of a convex cone-invariant base: shrunken domains
// Omega_eps, smoothed u_eps = (-ln d) * kernel, the stabilized
// v_eps = u_eps + eps nu with nu(y) = sum 1/y_j, and the sublevel exhaustion
// Omega~_eps = {v_eps < -ln 3 eps}.

#include "hermitube/coords.hpp"
#include "hermitube/domains.hpp"

#include <cmath>
#include <random>

namespace hermitube {

class MollifierKernel {
 public:
  // Tensor midpoint rule on [-1,1]^r masked to the unit ball; nodes_per_axis
  // points per axis for r <= 3, Monte Carlo with a fixed seed for r = 4.
  explicit MollifierKernel(int rank, int nodes_per_axis = 21, unsigned seed = 42,
                           int mc_nodes = 200000)
      : rank_(rank) {
    if (rank < 1 || rank > 4) throw std::invalid_argument("kernel rank out of range");
    if (rank <= 3) {
      int n = nodes_per_axis;
      double w = std::pow(2.0 / n, rank);
      std::vector<int> idx(rank, 0);
      for (;;) {
        Vec x(rank);
        for (int k = 0; k < rank; ++k) x(k) = -1.0 + (2.0 * idx[k] + 1.0) / n;
        double r2 = x.squaredNorm();
        if (r2 < 1.0) {
          nodes_.push_back(x);
          weights_.push_back(w * profile(r2));
        }
        int k = 0;
        while (k < rank && ++idx[k] == n) idx[k++] = 0;
        if (k == rank) break;
      }
    } else {
      std::mt19937 rng(seed);
      std::uniform_real_distribution<double> U(-1.0, 1.0);
      double w = 16.0 / mc_nodes;
      for (int i = 0; i < mc_nodes; ++i) {
        Vec x(rank);
        for (int k = 0; k < rank; ++k) x(k) = U(rng);
        double r2 = x.squaredNorm();
        if (r2 < 1.0) {
          nodes_.push_back(x);
          weights_.push_back(w * profile(r2));
        }
      }
    }
    double mass = 0;
    for (double w : weights_) mass += w;
    for (double& w : weights_) w /= mass;  // normalization constant folded in
    norm_const_ = 1.0 / mass;
  }

  // unnormalized radial profile sigma(R^2) = exp(1/(R^2-1)) inside the ball
  static double profile(double r2) { return r2 < 1.0 ? std::exp(1.0 / (r2 - 1.0)) : 0.0; }

  // derivative of the profile in R^2: strictly negative on (0,1)
  static double profile_deriv(double r2) {
    if (r2 >= 1.0) return 0.0;
    double t = r2 - 1.0;
    return -std::exp(1.0 / t) / (t * t);
  }

  int rank() const { return rank_; }
  double normalization() const { return norm_const_; }
  const std::vector<Vec>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  // quadrature of sigma against an arbitrary integrand
  double integrate(const std::function<double(const Vec&)>& f) const {
    // pairwise tree reduction for a deterministic, order-stable sum
    std::vector<double> acc(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc[i] = weights_[i] * f(nodes_[i]);
    std::size_t n = acc.size();
    while (n > 1) {
      std::size_t half = (n + 1) / 2;
      for (std::size_t i = 0; i + half < n; ++i) acc[i] += acc[i + half];
      n = half;
    }
    return acc.empty() ? 0.0 : acc[0];
  }

 private:
  int rank_;
  std::vector<Vec> nodes_;
  std::vector<double> weights_;
  double norm_const_ = 0.0;
};

// nu(y) = sum 1/y_j
inline double nu(const Vec& y) { return y.array().inverse().sum(); }

// u_eps(y) = integral of -ln d(y + eps w) sigma(w) dw; requires y in Omega_eps.
inline double mollified_u(const DomainBase& omega, double eps, const MollifierKernel& kernel,
                          const Vec& y) {
  if (omega.distance_to_boundary(y) <= eps)
    throw std::invalid_argument("point outside the shrunken domain");
  return kernel.integrate(
      [&](const Vec& w) { return -std::log(omega.distance_to_boundary(y + eps * w)); });
}

// v_eps(y) = u_eps(y) + eps nu(y)
inline double mollified_value(const DomainBase& omega, double eps, const MollifierKernel& kernel,
                              const Vec& y) {
  return mollified_u(omega, eps, kernel, y) + eps * nu(y);
}

// ---------------------------------------------------------------------------

// Sublevel domain Omega~_eps = {y in Omega_eps : v_eps(y) < -ln 3 eps} with a
// membership oracle and bisection boundary extraction along the interior
// direction (1,...,1) (non-tube) or (1,...,1,0) (tube).
class ExhaustionLevel {
 public:
  ExhaustionLevel(const DomainBase& omega, double eps, const MollifierKernel& kernel)
      : omega_(&omega), kernel_(&kernel), eps_(eps), delta_(-std::log(3.0 * eps)) {
    Witness w;
    if (!is_convex(omega, &w) || !is_c_invariant(omega, &w))
      throw std::invalid_argument("exhaustion needs a convex cone-invariant base");
  }

  double eps() const { return eps_; }
  double delta() const { return delta_; }

  bool contains(const Vec& y) const {
    if (!omega_->contains(y)) return false;
    if (omega_->distance_to_boundary(y) <= eps_) return false;
    return mollified_value(*omega_, eps_, *kernel_, y) < delta_;
  }

  Vec interior_direction() const {
    Vec d = Vec::Ones(omega_->rank());
    if (omega_->cone().tube && omega_->rank() > 1) d(omega_->rank() - 1) = 0.0;
    if (omega_->cone().tube && omega_->rank() == 1) d(0) = 0.0;
    return d;
  }

  // Walk from an anchor along -direction until outside, then bisect.
  // Returns nullopt when the anchor itself is outside the level set.
  std::optional<Vec> boundary_point(const Vec& anchor, double tol = 1e-8) const {
    Vec d = interior_direction();
    if (d.norm() == 0) return std::nullopt;  // rank-1 tube: no monotone direction
    Vec inside = anchor;
    if (!contains(inside)) {
      // march inward first; the level set fills out along +d
      bool found = false;
      for (double t = 0.5; t < 64; t *= 2) {
        Vec p = anchor + t * d;
        if (contains(p)) {
          inside = p;
          found = true;
          break;
        }
      }
      if (!found) return std::nullopt;
    }
    Vec outside;
    bool found = false;
    for (double t = 0.25; t < 64; t *= 2) {
      Vec p = inside - t * d;
      bool out = true;
      try {
        out = !contains(p);
      } catch (...) {
        out = true;
      }
      if (out || p.minCoeff() <= 0) {
        outside = p;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
    while ((inside - outside).norm() > tol) {
      Vec mid = 0.5 * (inside + outside);
      bool in = mid.minCoeff() > 0 && contains(mid);
      (in ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
  }

  // Directional derivative of v_eps along the interior direction at y;
  // strictly negative on the boundary per the construction.
  double directional_derivative(const Vec& y, double h = 1e-5) const {
    Vec d = interior_direction();
    double n = d.norm();
    if (n == 0) return 0.0;
    Vec u = d / n;
    return (mollified_value(*omega_, eps_, *kernel_, y + h * u) -
            mollified_value(*omega_, eps_, *kernel_, y - h * u)) /
           (2 * h);
  }

 private:
  const DomainBase* omega_;
  const MollifierKernel* kernel_;
  double eps_;
  double delta_;
};

}  // namespace hermitube
