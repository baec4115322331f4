#pragma once

// Bases Omega of N-invariant domains inside the open positive octant, the
// invariance cone C, Stein classification (convex + C-invariant), boundary
// distance, and convex C-invariant hulls (envelope-of-holomorphy bases).

#include "hermitube/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>

namespace hermitube {

namespace detail {

// Dense two-phase simplex for small LPs: maximize c.x subject to A x <= b,
// x free. Used for Chebyshev-center certificates; problem sizes are tiny.
struct LpResult {
  enum Status { Optimal, Infeasible, Unbounded } status = Infeasible;
  Vec x;
  double value = 0.0;
};

inline LpResult lp_max(const Vec& c, const Mat& A, const Vec& b) {
  // Free variables are split: x = u - v, u,v >= 0.  Standard form with slacks,
  // phase-1 artificials on rows with negative rhs.  Bland's rule.
  int m = static_cast<int>(A.rows());
  int n = static_cast<int>(A.cols());
  int nv = 2 * n;  // split columns
  Mat Aeq(m, nv + m);
  Vec rhs = b;
  Aeq.setZero();
  Aeq.block(0, 0, m, n) = A;
  Aeq.block(0, n, m, n) = -A;
  for (int i = 0; i < m; ++i) Aeq(i, nv + i) = 1.0;  // slack
  for (int i = 0; i < m; ++i)
    if (rhs(i) < 0) {
      Aeq.row(i) = -Aeq.row(i);
      rhs(i) = -rhs(i);
    }

  int total = nv + m + m;  // + artificials
  Mat T(m + 1, total + 1);
  std::vector<int> basis(m);

  auto run_simplex = [&](int ncols) -> bool {  // false = unbounded
    const double eps = 1e-11;
    for (int iter = 0; iter < 20000; ++iter) {
      int piv_col = -1;
      for (int j = 0; j < ncols; ++j)
        if (T(m, j) > eps) { piv_col = j; break; }  // Bland
      if (piv_col < 0) return true;
      int piv_row = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i)
        if (T(i, piv_col) > eps) {
          double ratio = T(i, total) / T(i, piv_col);
          if (ratio < best - eps || (ratio < best + eps && (piv_row < 0 || basis[i] < basis[piv_row]))) {
            best = ratio;
            piv_row = i;
          }
        }
      if (piv_row < 0) return false;
      T.row(piv_row) /= T(piv_row, piv_col);
      for (int i = 0; i <= m; ++i)
        if (i != piv_row && std::abs(T(i, piv_col)) > 0)
          T.row(i) -= T(i, piv_col) * T.row(piv_row);
      basis[piv_row] = piv_col;
    }
    throw std::runtime_error("simplex iteration limit");
  };

  // Phase 1
  T.setZero();
  T.block(0, 0, m, nv + m) = Aeq;
  for (int i = 0; i < m; ++i) {
    T(i, nv + m + i) = 1.0;
    T(i, total) = rhs(i);
    basis[i] = nv + m + i;
  }
  for (int j = 0; j <= total; ++j) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += T(i, j);
    T(m, j) = (j < nv + m) ? s : (j == total ? s : 0.0);
  }
  run_simplex(nv + m);
  LpResult res;
  if (T(m, total) > 1e-7) {
    res.status = LpResult::Infeasible;
    return res;
  }
  // Drive artificials out of the basis if possible; drop their columns.
  for (int i = 0; i < m; ++i)
    if (basis[i] >= nv + m) {
      for (int j = 0; j < nv + m; ++j)
        if (std::abs(T(i, j)) > 1e-9) {
          T.row(i) /= T(i, j);
          for (int k = 0; k <= m; ++k)
            if (k != i) T.row(k) -= T(k, j) * T.row(i);
          basis[i] = j;
          break;
        }
    }

  // Phase 2 objective
  Vec cfull = Vec::Zero(total);
  cfull.head(n) = c;
  cfull.segment(n, n) = -c;
  T.row(m).setZero();
  for (int j = 0; j < total; ++j) T(m, j) = cfull(j);
  for (int i = 0; i < m; ++i)
    if (basis[i] < total && std::abs(T(m, basis[i])) > 0)
      T.row(m) -= T(m, basis[i]) * T.row(i);
  // forbid re-entering artificials
  for (int j = nv + m; j < total; ++j) T(m, j) = -1.0;
  if (!run_simplex(nv + m)) {
    res.status = LpResult::Unbounded;
    return res;
  }
  Vec xs = Vec::Zero(total);
  for (int i = 0; i < m; ++i)
    if (basis[i] < total) xs(basis[i]) = T(i, total);
  res.x = xs.head(n) - xs.segment(n, n);
  res.value = c.dot(res.x);
  res.status = LpResult::Optimal;
  return res;
}

}  // namespace detail

struct ConeSpec {
  int rank = 1;
  bool tube = true;

  // Generators of C: e_1..e_r (non-tube) or e_1..e_{r-1} (tube).
  std::vector<Vec> generators() const {
    std::vector<Vec> g;
    int n = tube ? rank - 1 : rank;
    for (int j = 0; j < n; ++j) {
      Vec v = Vec::Zero(rank);
      v(j) = 1.0;
      g.push_back(v);
    }
    return g;
  }
};

struct HalfSpace {
  Vec n;
  double c = 0.0;
};

struct Witness {
  Vec point;
  Vec direction;  // meaning depends on the failed check
  std::string note;
};

class DomainBase {
 public:
  enum class Rep { HRep, Cloud };

  static DomainBase from_hrep(int rank, bool tube, std::vector<HalfSpace> hs);
  static DomainBase from_cloud(int rank, bool tube, std::vector<Vec> pts) {
    DomainBase d;
    d.rank_ = rank;
    d.cone_ = {rank, tube};
    d.rep_ = Rep::Cloud;
    for (auto& p : pts) {
      if (static_cast<int>(p.size()) != rank) throw std::invalid_argument("cloud point rank mismatch");
      if (p.minCoeff() <= 0) throw std::invalid_argument("cloud points must be strictly positive");
    }
    d.cloud_ = std::move(pts);
    if (d.cloud_.empty()) throw std::invalid_argument("empty cloud");
    return d;
  }

  int rank() const { return rank_; }
  Rep rep() const { return rep_; }
  const ConeSpec& cone() const { return cone_; }
  const std::vector<HalfSpace>& halfspaces() const { return hs_; }
  const std::vector<Vec>& cloud() const { return cloud_; }
  const Vec& interior_point() const { return interior_; }
  double chebyshev_radius() const { return cheb_radius_; }

  // Open-set membership, up to tolerance; includes the octant constraints.
  bool contains(const Vec& y, double tol = 1e-9) const {
    if (rep_ != Rep::HRep) throw std::logic_error("contains: HRep only");
    if (y.minCoeff() <= -tol) return false;
    for (auto& h : hs_)
      if (h.n.dot(y) >= h.c + tol) return false;
    return true;
  }

  // min over boundary pieces of the distance from y, exact for convex HRep;
  // the octant faces y_j = 0 always participate.
  double distance_to_boundary(const Vec& y) const {
    if (rep_ != Rep::HRep) throw std::logic_error("distance_to_boundary: HRep only");
    if (!contains(y, 1e-12)) throw std::invalid_argument("point outside domain");
    // Nearest boundary point is an orthogonal projection onto some face
    // hyperplane that stays in the closure; redundant faces whose projection
    // leaves the domain must not shorten the distance.
    auto in_closure = [&](const Vec& z) {
      if (z.minCoeff() < -1e-9) return false;
      for (auto& h : hs_)
        if (h.n.dot(z) > h.c + 1e-9 * std::max(1.0, z.norm())) return false;
      return true;
    };
    double d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < rank_; ++j) {
      Vec z = y;
      z(j) = 0.0;
      if (in_closure(z)) d = std::min(d, y(j));
    }
    for (auto& h : hs_) {
      double t = (h.c - h.n.dot(y)) / h.n.norm();
      Vec z = y + t * h.n / h.n.norm();
      if (in_closure(z)) d = std::min(d, t);
    }
    if (!std::isfinite(d)) {  // numerical safety net; unreachable for exact data
      d = y.minCoeff();
      for (auto& h : hs_) d = std::min(d, (h.c - h.n.dot(y)) / h.n.norm());
    }
    return d;
  }

  // Omega_eps = {y : d(y) > eps}: every offset retreats by eps |n|.
  DomainBase shrink(double eps) const {
    if (rep_ != Rep::HRep) throw std::logic_error("shrink: HRep only");
    if (eps <= 0) throw std::invalid_argument("shrink needs eps > 0");
    std::vector<HalfSpace> hs;
    for (auto& h : hs_) hs.push_back({h.n, h.c - eps * h.n.norm()});
    for (int j = 0; j < rank_; ++j) {
      Vec n = Vec::Zero(rank_);
      n(j) = -1.0;
      hs.push_back({n, -eps});
    }
    return from_hrep(rank_, cone_.tube, std::move(hs));  // throws if empty
  }

  bool empty_interior() const { return cheb_radius_ <= 1e-10; }

 private:
  int rank_ = 0;
  Rep rep_ = Rep::HRep;
  ConeSpec cone_;
  std::vector<HalfSpace> hs_;
  std::vector<Vec> cloud_;
  Vec interior_;
  double cheb_radius_ = 0.0;

  friend DomainBase shrink_allow_empty(const DomainBase&, double, bool*);
};

inline DomainBase DomainBase::from_hrep(int rank, bool tube, std::vector<HalfSpace> hs) {
  DomainBase d;
  d.rank_ = rank;
  d.cone_ = {rank, tube};
  d.rep_ = Rep::HRep;
  for (auto& h : hs) {
    if (static_cast<int>(h.n.size()) != rank) throw std::invalid_argument("half-space rank mismatch");
    if (h.n.norm() == 0) throw std::invalid_argument("zero normal");
  }
  d.hs_ = std::move(hs);

  // Chebyshev certificate: maximize t s.t. n.y + |n| t <= c, -y_j + t <= 0,
  // plus a large box to keep the LP bounded for recessive domains.
  int m = static_cast<int>(d.hs_.size());
  const double big = 1e6;
  Mat A(m + rank + rank + 1, rank + 1);
  Vec b(A.rows());
  A.setZero();
  for (int i = 0; i < m; ++i) {
    A.row(i).head(rank) = d.hs_[i].n.transpose();
    A(i, rank) = d.hs_[i].n.norm();
    b(i) = d.hs_[i].c;
  }
  for (int j = 0; j < rank; ++j) {
    A(m + j, j) = -1.0;
    A(m + j, rank) = 1.0;
    b(m + j) = 0.0;
    A(m + rank + j, j) = 1.0;  // y_j <= big
    b(m + rank + j) = big;
  }
  A(m + 2 * rank, rank) = 1.0;  // t <= big
  b(m + 2 * rank) = big;
  Vec c = Vec::Zero(rank + 1);
  c(rank) = 1.0;
  auto lp = detail::lp_max(c, A, b);
  if (lp.status != detail::LpResult::Optimal || lp.value <= 1e-10)
    throw std::invalid_argument("half-space domain has empty interior");
  d.interior_ = lp.x.head(rank);
  d.cheb_radius_ = lp.value;
  return d;
}

// shrink variant that reports emptiness instead of throwing.
inline DomainBase shrink_allow_empty(const DomainBase& dom, double eps, bool* empty) {
  try {
    DomainBase s = dom.shrink(eps);
    if (empty) *empty = false;
    return s;
  } catch (const std::invalid_argument&) {
    if (empty) *empty = true;
    return dom;
  }
}

// ---------------------------------------------------------------------------
// classification

// HRep: exact normal-sign test (coordinates below 1e-10 snapped to zero).
// Cloud: ray sampling against the hull membership oracle; verdicts on clouds
// are sampled, not certified.
inline bool is_c_invariant(const DomainBase& dom, Witness* witness = nullptr,
                           int samples = 200, unsigned seed = 42);

inline bool is_convex(const DomainBase& dom, Witness* witness = nullptr,
                      int samples = 200, unsigned seed = 42);

inline bool is_stein(const DomainBase& dom, Witness* witness = nullptr) {
  return is_convex(dom, witness) && is_c_invariant(dom, witness);
}

// ---------------------------------------------------------------------------
// hulls

struct HullResult {
  DomainBase hull;               // HRep of conv(input) + closed cone
  std::vector<Vec> vertices;     // input points appearing as hull vertices
  std::vector<Vec> recession;    // cone generators used
  bool degenerate = false;       // input affinely dependent (flat hull)
  bool clipped = false;          // result touched the octant boundary

  HullResult(DomainBase h) : hull(std::move(h)) {}
};

HullResult envelope(const DomainBase& dom);

// Midpoint convexity of -ln(dist) on all grid pairs, slack 1e-9; the generic
// overload lets tests feed synthetic (non-convex) distance functions.
inline bool log_dist_convexity_check(const std::function<double(const Vec&)>& dist,
                                     const std::vector<Vec>& grid, Witness* witness = nullptr) {
  auto u = [&](const Vec& y) { return -std::log(dist(y)); };
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      Vec mid = 0.5 * (grid[i] + grid[j]);
      if (u(mid) > 0.5 * (u(grid[i]) + u(grid[j])) + 1e-9) {
        if (witness) *witness = {grid[i], grid[j] - grid[i], "midpoint convexity violated"};
        return false;
      }
    }
  return true;
}

inline bool log_dist_convexity_check(const DomainBase& dom, const std::vector<Vec>& grid,
                                     Witness* witness = nullptr) {
  auto u = [&](const Vec& y) { return -std::log(dom.distance_to_boundary(y)); };
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      Vec mid = 0.5 * (grid[i] + grid[j]);
      if (!dom.contains(mid)) throw std::invalid_argument("grid midpoint escapes domain");
      if (u(mid) > 0.5 * (u(grid[i]) + u(grid[j])) + 1e-9) {
        if (witness) *witness = {grid[i], grid[j] - grid[i], "midpoint convexity violated"};
        return false;
      }
    }
  return true;
}

// ---------------------------------------------------------------------------
// implementation

namespace detail {

// Facets of the conic hull of the columns of L (homogenized points/rays):
// normals a with a.x <= 0 for all generators, spanned by rank-1 subsets.
inline std::vector<Vec> conic_hull_facets(const std::vector<Vec>& gens, int dim,
                                          bool* degenerate = nullptr) {
  std::vector<Vec> facets;
  if (degenerate) *degenerate = false;
  int m = static_cast<int>(gens.size());
  std::vector<int> idx(dim - 1);

  Mat G(dim, m);
  for (int i = 0; i < m; ++i) G.col(i) = gens[i];
  {
    Eigen::JacobiSVD<Mat> svd(G);
    int rk = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > 1e-10 * svd.singularValues()(0)) ++rk;
    if (rk < dim && degenerate) *degenerate = true;
  }

  auto consider = [&](const std::vector<int>& sel) {
    Mat S(static_cast<int>(sel.size()), dim);
    for (std::size_t k = 0; k < sel.size(); ++k) S.row(static_cast<int>(k)) = gens[sel[k]].transpose();
    Mat K = kernel(S, 1e-10);
    if (K.cols() != 1) return;  // not a hyperplane spanned by the subset
    Vec a = K.col(0);
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    for (auto& g : gens) {
      double v = a.dot(g);
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
    double scale = 0.0;
    for (auto& g : gens) scale = std::max(scale, g.norm());
    double tol = 1e-9 * std::max(1.0, scale);
    if (mx <= tol) facets.push_back(a);
    if (mn >= -tol) facets.push_back(-a);  // both sides valid when hull is flat
  };

  // all subsets of size dim-1
  std::vector<int> sel;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(sel.size()) == dim - 1) {
      consider(sel);
      return;
    }
    for (int i = start; i < m; ++i) {
      sel.push_back(i);
      rec(i + 1);
      sel.pop_back();
    }
  };
  if (dim == 1) {
    // half-lines: facets are +-1 when all generators share a sign
    std::vector<int> none;
    consider(none);
  } else {
    rec(0);
  }

  // dedupe by normalized direction
  std::vector<Vec> out;
  for (auto& a : facets) {
    Vec u = a / a.norm();
    for (int i = 0; i < u.size(); ++i)
      if (std::abs(u(i)) < 1e-10) u(i) = 0.0;
    u /= u.norm();
    bool dup = false;
    for (auto& b : out)
      if ((b - u).norm() < 1e-8) dup = true;
    if (!dup) out.push_back(u);
  }
  return out;
}

}  // namespace detail

inline bool is_c_invariant(const DomainBase& dom, Witness* witness, int samples, unsigned seed) {
  auto gens = dom.cone().generators();
  if (gens.empty()) return true;  // rank-1 tube: C = {0}
  if (dom.rep() == DomainBase::Rep::HRep) {
    for (auto& h : dom.halfspaces()) {
      Vec n = h.n;
      for (int i = 0; i < n.size(); ++i)
        if (std::abs(n(i)) < 1e-10) n(i) = 0.0;  // snap roundoff before sign test
      for (auto& v : gens)
        if (n.dot(v) > 0) {
          if (witness) *witness = {Vec::Zero(dom.rank()), v, "normal with positive cone pairing"};
          return false;
        }
    }
    return true;
  }
  // Cloud: probe rays p + t v against the plain convex-hull membership oracle.
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  // convex-hull membership oracle from the points alone
  std::vector<Vec> lifted;
  for (auto& p : dom.cloud()) {
    Vec l(dom.rank() + 1);
    l.head(dom.rank()) = p;
    l(dom.rank()) = 1.0;
    lifted.push_back(l);
  }
  auto facets = detail::conic_hull_facets(lifted, dom.rank() + 1);
  auto in_hull = [&](const Vec& y) {
    Vec l(dom.rank() + 1);
    l.head(dom.rank()) = y;
    l(dom.rank()) = 1.0;
    for (auto& a : facets)
      if (a.dot(l) > 1e-9 * std::max(1.0, y.norm())) return false;
    return true;
  };
  for (int s = 0; s < samples; ++s) {
    const Vec& p = dom.cloud()[s % dom.cloud().size()];
    Vec v = Vec::Zero(dom.rank());
    for (auto& g : gens) v += U(rng) * g;
    double t = 0.1 + 3.0 * U(rng);
    if (!in_hull(p + t * v)) {
      if (witness) *witness = {p, t * v, "sampled: cone ray escapes cloud hull"};
      return false;
    }
  }
  return true;
}

inline bool is_convex(const DomainBase& dom, Witness* witness, int samples, unsigned seed) {
  if (dom.rep() == DomainBase::Rep::HRep) return true;  // intersection of half-spaces
  // Cloud: hull membership of all points (structural) plus midpoint sampling
  // against the same oracle; necessarily a sampled verdict.
  std::vector<Vec> lifted;
  for (auto& p : dom.cloud()) {
    Vec l(dom.rank() + 1);
    l.head(dom.rank()) = p;
    l(dom.rank()) = 1.0;
    lifted.push_back(l);
  }
  auto facets = detail::conic_hull_facets(lifted, dom.rank() + 1);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(dom.cloud().size()) - 1);
  for (int s = 0; s < samples; ++s) {
    Vec mid = 0.5 * (dom.cloud()[pick(rng)] + dom.cloud()[pick(rng)]);
    Vec l(dom.rank() + 1);
    l.head(dom.rank()) = mid;
    l(dom.rank()) = 1.0;
    bool inside = true;
    for (auto& a : facets)
      if (a.dot(l) > 1e-9 * std::max(1.0, mid.norm())) inside = false;
    if (!inside) {
      if (witness) *witness = {mid, Vec::Zero(dom.rank()), "sampled: midpoint outside hull"};
      return false;
    }
  }
  return true;
}

inline HullResult envelope(const DomainBase& dom) {
  int r = dom.rank();
  auto gens = dom.cone().generators();

  // V-representation of the input: cloud points directly; HRep via vertex and
  // extreme-ray enumeration over constraint subsets (octant faces included).
  std::vector<Vec> points, rays;
  if (dom.rep() == DomainBase::Rep::Cloud) {
    points = dom.cloud();
  } else {
    std::vector<HalfSpace> all = dom.halfspaces();
    for (int j = 0; j < r; ++j) {
      Vec n = Vec::Zero(r);
      n(j) = -1.0;
      all.push_back({n, 0.0});
    }
    int m = static_cast<int>(all.size());
    auto feasible = [&](const Vec& y) {
      for (auto& h : all)
        if (h.n.dot(y) > h.c + 1e-8 * std::max(1.0, y.norm())) return false;
      return true;
    };
    // vertices: r active constraints
    std::vector<int> sel;
    std::function<void(int)> recv = [&](int start) {
      if (static_cast<int>(sel.size()) == r) {
        Mat A(r, r);
        Vec b(r);
        for (int k = 0; k < r; ++k) {
          A.row(k) = all[sel[k]].n.transpose();
          b(k) = all[sel[k]].c;
        }
        Eigen::FullPivLU<Mat> lu(A);
        if (lu.rank() == r) {
          Vec y = lu.solve(b);
          if (feasible(y)) points.push_back(y);
        }
        return;
      }
      for (int i = start; i < m; ++i) {
        sel.push_back(i);
        recv(i + 1);
        sel.pop_back();
      }
    };
    recv(0);
    // extreme rays of the recession cone {d : n.d <= 0 for all constraints}
    Mat N(m, r);
    for (int i = 0; i < m; ++i) N.row(i) = all[i].n.transpose();
    if (r == 1) {
      Vec d(1);
      d(0) = 1.0;
      if ((N * d).maxCoeff() <= 1e-12) rays.push_back(d);
      d(0) = -1.0;
      if ((N * d).maxCoeff() <= 1e-12) rays.push_back(d);
    } else {
      std::function<void(int)> recr = [&](int start) {
        if (static_cast<int>(sel.size()) == r - 1) {
          Mat A(r - 1, r);
          for (int k = 0; k < r - 1; ++k) A.row(k) = all[sel[k]].n.transpose();
          Mat K = detail::kernel(A, 1e-10);
          if (K.cols() == 1) {
            for (double sgn : {1.0, -1.0}) {
              Vec d = sgn * K.col(0);
              if ((N * d).maxCoeff() <= 1e-9) rays.push_back(d);
            }
          }
          return;
        }
        for (int i = start; i < m; ++i) {
          sel.push_back(i);
          recr(i + 1);
          sel.pop_back();
        }
      };
      sel.clear();
      recr(0);
    }
    if (points.empty()) points.push_back(dom.interior_point());
  }

  // homogenize: points at height 1, rays and cone generators at height 0
  std::vector<Vec> lifted;
  for (auto& p : points) {
    Vec l(r + 1);
    l.head(r) = p;
    l(r) = 1.0;
    lifted.push_back(l);
  }
  auto add_ray = [&](const Vec& d) {
    Vec l(r + 1);
    l.head(r) = d;
    l(r) = 0.0;
    lifted.push_back(l);
  };
  for (auto& d : rays) add_ray(d);
  for (auto& g : gens) add_ray(g);

  // Degeneracy: a redundant V-representation, i.e. some generating point lies
  // in the hull of the remaining points plus the recession cone.
  {
    std::vector<Vec> dedup;
    for (auto& p : points) {
      bool dup = false;
      for (auto& q : dedup)
        if ((q - p).norm() < 1e-9 * std::max(1.0, p.norm())) dup = true;
      if (!dup) dedup.push_back(p);
    }
    points = std::move(dedup);
  }
  bool degenerate = false;
  {
    std::vector<Vec> dirs = rays;
    for (auto& g : gens) dirs.push_back(g);
    int np = static_cast<int>(points.size());
    int nd = static_cast<int>(dirs.size());
    for (int drop = 0; drop < np && !degenerate; ++drop) {
      if (np == 1 && nd == 0) break;
      int nv = (np - 1) + nd;
      if (nv == 0) break;
      Mat A(2 * r + 2 + nv, nv);
      Vec b(A.rows());
      A.setZero();
      std::vector<int> keep;
      for (int i = 0; i < np; ++i)
        if (i != drop) keep.push_back(i);
      for (int j = 0; j < r; ++j) {
        for (int k = 0; k < np - 1; ++k) A(2 * j, k) = points[keep[k]](j);
        for (int k = 0; k < nd; ++k) A(2 * j, np - 1 + k) = dirs[k](j);
        A.row(2 * j + 1) = -A.row(2 * j);
        double tol = 1e-9 * std::max(1.0, points[drop].norm());
        b(2 * j) = points[drop](j) + tol;
        b(2 * j + 1) = -points[drop](j) + tol;
      }
      for (int k = 0; k < np - 1; ++k) A(2 * r, k) = 1.0;
      A.row(2 * r + 1) = -A.row(2 * r);
      b(2 * r) = 1.0 + 1e-9;
      b(2 * r + 1) = -1.0 + 1e-9;
      for (int k = 0; k < nv; ++k) {
        A(2 * r + 2 + k, k) = -1.0;
        b(2 * r + 2 + k) = 0.0;
      }
      if (np - 1 == 0) continue;  // lone point cannot be expressed without peers
      degenerate =
          detail::lp_max(Vec::Zero(nv), A, b).status == detail::LpResult::Optimal;
    }
  }
  auto facets = detail::conic_hull_facets(lifted, r + 1);

  std::vector<HalfSpace> hs;
  for (auto& a : facets) {
    Vec n = a.head(r);
    double c = -a(r);
    if (n.norm() < 1e-12) continue;  // height facet, not a spatial constraint
    double s = n.norm();
    Vec nn = n / s;
    for (int i = 0; i < r; ++i)
      if (std::abs(nn(i)) < 1e-10) nn(i) = 0.0;
    nn /= nn.norm();
    bool is_octant_face = false;
    for (int j = 0; j < r; ++j) {
      Vec e = Vec::Zero(r);
      e(j) = -1.0;
      if ((nn - e).norm() < 1e-8 && std::abs(c / s) < 1e-10) is_octant_face = true;
    }
    if (is_octant_face) continue;  // octant is implicit in DomainBase
    hs.push_back({nn, c / s});
  }

  // Exact idempotence: when an input half-space of an HRep domain reproduces a
  // computed facet, keep the input's bit pattern instead of the recomputed one
  // so envelope(envelope(X)) == envelope(X) with zero drift.
  if (dom.rep() == DomainBase::Rep::HRep) {
    for (auto& f : hs) {
      for (const auto& h0 : dom.halfspaces()) {
        double s0 = h0.n.norm();
        if ((h0.n / s0 - f.n).norm() < 1e-8 &&
            std::abs(h0.c / s0 - f.c) < 1e-8 * std::max(1.0, std::abs(f.c))) {
          f = h0;
          break;
        }
      }
    }
  }

  // canonical facet order for deterministic output
  std::sort(hs.begin(), hs.end(), [](const HalfSpace& x, const HalfSpace& y) {
    for (int i = 0; i < x.n.size(); ++i) {
      if (x.n(i) < y.n(i) - 1e-12) return true;
      if (x.n(i) > y.n(i) + 1e-12) return false;
    }
    return x.c < y.c;
  });

  HullResult res(DomainBase::from_hrep(r, dom.cone().tube, hs));

  // clip flag: does the closure of the hull touch the octant boundary?
  for (auto& p : points)
    if (p.minCoeff() < 1e-9) res.clipped = true;
  res.degenerate = degenerate;

  // vertices among input points: on >= r facets (incl. octant) with equality
  for (auto& p : points) {
    int active = 0;
    for (auto& h : hs)
      if (std::abs(h.n.dot(p) - h.c) < 1e-8 * std::max(1.0, p.norm())) ++active;
    for (int j = 0; j < r; ++j)
      if (std::abs(p(j)) < 1e-9) ++active;
    if (active >= r) {
      bool dup = false;
      for (auto& q : res.vertices)
        if ((q - p).norm() < 1e-9) dup = true;
      if (!dup) res.vertices.push_back(p);
    }
  }
  res.recession = gens;
  for (auto& d : rays) res.recession.push_back(d);
  return res;
}

}  // namespace hermitube
