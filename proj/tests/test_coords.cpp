#include "hermitube/coords.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace hermitube;

TEST_CASE("slice coordinate map") {
  Vec ones = Vec::Ones(3);
  CHECK(ell(ones).norm() <= 1e-14);

  Vec y(2);
  y << std::exp(2.0), 1.0;
  Vec H = ell(y);
  CHECK(H(0) == Catch::Approx(1.0));
  CHECK(H(1) == Catch::Approx(0.0).margin(1e-14));

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> P(0.1, 10.0);
  for (int t = 0; t < 100; ++t) {
    Vec p(3);
    for (int j = 0; j < 3; ++j) p(j) = P(rng);
    CHECK((ell_inv(ell(p)) - p).norm() <= 1e-12 * p.norm());
  }

  Vec bad(2);
  bad << 1.0, -0.5;
  CHECK_THROWS_AS(ell(bad), std::invalid_argument);
}

TEST_CASE("finite difference oracle") {
  auto sq = [](const Vec& x) { return x(0) * x(0); };
  Vec x(1);
  x << 3.0;
  auto fd = finite_diff_oracle(sq, x, 1e-4);
  CHECK(fd.grad(0) == Catch::Approx(6.0).margin(1e-6));
  CHECK(fd.hess(0, 0) == Catch::Approx(2.0).margin(1e-4));

  BaseFunction h = BaseFunction::reciprocal(2);
  Vec y = Vec::Ones(2);
  auto fdh = finite_diff_oracle([&](const Vec& p) { return h.value(p); }, y);
  CHECK((fdh.grad - Vec::Constant(2, -1.0)).norm() <= 1e-6);

  Vec c(2);
  c << 2.0, -1.0;
  BaseFunction aff = BaseFunction::affine(c, 0.5);
  auto fda = finite_diff_oracle([&](const Vec& p) { return aff.value(p); }, y);
  // second differences of an affine function are pure cancellation noise
  CHECK(fda.hess.norm() <= 1e-6);
}

TEST_CASE("analytic evaluators match finite differences") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> P(0.5, 3.0), U(-1.0, 1.0);
  Vec alpha(2);
  alpha << 1.5, 0.7;
  Vec c(2);
  c << U(rng), U(rng);
  std::vector<BaseFunction> fs = {
      BaseFunction::reciprocal(2), BaseFunction::log_barrier(alpha),
      BaseFunction::affine(c, 0.3),
      BaseFunction::sum({BaseFunction::reciprocal(2), BaseFunction::log_barrier(alpha)},
                        Vec::Constant(2, 0.5))};
  for (const auto& f : fs) {
    for (int t = 0; t < 50; ++t) {
      Vec y(2);
      y << P(rng), P(rng);
      auto fd = finite_diff_oracle([&](const Vec& p) { return f.value(p); }, y);
      double gs = std::max(1.0, fd.grad.norm());
      double hs = std::max(1.0, fd.hess.norm());
      CHECK((f.grad(y) - fd.grad).norm() <= 1e-5 * gs);
      CHECK((f.hess(y) - fd.hess).norm() <= 1e-4 * hs);
    }
  }
}

TEST_CASE("gradient transport through the chain rule") {
  BaseFunction h = BaseFunction::reciprocal(2);
  Vec H0 = Vec::Zero(2);
  Vec gt = grad_tilde_from_hat(h, H0);
  CHECK((gt - Vec::Constant(2, -2.0)).norm() <= 1e-12);

  BaseFunction cst = BaseFunction::affine(Vec::Zero(2), 4.0);
  CHECK(grad_tilde_from_hat(cst, H0).norm() <= 1e-14);

  // the invariant-metric potential shape: constant gradient -b/2 with b = 12
  BaseFunction rho = BaseFunction::log_barrier(Vec::Constant(2, 3.0));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    Vec H(2);
    H << U(rng), U(rng);
    CHECK((grad_tilde_from_hat(rho, H) - Vec::Constant(2, -6.0)).norm() <= 1e-10);
  }
}

TEST_CASE("Hessian transport through the chain rule") {
  Vec H0 = Vec::Zero(2);
  BaseFunction cst = BaseFunction::affine(Vec::Zero(2), 1.0);
  CHECK(hess_tilde_from_hat(cst, H0).norm() <= 1e-14);

  // affine base: Hess ftilde = diag(4 c_j y_j)
  Vec c(2);
  c << 0.5, -1.25;
  BaseFunction aff = BaseFunction::affine(c, 0.0);
  Vec H(2);
  H << 0.3, -0.2;
  Vec y = ell_inv(H);
  Mat expect = Mat(Vec(4.0 * c.array() * y.array()).asDiagonal());
  CHECK((hess_tilde_from_hat(aff, H) - expect).norm() <= 1e-12);

  // reciprocal base at y = 1: 4 diag(y) Hess diag(y) = 8 id
  BaseFunction h = BaseFunction::reciprocal(2);
  Mat lhs = hess_tilde_from_hat(h, H0) -
            Mat(2.0 * grad_tilde_from_hat(h, H0).asDiagonal());
  CHECK((lhs - 8.0 * Mat::Identity(2, 2)).norm() <= 1e-10);
}

TEST_CASE("transported derivatives agree with direct differencing in H") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  Vec alpha(2);
  alpha << 2.0, 1.0;
  std::vector<BaseFunction> fs = {BaseFunction::reciprocal(2),
                                  BaseFunction::log_barrier(alpha)};
  for (const auto& f : fs) {
    auto ftilde = [&](const Vec& H) { return value_tilde(f, H); };
    for (int t = 0; t < 50; ++t) {
      Vec H(2);
      H << U(rng), U(rng);
      auto fd = finite_diff_oracle(ftilde, H);
      CHECK((grad_tilde_from_hat(f, H) - fd.grad).norm() <=
            1e-5 * std::max(1.0, fd.grad.norm()));
      CHECK((hess_tilde_from_hat(f, H) - fd.hess).norm() <=
            1e-4 * std::max(1.0, fd.hess.norm()));
    }
  }
}

TEST_CASE("monotonicity sign is preserved between the two pictures") {
  // grad ftilde = 2 grad fhat .* y with y > 0, so generator-wise signs match.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> P(0.4, 3.0), U(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    Vec c(2);
    c << U(rng), U(rng);
    BaseFunction f = BaseFunction::sum(
        {BaseFunction::reciprocal(2), BaseFunction::affine(c, 0.0)}, Vec::Ones(2));
    Vec y(2);
    y << P(rng), P(rng);
    Vec gh = f.grad(y);
    Vec gt = grad_tilde_from_hat(f, ell(y));
    for (int j = 0; j < 2; ++j) CHECK((gh(j) <= 0) == (gt(j) <= 0));
  }
}

TEST_CASE("grid-sampled functions interpolate and difference") {
  // sample h(y) = 1/y1 + 1/y2 on a fine tensor grid
  int n = 41;
  Vec ax = Vec::LinSpaced(n, 0.5, 3.0);
  Vec vals(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) vals(i * n + j) = 1.0 / ax(i) + 1.0 / ax(j);
  BaseFunction g = BaseFunction::grid_sampled({ax, ax}, vals);
  CHECK_FALSE(g.smooth());

  std::mt19937 rng(9);
  std::uniform_real_distribution<double> P(0.8, 2.5);
  BaseFunction h = BaseFunction::reciprocal(2);
  for (int t = 0; t < 30; ++t) {
    Vec y(2);
    y << P(rng), P(rng);
    CHECK(std::abs(g.value(y) - h.value(y)) <= 5e-3);
    // secant differencing is first order in the grid spacing
    CHECK((g.grad(y) - h.grad(y)).norm() <= 1e-1);
  }
  // exact at nodes
  Vec node(2);
  node << ax(10), ax(20);
  CHECK(g.value(node) == Catch::Approx(h.value(node)).margin(1e-12));

  Vec out(2);
  out << 0.1, 1.0;
  CHECK_THROWS_AS(g.value(out), std::invalid_argument);
}

TEST_CASE("grid construction rejects malformed input") {
  Vec ax(3);
  ax << 1.0, 2.0, 1.5;  // not increasing
  CHECK_THROWS_AS(BaseFunction::grid_sampled({ax}, Vec::Zero(3)), std::invalid_argument);
  Vec ok = Vec::LinSpaced(3, 1.0, 2.0);
  CHECK_THROWS_AS(BaseFunction::grid_sampled({ok, ok}, Vec::Zero(8)), std::invalid_argument);
  Vec one(1);
  one << 1.0;
  CHECK_THROWS_AS(BaseFunction::grid_sampled({one}, Vec::Zero(1)), std::invalid_argument);
}

TEST_CASE("evaluation guards") {
  BaseFunction h = BaseFunction::reciprocal(2);
  Vec bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(h.value(bad), std::invalid_argument);
  Vec wrong(3);
  wrong << 1, 1, 1;
  CHECK_THROWS_AS(h.value(wrong), std::invalid_argument);
  CHECK_THROWS_AS(BaseFunction::sum({h}, Vec::Ones(2)), std::invalid_argument);
}
