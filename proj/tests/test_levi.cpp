#include "hermitube/levi.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hermitube;

namespace {

std::vector<Vec> sample_points(int rank, int count, unsigned seed, double lo = 0.4,
                               double hi = 3.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> P(lo, hi);
  std::vector<Vec> out;
  for (int t = 0; t < count; ++t) {
    Vec y(rank);
    for (int j = 0; j < rank; ++j) y(j) = P(rng);
    out.push_back(y);
  }
  return out;
}

}  // namespace

TEST_CASE("constant base function gives the zero form") {
  auto m = LieModel::build(Family::SpR, 2);
  BaseFunction cst = BaseFunction::affine(Vec::Zero(2), 5.0);
  Vec y(2);
  y << 1.3, 0.8;
  CHECK(assemble_levi(m, cst, y).dense(m).norm() <= 1e-12);
}

TEST_CASE("reciprocal base at y = 1: frozen block values") {
  auto m = LieModel::build(Family::SpR, 2);
  BaseFunction h = BaseFunction::reciprocal(2);
  Vec ones = Vec::Ones(2);
  LeviForm lf = assemble_levi(m, h, ones);

  // a-block: Hess ftilde - 2 diag(grad ftilde) = 4*2*id - 2*(-2)*id... = 8 id,
  // frozen against the finite-difference oracle below.
  CHECK((lf.a_block - 8.0 * Mat::Identity(2, 2)).norm() <= 1e-10);
  auto fd = finite_diff_oracle([&](const Vec& H) { return value_tilde(h, H); },
                               Vec::Zero(2));
  Mat oracle = fd.hess - Mat(2.0 * fd.grad.asDiagonal());
  CHECK((lf.a_block - oracle).norm() <= 1e-4);

  // off-a multiplier on e_1-e_2: -2 |X|^2/b * (-2) = 4 |X|^2 / b > 0
  for (const auto& blk : lf.blocks) {
    if (blk.label.kind != RootKind::EminusE) continue;
    double norm2 = m.basis_s()[blk.basis_index[0]].norm2;
    CHECK(blk.block(0, 0) == Catch::Approx(4.0 * norm2 / m.b));
  }
}

TEST_CASE("a-block matches the finite-difference formula on random functions") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(0.1, 2.0);
  for (auto fam : {std::pair{Family::SpR, std::pair{2, 0}},
                   {Family::SUpq, std::pair{2, 3}}}) {
    auto m = LieModel::build(fam.first, fam.second.first, fam.second.second);
    for (int t = 0; t < 20; ++t) {
      Vec alpha(m.rank), c(m.rank);
      for (int j = 0; j < m.rank; ++j) {
        alpha(j) = U(rng);
        c(j) = -U(rng);
      }
      BaseFunction f = BaseFunction::sum(
          {BaseFunction::reciprocal(m.rank), BaseFunction::log_barrier(alpha),
           BaseFunction::affine(c, 0.0)},
          Vec::Ones(3));
      for (const Vec& y : sample_points(m.rank, 3, 100 + t)) {
        LeviForm lf = assemble_levi(m, f, y);
        auto fd = finite_diff_oracle([&](const Vec& H) { return value_tilde(f, H); },
                                     ell(y));
        Mat oracle = fd.hess - Mat(2.0 * fd.grad.asDiagonal());
        CHECK((lf.a_block - oracle).norm() <= 1e-4 * std::max(1.0, oracle.norm()));
      }
    }
  }
}

TEST_CASE("invariant-metric base reproduces the inner product on every block") {
  for (auto spec : {std::tuple{Family::SL2R, 1, 0}, {Family::SpR, 2, 0},
                    {Family::SUpq, 2, 3}}) {
    auto m = LieModel::build(std::get<0>(spec), std::get<1>(spec), std::get<2>(spec));
    INFO(m.name());
    BaseFunction rho = BaseFunction::log_barrier(Vec::Constant(m.rank, m.b / 4.0));
    for (const Vec& y : sample_points(m.rank, 3, 23)) {
      Mat dense = assemble_levi(m, rho, y).dense(m);
      for (int p = 0; p < m.dim_s(); ++p)
        for (int q = 0; q < m.dim_s(); ++q)
          CHECK(std::abs(dense(p, q) - m.inner(m.basis_s()[p].X, m.basis_s()[q].X)) <=
                1e-8);
    }
  }
}

TEST_CASE("J-invariance of the assembled form") {
  auto m = LieModel::build(Family::SUpq, 2, 3);
  BaseFunction f = BaseFunction::sum(
      {BaseFunction::reciprocal(2), BaseFunction::log_barrier(Vec::Constant(2, 1.5))},
      Vec::Ones(2));
  for (const Vec& y : sample_points(2, 5, 31)) {
    Mat dense = assemble_levi(m, f, y).dense(m);
    Mat Jm = m.J_matrix();
    CHECK((Jm.transpose() * dense * Jm - dense).norm() <= 1e-8 * dense.norm());
  }
}

TEST_CASE("assembly guards") {
  auto m = LieModel::build(Family::SpR, 2);
  BaseFunction h1 = BaseFunction::reciprocal(1);
  CHECK_THROWS_AS(assemble_levi(m, h1, Vec::Ones(1)), std::invalid_argument);
  BaseFunction h2 = BaseFunction::reciprocal(2);
  Vec bad(2);
  bad << 1.0, -1.0;
  CHECK_THROWS_AS(assemble_levi(m, h2, bad), std::invalid_argument);
}

TEST_CASE("cone-decrease test") {
  auto samples = sample_points(2, 20, 42);
  ConeSpec nontube{2, false}, tube{2, true};

  BaseFunction h = BaseFunction::reciprocal(2);
  CHECK(is_cbar_decreasing(h, samples, nontube, true));

  Vec up(2);
  up << 1.0, 0.0;
  BaseFunction increasing = BaseFunction::affine(up, 0.0);
  Witness w;
  CHECK_FALSE(is_cbar_decreasing(increasing, samples, nontube, false, &w));
  CHECK(w.direction(0) == Catch::Approx(1.0));

  // tube cone ignores the last coordinate: slope on y_2 alone passes
  Vec up2(2);
  up2 << 0.0, 1.0;
  CHECK(is_cbar_decreasing(BaseFunction::affine(up2, 0.0), samples, tube));

  // -ln(dist) on a convex cone-invariant base decreases along the cone
  std::vector<HalfSpace> hs;
  for (int j = 0; j < 2; ++j) {
    Vec n = Vec::Zero(2);
    n(j) = -1.0;
    hs.push_back({n, -1.0});
  }
  DomainBase omega = DomainBase::from_hrep(2, false, hs);
  BaseFunction u = BaseFunction::neg_log_dist(omega);
  auto inner = sample_points(2, 20, 5, 1.5, 4.0);
  CHECK(is_cbar_decreasing(u, inner, nontube));

  // grid-sampled route: monotone ray probing
  int n = 21;
  Vec ax = Vec::LinSpaced(n, 0.5, 4.0);
  Vec vals(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) vals(i * n + j) = 1.0 / ax(i) + 1.0 / ax(j);
  BaseFunction g = BaseFunction::grid_sampled({ax, ax}, vals);
  auto mid = sample_points(2, 10, 8, 1.0, 2.0);
  CHECK(is_cbar_decreasing(g, mid, nontube));
  Vec vals_bad = -vals;
  BaseFunction gbad = BaseFunction::grid_sampled({ax, ax}, vals_bad);
  CHECK_FALSE(is_cbar_decreasing(gbad, mid, nontube));
}

TEST_CASE("plurisubharmonicity classification") {
  auto su23 = LieModel::build(Family::SUpq, 2, 3);
  auto sp2 = LieModel::build(Family::SpR, 2);
  auto samples = sample_points(2, 50, 42);

  BaseFunction h = BaseFunction::reciprocal(2);
  CHECK(classify_psh(su23, h, samples).verdict == PshClass::StrictlyPsh);

  Vec up(2);
  up << 1.0, 0.0;
  auto bad = classify_psh(su23, BaseFunction::affine(up, 0.0), samples);
  CHECK(bad.verdict == PshClass::NotPsh);
  REQUIRE(bad.witness_direction.has_value());
  CHECK((*bad.witness_direction)(0) == Catch::Approx(1.0));

  // tube model: an affine term on the last coordinate never meets the cone
  Vec c2(2);
  c2 << 0.0, 3.0;
  BaseFunction sigma = BaseFunction::sum(
      {BaseFunction::log_barrier(Vec::Constant(2, sp2.b / 4.0)),
       BaseFunction::affine(c2, 1.0)},
      Vec::Ones(2));
  CHECK(classify_psh(sp2, sigma, samples).verdict == PshClass::StrictlyPsh);

  // the same slope on the first coordinate breaks cone-decrease in the tube case
  Vec c1(2);
  c1 << 3.0, 0.0;
  BaseFunction sigma_bad = BaseFunction::sum(
      {BaseFunction::log_barrier(Vec::Constant(2, sp2.b / 4.0)),
       BaseFunction::affine(c1, 0.0)},
      Vec::Ones(2));
  auto far = sample_points(2, 20, 3, 2.0, 5.0);  // gradient positive out here
  CHECK(classify_psh(sp2, sigma_bad, far).verdict == PshClass::NotPsh);

  CHECK_THROWS_AS(classify_psh(sp2, h, {}), std::invalid_argument);
}

TEST_CASE("strict classification implies a positive definite assembled form") {
  auto m = LieModel::build(Family::SUpq, 2, 2);
  BaseFunction h = BaseFunction::reciprocal(2);
  auto samples = sample_points(2, 10, 13);
  REQUIRE(classify_psh(m, h, samples).verdict == PshClass::StrictlyPsh);
  for (const Vec& y : samples) CHECK(assemble_levi(m, h, y).min_eigenvalue(m) > 0);
}
