#include "hermitube/potential.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hermitube;

namespace {

std::vector<LieModel> all_models() {
  std::vector<LieModel> v;
  v.push_back(LieModel::build(Family::SL2R, 1));
  v.push_back(LieModel::build(Family::SpR, 2));
  v.push_back(LieModel::build(Family::SpR, 3));
  v.push_back(LieModel::build(Family::SUpq, 2, 2));
  v.push_back(LieModel::build(Family::SUpq, 2, 3));
  return v;
}

}  // namespace

TEST_CASE("closed forms of the invariant potential") {
  auto sl2 = LieModel::build(Family::SL2R, 1);
  for (double y : {0.5, 1.0, 2.0, 7.0}) {
    CHECK(rho_hat(sl2, Vec::Constant(1, y)) ==
          Catch::Approx(std::log(1.0 / (y * y))).margin(1e-12));
  }

  auto sp2 = LieModel::build(Family::SpR, 2);
  Vec y2(2);
  y2 << 1.5, 0.8;
  CHECK(rho_hat(sp2, y2) ==
        Catch::Approx(std::log(1.0 / std::pow(y2(0) * y2(1), 3))).margin(1e-12));
  CHECK(rho_hat(sp2, Vec::Ones(2)) == Catch::Approx(0.0).margin(1e-14));
  Vec bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(rho_hat(sp2, bad), std::invalid_argument);
}

TEST_CASE("Siegel-coordinate route of the rank-2 symplectic potential") {
  auto sp2 = LieModel::build(Family::SpR, 2);
  CHECK(siegel_rho(sp2, Mat::Identity(2, 2)) == Catch::Approx(0.0).margin(1e-12));

  Mat D = Mat::Zero(2, 2);
  D(0, 0) = 2;
  D(1, 1) = 3;
  CHECK(siegel_rho(sp2, D) == Catch::Approx(std::log(1.0 / 216.0)));

  // the coordinate route is cross-checked inside siegel_rho; 100 random SPD
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    Mat R(2, 2);
    R << U(rng), U(rng), U(rng), U(rng);
    Mat T = R * R.transpose() + 0.05 * Mat::Identity(2, 2);
    CHECK_NOTHROW(siegel_rho(sp2, T));
    CHECK(siegel_rho(sp2, T) ==
          Catch::Approx(std::log(1.0 / std::pow(T.determinant(), 3))).margin(1e-10));
  }

  CHECK_THROWS_AS(siegel_rho(sp2, Mat(-Mat::Identity(2, 2))), std::invalid_argument);
  CHECK_THROWS_AS(siegel_rho(LieModel::build(Family::SpR, 3), Mat::Identity(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("moment map special values") {
  for (const auto& m : all_models()) {
    INFO(m.name());
    Mat id = Mat::Zero(m.matrix_dim, m.matrix_dim);
    Vec H0 = Vec::Zero(m.rank);
    for (int j = 0; j < m.rank; ++j)
      CHECK(moment_map(m, id, H0, m.E[j]) == Catch::Approx(-m.b / 4.0));
    if (m.rank >= 2) {
      auto idx = m.basis_indices(RootLabel{RootKind::EminusE, 0, 1});
      CHECK(moment_map(m, id, H0, m.basis_s()[idx[0]].X) ==
            Catch::Approx(0.0).margin(1e-10));
    }
  }
}

TEST_CASE("moment map dual formulas and global restriction agree") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (const auto& m : all_models()) {
    INFO(m.name());
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      Mat nlog = Mat::Zero(m.matrix_dim, m.matrix_dim);
      Mat X = Mat::Zero(m.matrix_dim, m.matrix_dim);
      for (int i = 0; i < m.dim_s(); ++i) {
        if (m.basis_s()[i].label.kind == RootKind::ABlock) continue;
        nlog += 0.5 * U(rng) * m.basis_s()[i].X;
        X += U(rng) * m.basis_s()[i].X;
      }
      Vec H(m.rank);
      for (int j = 0; j < m.rank; ++j) H(j) = U(rng);
      double v = moment_map(m, nlog, H, X);  // both formulas asserted inside
      worst = std::max(worst, std::abs(v - moment_map_global_form(m, nlog, H, X)));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("moment map equivariance under the unipotent group") {
  auto m = LieModel::build(Family::SpR, 2);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-0.8, 0.8);
  for (int t = 0; t < 50; ++t) {
    Mat nlog = Mat::Zero(m.matrix_dim, m.matrix_dim);
    Mat glog = Mat::Zero(m.matrix_dim, m.matrix_dim);
    Mat X = Mat::Zero(m.matrix_dim, m.matrix_dim);
    for (int i = 0; i < m.dim_s(); ++i) {
      if (m.basis_s()[i].label.kind == RootKind::ABlock) continue;
      nlog += 0.4 * U(rng) * m.basis_s()[i].X;
      glog += 0.4 * U(rng) * m.basis_s()[i].X;
      X += U(rng) * m.basis_s()[i].X;
    }
    Vec H(2);
    H << U(rng), U(rng);
    Mat g = glog.exp();
    Mat n = nlog.exp();
    double lhs = moment_map_group(m, g * n, H, X);
    double rhs = moment_map_group(m, n, H, Mat(g.inverse() * X * g));
    CHECK(lhs == Catch::Approx(rhs).margin(1e-8 * std::max(1.0, std::abs(lhs))));
  }
}

TEST_CASE("potential family membership") {
  auto sp2 = LieModel::build(Family::SpR, 2);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> P(0.4, 3.0);
  std::vector<Vec> samples;
  for (int t = 0; t < 10; ++t) {
    Vec y(2);
    y << P(rng), P(rng);
    samples.push_back(y);
  }

  // constant shifts never change the form
  auto shift = potential_family(sp2, 0.0, 5.0);
  CHECK(is_killing_potential(sp2, shift.sigma_hat, samples));

  // tube: a slope on the last coordinate is admissible
  auto slope = potential_family(sp2, 3.0, 0.0);
  CHECK(is_killing_potential(sp2, slope.sigma_hat, samples));

  // a slope on the first coordinate perturbs the e_1-e_2 multiplier
  Vec c1(2);
  c1 << 3.0, 0.0;
  BaseFunction wrong = BaseFunction::sum(
      {rho_hat_function(sp2), BaseFunction::affine(c1, 0.0)}, Vec::Ones(2));
  CHECK_FALSE(is_killing_potential(sp2, wrong, samples));

  // non-tube models reject nonzero slopes entirely
  auto su23 = LieModel::build(Family::SUpq, 2, 3);
  CHECK_THROWS_AS(potential_family(su23, 1.0, 0.0), std::invalid_argument);
  CHECK_NOTHROW(potential_family(su23, 0.0, 2.0));
}

TEST_CASE("family parameters are recoverable from values") {
  auto sp2 = LieModel::build(Family::SpR, 2);
  double c_true = -1.75, d_true = 0.6;
  auto spec = potential_family(sp2, c_true, d_true);
  // least squares of sigma - rho against [y_2, 1] on a grid
  std::vector<Vec> grid;
  for (double a = 0.5; a <= 2.5; a += 0.5)
    for (double b = 0.5; b <= 2.5; b += 0.5) {
      Vec y(2);
      y << a, b;
      grid.push_back(y);
    }
  Mat A(static_cast<int>(grid.size()), 2);
  Vec rhs(static_cast<int>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    A(static_cast<int>(i), 0) = grid[i](1);
    A(static_cast<int>(i), 1) = 1.0;
    rhs(static_cast<int>(i)) = spec.sigma_hat.value(grid[i]) - rho_hat(sp2, grid[i]);
  }
  Vec sol = A.colPivHouseholderQr().solve(rhs);
  CHECK(sol(0) == Catch::Approx(c_true).margin(1e-6));
  CHECK(sol(1) == Catch::Approx(d_true).margin(1e-6));
}

TEST_CASE("invariant metric identity on all models") {
  for (const auto& m : all_models()) {
    INFO(m.name());
    auto rep = verify_killing_identity(m, 5, 42);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-8);
  }
}

TEST_CASE("the potential is strictly plurisubharmonic") {
  auto su23 = LieModel::build(Family::SUpq, 2, 3);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> P(0.3, 4.0);
  std::vector<Vec> samples;
  for (int t = 0; t < 30; ++t) {
    Vec y(2);
    y << P(rng), P(rng);
    samples.push_back(y);
  }
  CHECK(classify_psh(su23, rho_hat_function(su23), samples).verdict ==
        PshClass::StrictlyPsh);
}
