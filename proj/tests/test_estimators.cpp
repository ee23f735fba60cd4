#include <doctest.h>

#include <cmath>

#include "dense_oracle.hpp"
#include "fiv/estimators.hpp"

using namespace fiv;

namespace {

// Scalar root of the one-lag estimating equation by bisection, dense route.
double bisection_root(const MatrixXd& X, double lo, double hi, double tol) {
  CrossMoments mom(X, 1);
  auto f = [&](double g) { return trace_equation_values(mom, GammaPolynomial({g}))[0]; };
  double flo = f(lo);
  REQUIRE(flo * f(hi) < 0.0);
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (flo * f(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("ones design has the closed-form gamma (3-sqrt(21))/6") {
  MatrixXd X = MatrixXd::Ones(4, 1);
  VectorXd y(4);
  y << 1.0, 2.0, 0.5, -1.0;
  Dataset d(X, y);
  int iters = 0;
  GammaPolynomial g = solve_gamma(d, {}, &iters);
  CHECK(std::abs(g[0] - (3.0 - std::sqrt(21.0)) / 6.0) < 1e-10);
  CHECK(iters < 100);
}

TEST_CASE("fixed point matches a bisection root of the trace equation") {
  RngStream rng(21, 0);
  for (int rep = 0; rep < 10; ++rep) {
    long T = 40 + 10 * rep;
    long K = 1 + rep % 5;  // K < T/5 throughout
    MatrixXd base = oracle::random_design(rng, T, K);
    // correlate the rows a little so gamma is not trivially tiny
    for (long t = 1; t < T; ++t) base.row(t) += 0.6 * base.row(t - 1);
    Dataset d(base, rng.normal_vector(T));
    GammaPolynomial g = solve_gamma(d);
    double root = bisection_root(base, -0.9, 0.9, 1e-13);
    CHECK(std::abs(g[0] - root) < 1e-10);
  }
}

TEST_CASE("ols_fit matches the dense normal equations") {
  RngStream rng(22, 0);
  MatrixXd X = rng.normal_matrix(30, 4);
  VectorXd y = rng.normal_vector(30);
  Dataset d(X, y);
  FitResult f = ols_fit(d);
  VectorXd bd = (X.transpose() * X).ldlt().solve(X.transpose() * y);
  CHECK((f.beta - bd).norm() < 1e-10);
  VectorXd e = y - X * bd;
  CHECK(f.sigma2 == doctest::Approx(e.squaredNorm() / 26.0).epsilon(1e-12));
  CHECK(f.dof == doctest::Approx(26.0));
  CHECK(f.gamma.lags() == 0);
}

TEST_CASE("iv_fit matches the dense oblique estimator") {
  RngStream rng(23, 0);
  for (int rep = 0; rep < 5; ++rep) {
    long T = 30 + 5 * rep;
    MatrixXd X = oracle::random_design(rng, T, 3);
    VectorXd y = rng.normal_vector(T);
    Dataset d(X, y);
    GammaPolynomial g({0.3, -0.15});
    FitResult f = iv_fit(d, g);

    MatrixXd IG = MatrixXd::Identity(T, T) - oracle::gamma_op(T, g);
    VectorXd bd = (X.transpose() * IG * X).partialPivLu().solve(X.transpose() * IG * y);
    CHECK((f.beta - bd).norm() < 1e-9);

    MatrixXd MG = oracle::oblique_annihilator(X, g);
    double dof = (IG * MG).trace();
    CHECK(f.dof == doctest::Approx(dof).epsilon(1e-10));
    CHECK(f.sigma2 == doctest::Approx(y.dot(IG * MG * y) / dof).epsilon(1e-9));
  }
}

TEST_CASE("gamma = 0 reproduces OLS exactly") {
  RngStream rng(24, 0);
  MatrixXd X = rng.normal_matrix(40, 5);
  VectorXd y = rng.normal_vector(40);
  Dataset d(X, y);
  FitResult f0 = iv_fit(d, GammaPolynomial::zeros(1));
  FitResult fo = ols_fit(d);
  CHECK((f0.beta - fo.beta).norm() < 1e-12);
  CHECK(f0.sigma2 == doctest::Approx(fo.sigma2).epsilon(1e-12));
  CHECK(f0.dof == doctest::Approx(fo.dof).epsilon(1e-12));
}

TEST_CASE("Lemma 7 identities hold for the oblique projection") {
  RngStream rng(25, 0);
  for (int rep = 0; rep < 20; ++rep) {
    long T = 20 + rep;
    long K = 2 + rep % 4;
    MatrixXd X = oracle::random_design(rng, T, K);
    VectorXd y = rng.normal_vector(T);
    double gv = -0.5 + 0.05 * rep;
    if (std::abs(gv) < 0.01) gv = 0.25;
    GammaPolynomial g({gv});

    MatrixXd I = MatrixXd::Identity(T, T);
    MatrixXd G = oracle::gamma_op(T, g);
    MatrixXd IG = I - G;
    MatrixXd MG = oracle::oblique_annihilator(X, g);
    MatrixXd PG = I - MG;
    MatrixXd M = I - X * (X.transpose() * X).ldlt().solve(MatrixXd(X.transpose()));
    MatrixXd P = I - M;
    MatrixXd AG = IG.partialPivLu().solve(G);

    // (I-Gamma)M_Gamma = M (I + A_Gamma M)^{-1}
    MatrixXd lhs1 = IG * MG;
    MatrixXd rhs1 = M * (I + AG * M).inverse();
    CHECK((lhs1 - rhs1).norm() / rhs1.norm() < 1e-8);
    // P_Gamma = (I - P Gamma)^{-1} P (I-Gamma)
    MatrixXd rhs2 = (I - P * G).partialPivLu().solve(MatrixXd(P * IG));
    CHECK((PG - rhs2).norm() / (PG.norm() + 1.0) < 1e-8);
    // M_Gamma = (I - P Gamma)^{-1} M
    MatrixXd rhs3 = (I - P * G).partialPivLu().solve(M);
    CHECK((MG - rhs3).norm() / MG.norm() < 1e-8);
    // beta_IV = (X'X)^{-1} X' (I + A_Gamma M)^{-1} y
    Dataset d(X, y);
    FitResult f = iv_fit(d, g);
    VectorXd rhs4 = (X.transpose() * X)
                        .ldlt()
                        .solve(X.transpose() * (I + AG * M).partialPivLu().solve(y));
    CHECK((f.beta - rhs4).norm() / (rhs4.norm() + 1.0) < 1e-8);
    CHECK(f.sigma2 >= 0.0);
  }
}

TEST_CASE("adding X b to y shifts beta and leaves gamma and sigma2 alone") {
  RngStream rng(26, 0);
  MatrixXd X = oracle::random_design(rng, 50, 4);
  for (long t = 1; t < 50; ++t) X.row(t) += 0.5 * X.row(t - 1);
  VectorXd y = rng.normal_vector(50);
  VectorXd b = VectorXd::LinSpaced(4, -1.0, 2.0);
  Dataset d1(X, y), d2(X, y + X * b);
  GammaPolynomial g1 = solve_gamma(d1), g2 = solve_gamma(d2);
  CHECK(std::abs(g1[0] - g2[0]) < 1e-12);  // gamma depends on X only
  FitResult f1 = iv_fit(d1, g1), f2 = iv_fit(d2, g1);
  CHECK((f2.beta - f1.beta - b).norm() < 1e-10);
  CHECK(f1.sigma2 == doctest::Approx(f2.sigma2).epsilon(1e-10));
}

TEST_CASE("gamma is invariant under column rotation of X") {
  RngStream rng(27, 0);
  MatrixXd X = oracle::random_design(rng, 60, 4);
  for (long t = 1; t < 60; ++t) X.row(t) += 0.7 * X.row(t - 1);
  MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(rng.normal_matrix(4, 4))
                   .householderQ() * MatrixXd::Identity(4, 4);
  Dataset d1(X, rng.normal_vector(60));
  Dataset d2(MatrixXd(X * Q), d1.y);
  CHECK(std::abs(solve_gamma(d1)[0] - solve_gamma(d2)[0]) < 1e-10);
}

TEST_CASE("solve_gamma_multi at L=1 agrees with the fixed point") {
  RngStream rng(28, 0);
  MatrixXd X = oracle::random_design(rng, 80, 5);
  for (long t = 1; t < 80; ++t) X.row(t) += 0.6 * X.row(t - 1);
  Dataset d(X, rng.normal_vector(80));
  GammaPolynomial g1 = solve_gamma(d);
  MultiGammaResult mr = solve_gamma_multi(d, 1);
  CHECK(std::abs(g1[0] - mr.gamma[0]) < 1e-9);
  CHECK(mr.residual.cwiseAbs().maxCoeff() < 1e-9 * 75.0);
  CHECK_FALSE(mr.clipped);
}

TEST_CASE("solve_gamma_multi drives both L=2 equations to zero") {
  RngStream rng(29, 0);
  MatrixXd X = oracle::random_design(rng, 100, 6);
  for (long t = 1; t < 100; ++t) X.row(t) += 0.65 * X.row(t - 1);
  CrossMoments mom(X, 2);
  MultiGammaResult mr = solve_gamma_multi(mom, 2);
  VectorXd dense = oracle::trace_equations(X, mr.gamma);
  CHECK(dense.cwiseAbs().maxCoeff() < 1e-8 * 94.0);
  CHECK_THROWS_AS(solve_gamma_multi(mom, 0), InvalidInputError);
  CHECK_THROWS_AS(solve_gamma_multi(mom, 3), InvalidInputError);  // moments order too small
}

TEST_CASE("dataset validation rejects bad input") {
  MatrixXd X = MatrixXd::Ones(3, 1);
  VectorXd y(2);
  y << 1, 2;
  CHECK_THROWS_AS(Dataset(X, y), InvalidInputError);
  VectorXd y3 = VectorXd::Ones(3);
  MatrixXd Xn = X;
  Xn(1, 0) = std::nan("");
  CHECK_THROWS_AS(Dataset(Xn, y3), InvalidInputError);
  CHECK_THROWS_AS(Dataset(MatrixXd::Ones(3, 3), y3), InvalidInputError);  // T <= K
}
