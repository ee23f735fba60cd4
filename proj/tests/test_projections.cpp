#include <doctest.h>

#include <cmath>

#include "dense_oracle.hpp"
#include "fiv/projections.hpp"

using namespace fiv;

TEST_CASE("shift and lead move rows with zero fill") {
  VectorXd v(4);
  v << 1, 2, 3, 4;
  VectorXd s = shift(v, 1);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 1.0);
  CHECK(s[3] == 3.0);
  VectorXd l = lead(v, 2);
  CHECK(l[0] == 3.0);
  CHECK(l[1] == 4.0);
  CHECK(l[2] == 0.0);
  CHECK(shift(v, 4).isZero(0.0));
  CHECK(shift(v, 0) == v);
  CHECK_THROWS_AS(shift(v, -1), InvalidInputError);
}

TEST_CASE("shift agrees with the dense lag operator") {
  RngStream rng(11, 0);
  MatrixXd A = rng.normal_matrix(15, 3);
  MatrixXd D = oracle::lag_op(15);
  for (int ell : {1, 2, 5}) {
    MatrixXd Dl = MatrixXd::Identity(15, 15);
    for (int i = 0; i < ell; ++i) Dl = D * Dl;
    CHECK((shift_rows(A, ell) - Dl * A).norm() < 1e-14);
    CHECK((lead_rows(A, ell) - Dl.transpose() * A).norm() < 1e-14);
  }
}

TEST_CASE("annihilator is the orthogonal projector residual") {
  RngStream rng(12, 0);
  MatrixXd X = rng.normal_matrix(20, 4);
  MatrixXd M = annihilator(X);
  CHECK((M * X).norm() < 1e-10);
  CHECK((M - M.transpose()).norm() < 1e-12);
  CHECK((M * M - M).norm() < 1e-12);
  CHECK(M.trace() == doctest::Approx(16.0).epsilon(1e-12));

  MatrixXd Xs(20, 2);
  Xs.col(0) = X.col(0);
  Xs.col(1) = 2.0 * X.col(0);
  CHECK_THROWS_AS(annihilator(Xs), SingularDesignError);
}

TEST_CASE("lower_trace sums the subdiagonal") {
  MatrixXd A(3, 3);
  A << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  CHECK(lower_trace(A, 1) == 4.0 + 8.0);
  CHECK(lower_trace(A, 2) == 7.0);
  CHECK_THROWS_AS(lower_trace(A, 0), InvalidInputError);
}

TEST_CASE("CrossMoments matches dense grams") {
  RngStream rng(13, 0);
  MatrixXd X = rng.normal_matrix(25, 3);
  CrossMoments mom(X, 2);
  MatrixXd D = oracle::lag_op(25);
  for (int a = 0; a <= 3; ++a) {
    MatrixXd Da = MatrixXd::Identity(25, 25);
    for (int i = 0; i < a; ++i) Da = D * Da;
    for (int b = 0; b <= 6; ++b) {
      MatrixXd Db = MatrixXd::Identity(25, 25);
      for (int i = 0; i < b; ++i) Db = D * Db;
      CHECK((mom.A(a, b) - (Da * X).transpose() * (Db * X)).norm() < 1e-12);
      if (b <= 3)
        CHECK((mom.B(a, b) - (Da.transpose() * X).transpose() * (Db.transpose() * X)).norm() <
              1e-12);
    }
  }
  CHECK_THROWS_AS(mom.A(4, 0), InvalidInputError);
  CHECK_THROWS_AS(mom.B(0, 4), InvalidInputError);
}

TEST_CASE("GammaTransform traces equal dense oblique-annihilator traces") {
  RngStream rng(14, 0);
  MatrixXd X = rng.normal_matrix(30, 4);
  GammaPolynomial g({0.25, -0.1});
  CrossMoments mom(X, 2);
  GammaTransform tf(mom, g);
  CHECK(tf.trace() == doctest::Approx(oracle::tau(X, g, 0)).epsilon(1e-10));
  for (int m = 1; m <= 3; ++m) {
    CHECK(tf.lead_trace(m) == doctest::Approx(oracle::tau(X, g, m)).epsilon(1e-10));
    CHECK(tf.lag_trace(m) == doctest::Approx(oracle::tau(X, g, -m)).epsilon(1e-10));
  }
}

TEST_CASE("trace_equation_values agrees with the dense tau combination") {
  RngStream rng(15, 0);
  for (int rep = 0; rep < 5; ++rep) {
    MatrixXd X = oracle::random_design(rng, 40, 5);
    GammaPolynomial g({0.2 - 0.05 * rep, 0.1});
    CrossMoments mom(X, 2);
    VectorXd fast = trace_equation_values(mom, g);
    VectorXd dense = oracle::trace_equations(X, g);
    CHECK((fast - dense).norm() < 1e-8);
  }
}

TEST_CASE("effective_dof matches tr[(I-Gamma)M_Gamma] dense") {
  RngStream rng(16, 0);
  MatrixXd X = rng.normal_matrix(30, 4);
  GammaPolynomial g({0.3});
  CrossMoments mom(X, 1);
  MatrixXd IG = MatrixXd::Identity(30, 30) - oracle::gamma_op(30, g);
  double dense = (IG * oracle::oblique_annihilator(X, g)).trace();
  CHECK(effective_dof(mom, g) == doctest::Approx(dense).epsilon(1e-10));
}

TEST_CASE("singular transform is rejected") {
  // gamma near the admissibility bound with a nearly collinear design
  RngStream rng(17, 0);
  MatrixXd X(10, 2);
  X.col(0) = rng.normal_vector(10);
  X.col(1) = X.col(0) + 1e-14 * rng.normal_vector(10);
  CrossMoments mom(X, 1);
  CHECK_THROWS_AS(GammaTransform(mom, GammaPolynomial({0.1})), NearSingularTransformError);
}
