#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "fiv/estimators.hpp"
#include "fiv/projections.hpp"
#include "fiv/simulation.hpp"

using namespace fiv;

namespace {

DgpSpec basic_spec(long T, long K, double rho, double a) {
  DgpSpec s;
  s.T = T;
  s.K = K;
  s.process = Process::ar1;
  s.rho = rho;
  s.sigma2 = 1.0;
  VectorXd al = VectorXd::Zero(K);
  al[0] = a;
  s.alphas = {al};
  s.beta = VectorXd::Zero(K);
  return s;
}

}  // namespace

TEST_CASE("base regressors have exact unit sample covariance") {
  for (Process p : {Process::ar1, Process::ma1}) {
    RngStream rng(41, 0);
    MatrixXd Xt = gen_base_regressors(100, 8, p, 0.8, rng);
    MatrixXd G = Xt.transpose() * Xt / 100.0;
    CHECK((G - MatrixXd::Identity(8, 8)).norm() < 1e-10);
  }
}

TEST_CASE("base regressor draws are deterministic given the stream") {
  RngStream r1(42, 3), r2(42, 3);
  MatrixXd a = gen_base_regressors(50, 4, Process::ar1, 0.5, r1);
  MatrixXd b = gen_base_regressors(50, 4, Process::ar1, 0.5, r2);
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("autocorrelated designs carry more subdiagonal mass than white noise") {
  double mass_hi = 0.0, mass_lo = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    RngStream r1(43, static_cast<std::uint64_t>(rep));
    RngStream r2(44, static_cast<std::uint64_t>(rep));
    MatrixXd Xh = gen_base_regressors(200, 30, Process::ar1, 0.8, r1);
    MatrixXd Xl = gen_base_regressors(200, 30, Process::ar1, 0.0, r2);
    CrossMoments mh(Xh, 1), ml(Xl, 1);
    mass_hi += std::abs(GammaTransform(mh, GammaPolynomial{}).lead_trace(1)) / 200.0;
    mass_lo += std::abs(GammaTransform(ml, GammaPolynomial{}).lead_trace(1)) / 200.0;
  }
  CHECK(mass_hi > 5.0 * mass_lo);
}

TEST_CASE("gen_sample perturbs only the feedback direction") {
  DgpSpec s = basic_spec(60, 4, 0.5, 1.5);
  RngStream r1(45, 0), r2(45, 0);
  Dataset d = gen_sample(s, r1);
  // replay: zero feedback with identical draws gives X~ and the same errors
  DgpSpec s0 = s;
  s0.alphas[0].setZero();
  Dataset d0 = gen_sample(s0, r2);
  CHECK((d.X.rightCols(3) - d0.X.rightCols(3)).norm() == 0.0);
  VectorXd diff = d.X.col(0) - d0.X.col(0);
  VectorXd eps = d0.y;  // beta = 0 so y = eps
  VectorXd expect = 1.5 * shift(eps, 1);
  // differs only through eps_0 entering row 1
  CHECK((diff.tail(59) - expect.tail(59)).norm() < 1e-12);
  CHECK((d.y - d.X * s.beta - eps).norm() < 1e-12);
}

TEST_CASE("sample feedback covariance approaches a sigma2") {
  DgpSpec s = basic_spec(100000, 2, 0.3, 1.5);
  RngStream rng(46, 0);
  Dataset d = gen_sample(s, rng);
  VectorXd eps = d.y - d.X * s.beta;
  double cov = d.X.col(0).dot(shift(eps, 1)) / static_cast<double>(s.T);
  CHECK(cov == doctest::Approx(1.5).epsilon(0.05));
}

TEST_CASE("calibrate_from_data recovers planted parameters") {
  DgpSpec s = basic_spec(4000, 3, 0.5, 1.5);
  s.beta << 1.0, -0.5, 0.25;
  RngStream rng(47, 0);
  Dataset d = gen_sample(s, rng);
  DgpSpec cal = calibrate_from_data(d.X, d.y);
  CHECK(cal.process == Process::fixed_base);
  CHECK((cal.beta - s.beta).norm() < 0.2);
  CHECK(cal.sigma2 == doctest::Approx(1.0).epsilon(0.1));
  // alpha standard error is roughly 1/sqrt(T)
  CHECK((cal.alphas[0] - s.alphas[0]).norm() < 3.0 * 3.0 / std::sqrt(4000.0));
}

TEST_CASE("calibrated alpha shrinks as 1/sqrt(T) under strict exogeneity") {
  double n_small = 0.0, n_large = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    DgpSpec s1 = basic_spec(400, 3, 0.5, 0.0);
    DgpSpec s2 = basic_spec(6400, 3, 0.5, 0.0);
    RngStream r1(48, static_cast<std::uint64_t>(rep)), r2(49, static_cast<std::uint64_t>(rep));
    Dataset d1 = gen_sample(s1, r1), d2 = gen_sample(s2, r2);
    n_small += calibrate_from_data(d1.X, d1.y).alphas[0].norm();
    n_large += calibrate_from_data(d2.X, d2.y).alphas[0].norm();
  }
  CHECK(n_small < 0.5);             // already small
  CHECK(n_large < 0.6 * n_small);   // shrinking, rate ~ 1/4
}

TEST_CASE("exact fit is rejected as degenerate") {
  MatrixXd X(6, 2);
  X << 1, 0, 0, 1, 1, 1, 2, 1, 1, 3, 0, 2;
  VectorXd b(2);
  b << 1.0, -1.0;
  CHECK_THROWS_AS(calibrate_from_data(X, VectorXd(X * b)), DegenerateSeriesError);
}

TEST_CASE("run_monte_carlo is deterministic across worker counts") {
  DgpSpec s = basic_spec(60, 4, 0.6, 1.0);
  McSummary a = run_monte_carlo(s, 40, McContrast::feedback(), 9, 1);
  McSummary b = run_monte_carlo(s, 40, McContrast::feedback(), 9, 4);
  CHECK(a.ols.bias == b.ols.bias);
  CHECK(a.iv.bias == b.iv.bias);
  CHECK(a.ols.sd == b.ols.sd);
  CHECK(a.iv.size_5pct == b.iv.size_5pct);
  CHECK(a.lower_trace_ratio == b.lower_trace_ratio);
  CHECK(a.failures == 0);
}

TEST_CASE("rotating base and contrast leaves feedback-direction results unchanged") {
  // fixed_base spec so both runs share identical regressor draws
  RngStream rng(50, 0);
  MatrixXd base = gen_base_regressors(80, 4, Process::ar1, 0.7, rng);
  DgpSpec s;
  s.T = 80;
  s.K = 4;
  s.process = Process::fixed_base;
  s.base = base;
  s.sigma2 = 1.0;
  VectorXd al(4);
  al << 1.0, 0.5, 0.0, -0.5;
  s.alphas = {al};
  s.beta = VectorXd::Zero(4);

  MatrixXd Q = Eigen::HouseholderQR<MatrixXd>(RngStream(51, 0).normal_matrix(4, 4))
                   .householderQ() * MatrixXd::Identity(4, 4);
  DgpSpec sr = s;
  sr.base = base * Q;
  sr.alphas = {VectorXd(Q.transpose() * al)};

  McSummary a = run_monte_carlo(s, 30, McContrast::feedback(), 5);
  McSummary b = run_monte_carlo(sr, 30, McContrast::feedback(), 5);
  CHECK(a.ols.bias == doctest::Approx(b.ols.bias).epsilon(1e-8));
  CHECK(a.iv.bias == doctest::Approx(b.iv.bias).epsilon(1e-8));
}

TEST_CASE("feedback contrast requires nonzero alphas") {
  DgpSpec s = basic_spec(40, 3, 0.3, 0.0);
  CHECK_THROWS_AS(run_monte_carlo(s, 10, McContrast::feedback(), 1), InvalidInputError);
  McSummary m = run_monte_carlo(s, 10, McContrast::coordinate(0), 1);
  CHECK(m.n_reps == 10);
  CHECK_THROWS_AS(run_monte_carlo(s, 1, McContrast::coordinate(0), 1), InvalidInputError);
}

TEST_CASE("resolve_workers honors the environment cap") {
  setenv("FEEDBACK_IV_THREADS", "3", 1);
  CHECK(resolve_workers(0) == 3);
  setenv("FEEDBACK_IV_THREADS", "0", 1);
  CHECK(resolve_workers(0) >= 1);
  unsetenv("FEEDBACK_IV_THREADS");
  CHECK(resolve_workers(7) == 7);
}
