#ifndef FIV_TESTS_DENSE_ORACLE_HPP
#define FIV_TESTS_DENSE_ORACLE_HPP

// Dense T x T reference implementations, independent of the production code
// paths (which never materialize the shift operator).

#include <Eigen/Dense>

#include "fiv/rng.hpp"
#include "fiv/types.hpp"

namespace oracle {

using fiv::MatrixXd;
using fiv::VectorXd;

inline MatrixXd lag_op(long T) {
  MatrixXd D = MatrixXd::Zero(T, T);
  for (long t = 1; t < T; ++t) D(t, t - 1) = 1.0;
  return D;
}

inline MatrixXd gamma_op(long T, const fiv::GammaPolynomial& g) {
  MatrixXd D = lag_op(T);
  MatrixXd P = D;
  MatrixXd G = MatrixXd::Zero(T, T);
  for (int j = 1; j <= g.lags(); ++j) {
    G += g[j - 1] * P;
    P = D * P;
  }
  return G;
}

inline MatrixXd oblique_annihilator(const MatrixXd& X, const fiv::GammaPolynomial& g) {
  const long T = X.rows();
  MatrixXd IG = MatrixXd::Identity(T, T) - gamma_op(T, g);
  MatrixXd S = X.transpose() * IG * X;
  return MatrixXd::Identity(T, T) - X * S.partialPivLu().solve(MatrixXd(X.transpose() * IG));
}

/// tr[(D')^m M_Gamma] for m > 0, tr[D^{-m} M_Gamma] for m < 0, tr[M_Gamma] at 0.
inline double tau(const MatrixXd& X, const fiv::GammaPolynomial& g, int m) {
  const long T = X.rows();
  MatrixXd MG = oblique_annihilator(X, g);
  if (m == 0) return MG.trace();
  MatrixXd D = lag_op(T);
  MatrixXd P = MatrixXd::Identity(T, T);
  for (int i = 0; i < (m > 0 ? m : -m); ++i) P = D * P;
  if (m > 0) return (P.transpose() * MG).trace();
  return (P * MG).trace();
}

/// The estimating equations assembled from dense taus by the same
/// lag-algebra combination the solver uses.
inline VectorXd trace_equations(const MatrixXd& X, const fiv::GammaPolynomial& g) {
  const int L = g.lags();
  VectorXd out(L);
  for (int ell = 1; ell <= L; ++ell) {
    double v = tau(X, g, ell);
    for (int j = 1; j <= L; ++j) v -= g[j - 1] * tau(X, g, ell - j);
    out[ell - 1] = v;
  }
  return out;
}

inline MatrixXd random_design(fiv::RngStream& rng, long T, long K) {
  return rng.normal_matrix(T, K);
}

}  // namespace oracle

#endif
