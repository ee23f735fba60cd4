#include "fiv/projections.hpp"

#include <cmath>

namespace fiv {

VectorXd shift(const VectorXd& v, int ell) {
  if (ell < 0) throw InvalidInputError("shift: negative lag");
  const long T = v.size();
  VectorXd out = VectorXd::Zero(T);
  if (ell < T) out.tail(T - ell) = v.head(T - ell);
  return out;
}

MatrixXd shift_rows(const MatrixXd& A, int ell) {
  if (ell < 0) throw InvalidInputError("shift_rows: negative lag");
  const long T = A.rows();
  MatrixXd out = MatrixXd::Zero(T, A.cols());
  if (ell < T) out.bottomRows(T - ell) = A.topRows(T - ell);
  return out;
}

MatrixXd lead_rows(const MatrixXd& A, int ell) {
  if (ell < 0) throw InvalidInputError("lead_rows: negative lead");
  const long T = A.rows();
  MatrixXd out = MatrixXd::Zero(T, A.cols());
  if (ell < T) out.topRows(T - ell) = A.bottomRows(T - ell);
  return out;
}

VectorXd lead(const VectorXd& v, int ell) {
  return lead_rows(v, ell);
}

double lower_trace(const MatrixXd& A, int ell) {
  if (A.rows() != A.cols()) throw InvalidInputError("lower_trace: matrix not square");
  if (ell < 1 || ell >= A.rows()) throw InvalidInputError("lower_trace: lag out of range");
  double s = 0.0;
  for (long t = ell; t < A.rows(); ++t) s += A(t, t - ell);
  return s;
}

MatrixXd annihilator(const MatrixXd& X) {
  const long T = X.rows();
  const long K = X.cols();
  Eigen::ColPivHouseholderQR<MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < K)
    throw SingularDesignError("annihilator: rank-deficient design (rank " +
                                  std::to_string(qr.rank()) + " of " + std::to_string(K) + ")",
                              qr.rank());
  MatrixXd Q = qr.householderQ() * MatrixXd::Identity(T, K);
  return MatrixXd::Identity(T, T) - Q * Q.transpose();
}

CrossMoments::CrossMoments(const MatrixXd& X, int max_lags)
    : T_(X.rows()), K_(X.cols()), L_(max_lags), bmax_(2 * max_lags + 2) {
  if (max_lags < 0) throw InvalidInputError("CrossMoments: negative lag order");
  if (T_ <= K_) throw InvalidInputError("CrossMoments: requires T > K");
  std::vector<MatrixXd> lags(static_cast<size_t>(bmax_) + 1);
  for (int l = 0; l <= bmax_; ++l) lags[static_cast<size_t>(l)] = shift_rows(X, l);
  std::vector<MatrixXd> leads(static_cast<size_t>(L_) + 2);
  for (int l = 0; l <= L_ + 1; ++l) leads[static_cast<size_t>(l)] = lead_rows(X, l);

  lag_grams_.resize(static_cast<size_t>((L_ + 2) * (bmax_ + 1)));
  for (int a = 0; a <= L_ + 1; ++a)
    for (int b = 0; b <= bmax_; ++b)
      lag_grams_[static_cast<size_t>(a * (bmax_ + 1) + b)] =
          lags[static_cast<size_t>(a)].transpose() * lags[static_cast<size_t>(b)];

  lead_grams_.resize(static_cast<size_t>((L_ + 2) * (L_ + 2)));
  for (int a = 0; a <= L_ + 1; ++a)
    for (int b = 0; b <= L_ + 1; ++b)
      lead_grams_[static_cast<size_t>(a * (L_ + 2) + b)] =
          leads[static_cast<size_t>(a)].transpose() * leads[static_cast<size_t>(b)];
}

const MatrixXd& CrossMoments::A(int a, int b) const {
  if (a < 0 || b < 0 || a > L_ + 1 || b > bmax_)
    throw InvalidInputError("CrossMoments::A index out of range");
  return lag_grams_[static_cast<size_t>(a * (bmax_ + 1) + b)];
}

const MatrixXd& CrossMoments::B(int a, int b) const {
  if (a < 0 || b < 0 || a > L_ + 1 || b > L_ + 1)
    throw InvalidInputError("CrossMoments::B index out of range");
  return lead_grams_[static_cast<size_t>(a * (L_ + 2) + b)];
}

MatrixXd CrossMoments::S(const GammaPolynomial& g) const {
  if (g.lags() > L_) throw InvalidInputError("CrossMoments: gamma order exceeds max_lags");
  MatrixXd s = A(0, 0);
  for (int j = 0; j < g.lags(); ++j) s -= g[j] * A(0, j + 1);
  return s;
}

GammaTransform::GammaTransform(const CrossMoments& mom, const GammaPolynomial& g)
    : mom_(mom), g_(g) {
  g_.validate();
  MatrixXd s = mom.S(g_);
  lu_.compute(s);
  if (!(lu_.rcond() > 1.0 / kSingularCondition))
    throw NearSingularTransformError("S(gamma) is numerically singular (rcond " +
                                     std::to_string(lu_.rcond()) + ")");
  lu_t_.compute(s.transpose());
}

VectorXd GammaTransform::solve_transposed(const VectorXd& rhs) const {
  return lu_t_.solve(rhs);
}

double GammaTransform::lead_trace(int m) const {
  // tr[(D')^m M_Gamma] = -tr[S^{-1} X'(I-Gamma)(D')^m X],
  // X'(I-Gamma)(D')^m X = A_{m,0}' ... expanded: A(m,0) - sum_j gamma_j B(j+1,m).
  MatrixXd C = mom_.A(m, 0);
  for (int j = 0; j < g_.lags(); ++j) C -= g_[j] * mom_.B(j + 1, m);
  return -lu_.solve(C).trace();
}

double GammaTransform::lag_trace(int m) const {
  // tr[D^m M_Gamma] = -tr[S^{-1} (A_{0,m} - sum_j gamma_j A_{0,j+m})].
  MatrixXd C = mom_.A(0, m);
  for (int j = 0; j < g_.lags(); ++j) C -= g_[j] * mom_.A(0, j + 1 + m);
  return -lu_.solve(C).trace();
}

VectorXd trace_equation_values(const CrossMoments& mom, const GammaPolynomial& g) {
  const int L = g.lags();
  GammaTransform tf(mom, g);
  // tau_m = tr[(D')^m M_Gamma] (m>0), tr[D^{-m} M_Gamma] (m<0), T-K (m=0).
  std::vector<double> tau(static_cast<size_t>(2 * L + 1));
  auto tau_at = [&](int m) -> double& { return tau[static_cast<size_t>(m + L)]; };
  tau_at(0) = tf.trace();
  for (int m = 1; m <= L; ++m) {
    tau_at(m) = tf.lead_trace(m);
    tau_at(-m) = tf.lag_trace(m);
  }
  VectorXd out(L);
  for (int ell = 1; ell <= L; ++ell) {
    double v = tau_at(ell);
    for (int j = 1; j <= L; ++j) v -= g[j - 1] * tau_at(ell - j);
    out[ell - 1] = v;
  }
  return out;
}

double effective_dof(const CrossMoments& mom, const GammaPolynomial& g) {
  GammaTransform tf(mom, g);
  double dof = tf.trace();
  for (int j = 1; j <= g.lags(); ++j) dof -= g[j - 1] * tf.lag_trace(j);
  return dof;
}

namespace detail {

MatrixXd apply_one_minus_gamma(const MatrixXd& A, const GammaPolynomial& g) {
  MatrixXd out = A;
  for (int j = 0; j < g.lags(); ++j)
    if (g[j] != 0.0) out -= g[j] * shift_rows(A, j + 1);
  return out;
}

MatrixXd apply_one_minus_gamma_adj(const MatrixXd& A, const GammaPolynomial& g) {
  MatrixXd out = A;
  for (int j = 0; j < g.lags(); ++j)
    if (g[j] != 0.0) out -= g[j] * lead_rows(A, j + 1);
  return out;
}

}  // namespace detail
}  // namespace fiv
