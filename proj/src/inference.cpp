#include "fiv/inference.hpp"

#include <algorithm>
#include <cmath>

namespace fiv {

namespace {

// tau_m on the oracle design: tr[(D')^m M_Gamma] for m > 0, tr[D^{-m} M_Gamma]
// for m < 0, T-K at m = 0. Indexed from -lo to hi.
class TauTable {
 public:
  TauTable(const GammaTransform& tf, int lo, int hi) : lo_(lo), vals_(static_cast<size_t>(lo + hi + 1)) {
    for (int m = -lo; m <= hi; ++m) {
      double v;
      if (m == 0)
        v = tf.trace();
      else if (m > 0)
        v = tf.lead_trace(m);
      else
        v = tf.lag_trace(-m);
      vals_[static_cast<size_t>(m + lo_)] = v;
    }
  }

  double operator()(int m) const { return vals_[static_cast<size_t>(m + lo_)]; }

  /// tr[(D')^d (I-Gamma) M_Gamma] under the estimating-equation shift algebra,
  /// for d of either sign: tau_d - sum_j gamma_j tau_{d-j}.
  double factor(int d, const GammaPolynomial& g) const {
    double v = (*this)(d);
    for (int j = 1; j <= g.lags(); ++j) v -= g[j - 1] * (*this)(d - j);
    return v;
  }

 private:
  int lo_;
  std::vector<double> vals_;
};

// Sbar_Gamma = X~'(I-Gamma)X~ + sigma2 sum_{j,l} alpha_j alpha_l' C_{jl} with
// C_{jl} = tr[(D')^j (I-Gamma) M~_Gamma D^l], reduced to tau factors at d = j-l.
MatrixXd oracle_sbar(const OracleInputs& o, const CrossMoments& mom, const GammaPolynomial& g,
                     const TauTable& tau) {
  const int L = static_cast<int>(o.alphas.size());
  MatrixXd sbar = mom.S(g);
  for (int j = 1; j <= L; ++j)
    for (int l = 1; l <= L; ++l)
      sbar += o.sigma2 * tau.factor(j - l, g) * o.alphas[static_cast<size_t>(j - 1)] *
              o.alphas[static_cast<size_t>(l - 1)].transpose();
  return sbar;
}

int oracle_moment_order(int L, const GammaPolynomial& g) {
  return std::max({1, L, 2 * L - 1, g.lags()});
}

}  // namespace

double psi_correction(const Dataset& data, const CrossMoments& mom, const GammaPolynomial& g) {
  const double T = static_cast<double>(data.T());
  GammaTransform tf(mom, g);
  MatrixXd W = detail::apply_one_minus_gamma(data.X, g);
  MatrixXd Z = detail::apply_one_minus_gamma_adj(data.X, g);

  // tr(B'B) = ||(I-Gamma)M_Gamma||_F^2, expanded around the rank-K projection
  // term so no T x T matrix is formed.
  double tr_btb = T;
  for (int j = 1; j <= g.lags(); ++j) tr_btb += g[j - 1] * g[j - 1] * (T - j);
  MatrixXd V = detail::apply_one_minus_gamma_adj(W, g);  // (I-Gamma')(I-Gamma)X
  tr_btb -= 2.0 * tf.solve(MatrixXd(Z.transpose() * V)).trace();
  // tr[S^{-T}(W'W)S^{-1}(Z'Z)] = tr[S^{-1}((S^{-1}Z'Z)'(W'W))]
  MatrixXd Q = tf.solve(MatrixXd(Z.transpose() * Z));
  tr_btb += tf.solve(MatrixXd(Q.transpose() * (W.transpose() * W))).trace();

  // tr(B^2) with B = G - U S^{-1} Z', G = D'(I-Gamma), U = D'(I-Gamma)X.
  double tr_g2 = 0.0;
  if (g.lags() >= 1) tr_g2 += g[0] * g[0] * (T - 1.0);
  if (g.lags() >= 2) tr_g2 -= 2.0 * g[1] * (T - 2.0);
  MatrixXd U = lead_rows(W, 1);
  MatrixXd GtZ = detail::apply_one_minus_gamma_adj(shift_rows(Z, 1), g);  // G'Z
  MatrixXd C = tf.solve(MatrixXd(Z.transpose() * U));
  double tr_b2 = tr_g2 - 2.0 * tf.solve(MatrixXd(GtZ.transpose() * U)).trace() +
                 C.cwiseProduct(C.transpose()).sum();

  if (!(tr_btb > 0.0))
    throw NearSingularTransformError("psi_correction: non-positive tr(B'B)");
  return std::abs(tr_b2) / tr_btb;
}

InferenceReport contrast_se(const Dataset& data, const CrossMoments& mom,
                            const GammaPolynomial& g, const FitResult& fit,
                            const ContrastSpec& r, Regime regime, const InferenceOptions& opt) {
  r.validate(data.K());
  GammaTransform tf(mom, g);
  MatrixXd Z = detail::apply_one_minus_gamma_adj(data.X, g);
  VectorXd w = Z * tf.solve_transposed(r.r);
  if (w.norm() <= 1e-12 * r.r.norm())
    throw DegenerateContrastError("contrast_se: contrast weights vanish in the IV metric");

  InferenceReport rep;
  rep.label = r.label;
  rep.regime = regime;
  rep.estimate = r.r.dot(fit.beta);
  double se2 = fit.sigma2 * w.squaredNorm();
  if (regime == Regime::gaussian_conservative) {
    rep.psi = psi_correction(data, mom, g);
    se2 *= 1.0 + rep.psi;
  }
  rep.se = std::sqrt(se2);
  if (!(rep.se > 0.0))
    throw DegenerateContrastError("contrast_se: zero standard error");
  rep.t_stat = (rep.estimate - opt.null_value) / rep.se;
  rep.ci_low = rep.estimate - opt.critical_value * rep.se;
  rep.ci_high = rep.estimate + opt.critical_value * rep.se;
  return rep;
}

InferenceReport contrast_se(const Dataset& data, const GammaPolynomial& g, const FitResult& fit,
                            const ContrastSpec& r, Regime regime, const InferenceOptions& opt) {
  CrossMoments mom(data.X, g.lags());
  return contrast_se(data, mom, g, fit, r, regime, opt);
}

double iv_bias_oracle(const OracleInputs& o, const GammaPolynomial& g) {
  o.validate();
  const int L = static_cast<int>(o.alphas.size());
  if (L < 1) throw InvalidInputError("iv_bias_oracle: needs at least one feedback vector");

  CrossMoments mom(o.X_tilde, oracle_moment_order(L, g));
  GammaTransform tf(mom, g);
  TauTable tau(tf, L - 1 + g.lags(), L);
  MatrixXd sbar = oracle_sbar(o, mom, g, tau);

  Eigen::PartialPivLU<MatrixXd> lu(sbar);
  if (!(lu.rcond() > 1.0 / kSingularCondition))
    throw NearSingularTransformError("iv_bias_oracle: Sbar is numerically singular");
  VectorXd rs = lu.transpose().solve(o.r);  // Sbar^{-T} r
  double bias = 0.0;
  for (int l = 1; l <= L; ++l)
    bias += o.sigma2 * rs.dot(o.alphas[static_cast<size_t>(l - 1)]) * tau.factor(l, g);
  return bias;
}

double ols_bias_oracle(const OracleInputs& o) {
  return iv_bias_oracle(o, GammaPolynomial{});
}

double variance_bias_oracle(const OracleInputs& o, const GammaPolynomial& g) {
  o.validate();
  const int L = static_cast<int>(o.alphas.size());
  if (L < 1) throw InvalidInputError("variance_bias_oracle: needs at least one feedback vector");

  CrossMoments mom(o.X_tilde, oracle_moment_order(L, g));
  GammaTransform tf(mom, g);
  TauTable tau(tf, L + g.lags(), L);
  MatrixXd sbar = oracle_sbar(o, mom, g, tau);

  Eigen::PartialPivLU<MatrixXd> lu(sbar);
  if (!(lu.rcond() > 1.0 / kSingularCondition))
    throw NearSingularTransformError("variance_bias_oracle: Sbar is numerically singular");

  double dof = tau.factor(0, g);  // T - K_Gamma
  double corr = 0.0;
  for (int j = 1; j <= L; ++j) {
    VectorXd sa = lu.solve(o.alphas[static_cast<size_t>(j - 1)]);
    for (int l = 1; l <= L; ++l)
      corr += o.sigma2 * o.alphas[static_cast<size_t>(l - 1)].dot(sa) * tau.factor(j, g) *
              tau.factor(-l, g);
  }
  return 1.0 - corr / dof;
}

double diff_se(const Dataset& data, const GammaPolynomial& g, double sigma2,
               const ContrastSpec& r) {
  r.validate(data.K());
  if (!(sigma2 >= 0.0)) throw InvalidInputError("diff_se: negative variance");
  CrossMoments mom(data.X, g.lags());
  GammaTransform tf(mom, g);
  MatrixXd Z = detail::apply_one_minus_gamma_adj(data.X, g);

  Eigen::LLT<MatrixXd> llt(mom.A(0, 0));
  if (llt.info() != Eigen::Success)
    throw SingularDesignError("diff_se: X'X not positive definite", -1);
  VectorXd w = data.X * llt.solve(r.r) - Z * tf.solve_transposed(r.r);
  double se = std::sqrt(sigma2) * w.norm();
  if (!(se > 0.0))
    throw DegenerateContrastError("diff_se: degenerate difference direction");
  return se;
}

}  // namespace fiv
