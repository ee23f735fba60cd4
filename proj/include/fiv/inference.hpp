#ifndef FIV_INFERENCE_HPP
#define FIV_INFERENCE_HPP

#include "fiv/estimators.hpp"
#include "fiv/projections.hpp"
#include "fiv/types.hpp"

namespace fiv {

struct InferenceOptions {
  double null_value = 0.0;
  double critical_value = 1.96;  // 95% two-sided
};

/// Variance inflation factor psi = |tr(B^2)|/tr(B'B), B = D'(I-Gamma)M_Gamma,
/// for the conservative Gaussian-regime standard errors.
double psi_correction(const Dataset& data, const CrossMoments& mom, const GammaPolynomial& g);

/// Standard error, t statistic and confidence interval for the contrast r'beta.
/// moderate_k uses Sigma = sigma2(Gamma) ||r'(X'(I-Gamma)X)^{-1}X'(I-Gamma)||^2;
/// gaussian_conservative inflates it by (1+psi).
InferenceReport contrast_se(const Dataset& data, const GammaPolynomial& g, const FitResult& fit,
                            const ContrastSpec& r, Regime regime,
                            const InferenceOptions& opt = {});
InferenceReport contrast_se(const Dataset& data, const CrossMoments& mom,
                            const GammaPolynomial& g, const FitResult& fit,
                            const ContrastSpec& r, Regime regime,
                            const InferenceOptions& opt = {});

/// Leading-order bias of r'beta_OLS under one-period feedback:
///   sigma2 r'Sbar^{-1}alpha tr(D'M~),  Sbar = X~'X~ + alpha alpha' sigma2 (T-K).
double ols_bias_oracle(const OracleInputs& o);

/// Leading-order bias of the IV estimator for a given Gamma under L-period
/// feedback; reduces to ols_bias_oracle at Gamma = 0, and vanishes when gamma
/// solves the estimating equations on X~.
double iv_bias_oracle(const OracleInputs& o, const GammaPolynomial& g);

/// Predicted ratio sigma2_hat(Gamma)/sigma2 to leading order (one-period
/// feedback). Gamma = 0 gives the downward-biased OLS variance ratio.
double variance_bias_oracle(const OracleInputs& o, const GammaPolynomial& g);

/// Strict-exogeneity standard error of the OLS-IV difference in direction r:
///   sigma ||r'[(X'X)^{-1}X' - (X'(I-Gamma)X)^{-1}X'(I-Gamma)]||.
double diff_se(const Dataset& data, const GammaPolynomial& g, double sigma2,
               const ContrastSpec& r);

}  // namespace fiv

#endif  // FIV_INFERENCE_HPP
