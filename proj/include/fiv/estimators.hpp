#ifndef FIV_ESTIMATORS_HPP
#define FIV_ESTIMATORS_HPP

#include "fiv/projections.hpp"
#include "fiv/types.hpp"

namespace fiv {

/// Ordinary least squares with the degrees-of-freedom corrected variance
/// sigma2 = y'My/(T-K).
FitResult ols_fit(const Dataset& data);

/// The IV estimator with endogenous instrument Z = (I-Gamma')X:
///   beta = (X'(I-Gamma)X)^{-1} X'(I-Gamma) y,
///   sigma2 = y'(I-Gamma)M_Gamma y / (T-K_Gamma).
/// Gamma = 0 reproduces ols_fit exactly.
FitResult iv_fit(const Dataset& data, const GammaPolynomial& g);
FitResult iv_fit(const Dataset& data, const CrossMoments& mom, const GammaPolynomial& g);

/// Solves the one-period estimating equation tr[D'(I-Gamma)M_Gamma] = 0 by
/// fixed-point iteration on f(gamma) = tr(D'M_Gamma)/(T-K), a contraction with
/// rate <= 1/2 whenever K < T/5. Stops when successive iterates move by <= tol.
GammaPolynomial solve_gamma(const Dataset& data, const SolverConfig& cfg = {},
                            int* iterations = nullptr);
GammaPolynomial solve_gamma(const CrossMoments& mom, const SolverConfig& cfg = {},
                            int* iterations = nullptr);

/// Solves the L-equation system tr[(D')^ell (I-Gamma)M_Gamma] = 0 by damped
/// quasi-Newton with a finite-difference Jacobian. Iterates that leave the
/// admissible region are projected back to its boundary. L = 1 agrees with
/// solve_gamma.
struct MultiGammaResult {
  GammaPolynomial gamma;
  VectorXd residual;
  int iterations = 0;
  bool clipped = false;
};
MultiGammaResult solve_gamma_multi(const Dataset& data, int L, const SolverConfig& cfg = {});
MultiGammaResult solve_gamma_multi(const CrossMoments& mom, int L, const SolverConfig& cfg = {});

}  // namespace fiv

#endif  // FIV_ESTIMATORS_HPP
