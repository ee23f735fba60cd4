#ifndef FIV_TYPES_HPP
#define FIV_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "fiv/errors.hpp"

namespace fiv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Maximum admissible sum of |gamma_ell|; computable surrogate for the
/// operator-norm bound ||Gamma|| < 1 since ||sum gamma_ell D^ell|| <= sum |gamma_ell|.
inline constexpr double kGammaAdmissibleBound = 0.99;

/// Condition-number threshold beyond which a transform counts as singular.
inline constexpr double kSingularCondition = 1e12;

/// Lag-polynomial coefficients (gamma_1,...,gamma_L) defining the
/// instrument transformation Gamma = sum_ell gamma_ell D^ell, where D is the
/// one-period lag (shift) operator. L = 0 means Gamma = 0.
struct GammaPolynomial {
  std::vector<double> coeffs;

  GammaPolynomial() = default;
  explicit GammaPolynomial(std::vector<double> c) : coeffs(std::move(c)) { validate(); }
  static GammaPolynomial zeros(int lags) {
    GammaPolynomial g;
    g.coeffs.assign(static_cast<size_t>(lags), 0.0);
    return g;
  }

  int lags() const { return static_cast<int>(coeffs.size()); }
  double operator[](int ell) const { return coeffs[static_cast<size_t>(ell)]; }

  double abs_sum() const {
    double s = 0.0;
    for (double c : coeffs) s += std::abs(c);
    return s;
  }
  bool admissible() const { return abs_sum() <= kGammaAdmissibleBound; }

  void validate() const {
    for (double c : coeffs)
      if (!std::isfinite(c)) throw InvalidInputError("GammaPolynomial: non-finite coefficient");
    if (!admissible())
      throw InvalidInputError("GammaPolynomial: sum of |gamma_ell| exceeds " +
                              std::to_string(kGammaAdmissibleBound));
  }
};

/// A regression sample: T x K regressor matrix, T outcome vector, labels.
struct Dataset {
  MatrixXd X;
  VectorXd y;
  std::vector<std::string> labels;

  Dataset() = default;
  Dataset(MatrixXd X_, VectorXd y_, std::vector<std::string> labels_ = {});

  long T() const { return X.rows(); }
  long K() const { return X.cols(); }
};

struct SolverConfig {
  double tol = 1e-12;          // on gamma updates (L=1) / scaled residual (L>1)
  int max_iter = 500;
  double jacobian_step = 1e-7; // finite-difference step, multi-period only
  GammaPolynomial initial;     // empty means all zeros at the requested order
};

struct FitResult {
  VectorXd beta;
  double sigma2 = 0.0;
  double dof = 0.0;            // T-K for OLS, T-K_Gamma for IV
  GammaPolynomial gamma;
  int solver_iterations = 0;
  VectorXd solver_residual;    // estimating-equation values at gamma, length L
  bool admissibility_clipped = false;
};

struct ContrastSpec {
  VectorXd r;
  std::string label;

  void validate(long K) const {
    if (r.size() != K) throw InvalidInputError("ContrastSpec: length mismatch");
    if (!r.allFinite()) throw InvalidInputError("ContrastSpec: non-finite weight");
    if (r.isZero(0.0)) throw InvalidInputError("ContrastSpec: zero contrast");
  }
};

enum class Regime { moderate_k, gaussian_conservative };

struct InferenceReport {
  std::string label;
  double estimate = 0.0;
  double se = 0.0;
  double t_stat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double psi = 0.0;            // 0 in the moderate-K regime
  Regime regime = Regime::moderate_k;
};

/// True DGP components for the bias/variance oracles: the strictly exogenous
/// regressor part, the feedback vectors, the error variance, and a contrast.
struct OracleInputs {
  MatrixXd X_tilde;
  std::vector<VectorXd> alphas;
  double sigma2 = 1.0;
  VectorXd r;

  void validate() const {
    if (!(sigma2 > 0.0)) throw InvalidInputError("OracleInputs: sigma2 must be positive");
    for (const auto& a : alphas)
      if (a.size() != X_tilde.cols() || !a.allFinite())
        throw InvalidInputError("OracleInputs: bad feedback vector");
    if (r.size() != X_tilde.cols()) throw InvalidInputError("OracleInputs: bad contrast length");
  }
};

inline Dataset::Dataset(MatrixXd X_, VectorXd y_, std::vector<std::string> labels_)
    : X(std::move(X_)), y(std::move(y_)), labels(std::move(labels_)) {
  if (y.size() != X.rows()) throw InvalidInputError("Dataset: X and y length mismatch");
  if (!X.allFinite() || !y.allFinite()) throw InvalidInputError("Dataset: non-finite entry");
  if (T() <= K()) throw InvalidInputError("Dataset: requires T > K");
  if (labels.empty()) {
    labels.reserve(static_cast<size_t>(K()));
    for (long k = 0; k < K(); ++k) labels.push_back("x" + std::to_string(k + 1));
  }
  if (static_cast<long>(labels.size()) != K())
    throw InvalidInputError("Dataset: label count mismatch");
  // Full-column-rank check at load.
  Eigen::ColPivHouseholderQR<MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < K())
    throw SingularDesignError("Dataset: regressor matrix is rank deficient", qr.rank());
}

}  // namespace fiv

#endif  // FIV_TYPES_HPP
