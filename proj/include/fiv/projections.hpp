#ifndef FIV_PROJECTIONS_HPP
#define FIV_PROJECTIONS_HPP

#include <Eigen/Dense>
#include <vector>

#include "fiv/types.hpp"

namespace fiv {

/// v_{t-ell} with zeros shifted in at the start; ell = 0 returns v unchanged,
/// ell >= length yields the zero vector. D is never materialized.
VectorXd shift(const VectorXd& v, int ell);

/// Column-wise shift of a T x K matrix: row t becomes row t-ell (zeros at the top).
MatrixXd shift_rows(const MatrixXd& A, int ell);

/// Lead counterpart: row t becomes row t+ell (zeros at the bottom).
MatrixXd lead_rows(const MatrixXd& A, int ell);
VectorXd lead(const VectorXd& v, int ell);

/// Sum of the ell-th subdiagonal of a square matrix: sum_{t>ell} A_{t,t-ell}.
double lower_trace(const MatrixXd& A, int ell);

/// Orthogonal annihilator M = I - X(X'X)^{-1}X', built from a rank-revealing
/// QR of X. Intended for diagnostics and test oracles; production estimator
/// paths never form T x T matrices.
MatrixXd annihilator(const MatrixXd& X);

/// Precomputed K x K cross-moment matrices of the lagged/led design,
///   A_{a,b} = X'(D')^a D^b X,   B_{a,b} = X' D^a (D')^b X,
/// which make every solver iteration O(K^3) instead of O(T K^2).
class CrossMoments {
 public:
  CrossMoments(const MatrixXd& X, int max_lags);

  long T() const { return T_; }
  long K() const { return K_; }
  int max_lags() const { return L_; }

  /// A_{a,b} = (D^a X)'(D^b X). Available for a <= L+1, b <= 2L+2.
  const MatrixXd& A(int a, int b) const;
  /// B_{a,b} = ((D')^a X)'((D')^b X). Available for a, b <= L+1.
  const MatrixXd& B(int a, int b) const;

  /// S(gamma) = X'(I-Gamma)X = A_{0,0} - sum_ell gamma_ell A_{0,ell}.
  MatrixXd S(const GammaPolynomial& g) const;

 private:
  long T_, K_;
  int L_;
  int bmax_;
  std::vector<MatrixXd> lag_grams_;   // (L+2) x (2L+3) grid
  std::vector<MatrixXd> lead_grams_;  // (L+2) x (L+2) grid
};

/// Factorization of S(gamma) with a condition check, shared by the trace
/// evaluations below. Throws NearSingularTransformError when the condition
/// estimate exceeds kSingularCondition.
class GammaTransform {
 public:
  GammaTransform(const CrossMoments& mom, const GammaPolynomial& g);

  /// tr[(D')^m M_Gamma] for m >= 1 (the m-th lower trace of the oblique annihilator).
  double lead_trace(int m) const;
  /// tr[D^m M_Gamma] for m >= 1 (upper trace).
  double lag_trace(int m) const;
  /// tr[M_Gamma] = T - K, exactly, for any admissible gamma.
  double trace() const { return static_cast<double>(mom_.T() - mom_.K()); }

  MatrixXd solve(const MatrixXd& rhs) const { return lu_.solve(rhs); }
  VectorXd solve(const VectorXd& rhs) const { return lu_.solve(rhs); }
  /// Solve with S' (for contrast weight vectors r'S^{-1}).
  VectorXd solve_transposed(const VectorXd& rhs) const;

  const CrossMoments& moments() const { return mom_; }
  const GammaPolynomial& gamma() const { return g_; }

 private:
  const CrossMoments& mom_;
  GammaPolynomial g_;
  Eigen::PartialPivLU<MatrixXd> lu_;
  Eigen::PartialPivLU<MatrixXd> lu_t_;
};

/// Values of the L estimating equations
///   g_ell = tr[(D')^ell (I-Gamma) M_Gamma],  ell = 1..L,
/// with shift powers composed by exponent addition (the lag-operator algebra
/// used by the estimating equations; in particular the ell = j term carries
/// the full weight T-K). For Gamma = 0 this is exactly the ell-th lower
/// trace of the orthogonal annihilator.
VectorXd trace_equation_values(const CrossMoments& mom, const GammaPolynomial& g);

/// Effective degrees of freedom T - K_Gamma = tr[(I-Gamma) M_Gamma].
double effective_dof(const CrossMoments& mom, const GammaPolynomial& g);

namespace detail {
/// (I-Gamma) applied to the rows of a T x K matrix (or vector).
MatrixXd apply_one_minus_gamma(const MatrixXd& A, const GammaPolynomial& g);
/// (I-Gamma') applied to the rows: subtracts led copies.
MatrixXd apply_one_minus_gamma_adj(const MatrixXd& A, const GammaPolynomial& g);
}  // namespace detail

}  // namespace fiv

#endif  // FIV_PROJECTIONS_HPP
