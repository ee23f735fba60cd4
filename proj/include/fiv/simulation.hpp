#ifndef FIV_SIMULATION_HPP
#define FIV_SIMULATION_HPP

#include <cstdint>
#include <vector>

#include "fiv/rng.hpp"
#include "fiv/types.hpp"

namespace fiv {

enum class Process { ar1, ma1, fixed_base };

/// A fully specified data-generating process: base regressors (AR(1)/MA(1)
/// rotated to X~'X~/T = I, or a fixed empirical matrix), feedback vectors
/// alpha_1..alpha_L, true beta and error variance.
struct DgpSpec {
  long T = 0;
  long K = 0;
  Process process = Process::ar1;
  double rho = 0.0;            // ignored for fixed_base
  MatrixXd base;               // required for fixed_base
  std::vector<VectorXd> alphas;
  VectorXd beta;
  double sigma2 = 1.0;

  int feedback_lags() const { return static_cast<int>(alphas.size()); }
  void validate() const;
};

struct EstimatorSummary {
  double bias = 0.0;
  double sd = 0.0;
  double size_5pct = 0.0;
  double mean_sigma2 = 0.0;
};

struct McSummary {
  EstimatorSummary ols;
  EstimatorSummary iv;
  double lower_trace_ratio = 0.0;  // mean of |tr(D'M)|/T
  long n_reps = 0;
  long failures = 0;
  std::uint64_t seed = 0;
};

struct McContrast {
  enum class Kind { feedback_direction, coordinate };
  Kind kind = Kind::feedback_direction;
  int k = 0;  // coordinate index, 0-based

  static McContrast feedback() { return {}; }
  static McContrast coordinate(int k) { return {Kind::coordinate, k}; }
};

/// Base regressors with exact unit sample covariance: V from the requested
/// process, then X~ = V (Lc')^{-1} with Lc the lower Cholesky factor of V'V/T.
MatrixXd gen_base_regressors(long T, long K, Process process, double rho, RngStream& rng);

/// One replication: draws eps_{1-L},...,eps_T ~ N(0, sigma2), perturbs the
/// base by the lagged errors (x_t = x~_t + sum_l alpha_l eps_{t-l}) and sets
/// y = X beta + eps. Base regressors are drawn before the errors.
Dataset gen_sample(const DgpSpec& spec, RngStream& rng);

/// Empirical calibration: fixed_base spec with beta = OLS, sigma2 = e'e/(T-K),
/// alpha = X'De/(e'e) (the sample one-period feedback coefficient).
DgpSpec calibrate_from_data(const MatrixXd& X_r, const VectorXd& y_r);

/// Seeded, order-deterministic Monte Carlo: replication i uses stream
/// (seed, i); per-slot results are reduced in index order, so the summary does
/// not depend on the worker count. workers = 0 reads FEEDBACK_IV_THREADS
/// (0 or unset = hardware concurrency). Throws TooManyFailuresError when more
/// than 1% of replications fail.
McSummary run_monte_carlo(const DgpSpec& spec, long n_reps, const McContrast& contrast,
                          std::uint64_t seed, int workers = 0);

/// Worker count resolution used by run_monte_carlo.
int resolve_workers(int requested);

}  // namespace fiv

#endif  // FIV_SIMULATION_HPP
