#ifndef FIV_ERRORS_HPP
#define FIV_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace fiv {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent caller input (dimension mismatch, NaN, bad flag).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// X is numerically rank deficient; carries the detected numerical rank.
class SingularDesignError : public Error {
 public:
  SingularDesignError(const std::string& what, long numerical_rank)
      : Error(what), numerical_rank_(numerical_rank) {}
  long numerical_rank() const { return numerical_rank_; }

 private:
  long numerical_rank_;
};

/// S(gamma) = X'(I-Gamma)X is singular or too ill-conditioned to trust.
class NearSingularTransformError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver exhausted its budget; carries the last iterate state.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, std::vector<double> last_iterate,
                     double residual)
      : Error(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}
  const std::vector<double>& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  std::vector<double> last_iterate_;
  double residual_;
};

/// A series or column is degenerate for the requested transformation.
class DegenerateSeriesError : public Error {
 public:
  using Error::Error;
};

/// Contrast weight vector collapses to zero in the estimator's metric.
class DegenerateContrastError : public Error {
 public:
  using Error::Error;
};

/// More than the tolerated fraction of Monte Carlo replications failed.
class TooManyFailuresError : public Error {
 public:
  TooManyFailuresError(const std::string& what, long failures, long n_reps)
      : Error(what), failures_(failures), n_reps_(n_reps) {}
  long failures() const { return failures_; }
  long n_reps() const { return n_reps_; }

 private:
  long failures_;
  long n_reps_;
};

}  // namespace fiv

#endif  // FIV_ERRORS_HPP
