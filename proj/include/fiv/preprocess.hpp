#ifndef FIV_PREPROCESS_HPP
#define FIV_PREPROCESS_HPP

#include "fiv/types.hpp"

namespace fiv {

struct FilterConfig {
  int p = 4;  // autoregressive lags
  int h = 8;  // forecast horizon (two years of quarterly data)
};

/// Hamilton (2018) cyclical component: residual of the h-step-ahead regression
/// of series_{t+h} on (1, series_t, ..., series_{t-p+1}). Output has length
/// T - h - p + 1; entry j corresponds to original index j + p + h - 1 (0-based).
VectorXd hamilton_filter(const VectorXd& series, const FilterConfig& cfg = {});

/// Demeans each column and scales it to unit sample variance (divisor n-1).
MatrixXd standardize(const MatrixXd& X);

}  // namespace fiv

#endif  // FIV_PREPROCESS_HPP
