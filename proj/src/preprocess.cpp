#include "fiv/preprocess.hpp"

#include <cmath>
#include <string>

namespace fiv {

VectorXd hamilton_filter(const VectorXd& series, const FilterConfig& cfg) {
  const long T = series.size();
  if (cfg.p < 1 || cfg.h < 1) throw InvalidInputError("hamilton_filter: p and h must be >= 1");
  if (T <= cfg.p + cfg.h + 1)
    throw InvalidInputError("hamilton_filter: series too short for p=" + std::to_string(cfg.p) +
                            ", h=" + std::to_string(cfg.h));
  if (!series.allFinite()) throw InvalidInputError("hamilton_filter: non-finite value in series");

  const double mean = series.mean();
  const double spread = (series.array() - mean).abs().maxCoeff();
  if (!(spread > 1e-12 * (std::abs(mean) + 1.0)))
    throw DegenerateSeriesError("hamilton_filter: series is constant");

  const long n = T - cfg.h - cfg.p + 1;
  MatrixXd Z(n, cfg.p + 1);
  VectorXd Y(n);
  for (long i = 0; i < n; ++i) {
    const long t = i + cfg.p - 1;  // index of the most recent conditioning value
    Z(i, 0) = 1.0;
    for (int m = 1; m <= cfg.p; ++m) Z(i, m) = series[t - m + 1];
    Y[i] = series[t + cfg.h];
  }

  Eigen::ColPivHouseholderQR<MatrixXd> qr(Z);
  qr.setThreshold(1e-10);
  return Y - Z * qr.solve(Y);
}

MatrixXd standardize(const MatrixXd& X) {
  const long T = X.rows();
  if (T < 2) throw InvalidInputError("standardize: needs at least two rows");
  MatrixXd out(T, X.cols());
  for (long k = 0; k < X.cols(); ++k) {
    const double mean = X.col(k).mean();
    const double ss = (X.col(k).array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(T - 1));
    if (!(sd > 1e-12 * (std::abs(mean) + 1.0)))
      throw DegenerateSeriesError("standardize: column " + std::to_string(k + 1) +
                                  " is constant");
    out.col(k) = (X.col(k).array() - mean) / sd;
  }
  return out;
}

}  // namespace fiv
