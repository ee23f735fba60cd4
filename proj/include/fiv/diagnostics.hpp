#ifndef FIV_DIAGNOSTICS_HPP
#define FIV_DIAGNOSTICS_HPP

#include "fiv/types.hpp"

namespace fiv {

enum class WarningTier { green, amber, red };

/// Tier cutoffs on |tr(D'M)|/T; the paper's prose gives the 5-10% range.
struct DiagnosticsConfig {
  double amber_threshold = 0.05;
  double red_threshold = 0.10;
};

struct DiagnosticsReport {
  VectorXd lower_trace_ratios;  // tr((D')^ell M)/T, ell = 1..L_max
  double k_over_t = 0.0;
  bool lemma2_ok = false;       // K < T/5, the sufficient solvability condition
  double mu = 0.0;              // sqrt(|tr(D'M)|/K) clipped to [0,1]
  bool mu_bound_ok = false;     // |tr(D'M)| <= K, i.e. mu admissible without clipping
  VectorXd estimated_alpha;     // sample feedback coefficient X'De/(e'e)
  double alpha_t_stat = 0.0;    // t_Delta of the OLS-IV difference along estimated_alpha
  WarningTier tier = WarningTier::green;
};

/// Pre-estimation screening: lower-trace ratios of the annihilator, the
/// Lemma 1/2 solvability checks, and the feedback t statistic.
DiagnosticsReport diagnose(const Dataset& data, int L_max = 4,
                           const DiagnosticsConfig& cfg = {});

const char* tier_name(WarningTier tier);

}  // namespace fiv

#endif  // FIV_DIAGNOSTICS_HPP
