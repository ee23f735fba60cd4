#include "fiv/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "fiv/estimators.hpp"
#include "fiv/inference.hpp"
#include "fiv/projections.hpp"
#include "fiv/simulation.hpp"

namespace fiv {

const char* tier_name(WarningTier tier) {
  switch (tier) {
    case WarningTier::green: return "green";
    case WarningTier::amber: return "amber";
    case WarningTier::red: return "red";
  }
  return "unknown";
}

DiagnosticsReport diagnose(const Dataset& data, int L_max, const DiagnosticsConfig& cfg) {
  if (L_max < 1) throw InvalidInputError("diagnose: L_max must be >= 1");
  if (L_max >= data.T()) throw InvalidInputError("diagnose: L_max must be below T");
  if (!(cfg.amber_threshold > 0.0) || !(cfg.red_threshold >= cfg.amber_threshold))
    throw InvalidInputError("diagnose: thresholds must satisfy 0 < amber <= red");

  const double T = static_cast<double>(data.T());
  const double K = static_cast<double>(data.K());
  DiagnosticsReport rep;

  CrossMoments mom(data.X, std::max(1, L_max - 1));
  GammaTransform tf0(mom, GammaPolynomial{});
  rep.lower_trace_ratios.resize(L_max);
  for (int ell = 1; ell <= L_max; ++ell)
    rep.lower_trace_ratios[ell - 1] = tf0.lead_trace(ell) / T;

  const double abs_tr = std::abs(rep.lower_trace_ratios[0]) * T;
  rep.k_over_t = K / T;
  rep.lemma2_ok = K < T / 5.0;
  rep.mu = std::clamp(std::sqrt(abs_tr / K), 0.0, 1.0);
  rep.mu_bound_ok = abs_tr <= K;
  rep.tier = std::abs(rep.lower_trace_ratios[0]) < cfg.amber_threshold ? WarningTier::green
             : std::abs(rep.lower_trace_ratios[0]) <= cfg.red_threshold ? WarningTier::amber
                                                                        : WarningTier::red;

  DgpSpec cal = calibrate_from_data(data.X, data.y);
  rep.estimated_alpha = cal.alphas[0];

  CrossMoments mom1(data.X, 1);
  GammaPolynomial g = solve_gamma(mom1);
  FitResult fo = iv_fit(data, mom1, GammaPolynomial{});
  FitResult fi = iv_fit(data, mom1, g);
  ContrastSpec cs{rep.estimated_alpha, "feedback"};
  double se = diff_se(data, g, fi.sigma2, cs);
  rep.alpha_t_stat = (cs.r.dot(fo.beta) - cs.r.dot(fi.beta)) / se;
  return rep;
}

}  // namespace fiv
