#ifndef FIV_JSON_IO_HPP
#define FIV_JSON_IO_HPP

#include <json.hpp>

#include "fiv/diagnostics.hpp"
#include "fiv/simulation.hpp"
#include "fiv/types.hpp"

namespace fiv {

using json = nlohmann::json;

json vector_to_json(const VectorXd& v);
VectorXd vector_from_json(const json& j);
json matrix_to_json(const MatrixXd& m);
MatrixXd matrix_from_json(const json& j);

const char* process_name(Process p);
Process process_from_name(const std::string& name);

json dgp_spec_to_json(const DgpSpec& spec);
DgpSpec dgp_spec_from_json(const json& j);

json fit_to_json(const FitResult& fit, const std::vector<std::string>& labels);
json inference_to_json(const InferenceReport& rep);
json diagnostics_to_json(const DiagnosticsReport& rep);

/// A Monte Carlo sweep: a DgpSpec prototype plus grids over K and rho.
/// Feedback may be given either as explicit "alphas" (single-K sweeps, e.g.
/// calibrated fixed_base specs) or as loadings "a" on the first coordinate,
/// rebuilt per grid cell as alpha_l = a_l e_1.
struct SimulateSpec {
  std::vector<long> k_grid;
  std::vector<double> rho_grid;
  DgpSpec proto;                // T, process, sigma2, base; alphas/beta when explicit
  std::vector<double> a;        // per-lag loadings; empty means alphas are explicit
  double beta_fill = 0.0;
  bool beta_explicit = false;
  bool contrast_set = false;
  McContrast contrast;

  DgpSpec cell(long K, double rho) const;
  McContrast contrast_for(const DgpSpec& cell_spec) const;
};

/// Accepts both sweep files (grids under "K"/"rho") and plain DgpSpec JSON
/// as emitted by calibration. Throws InvalidInputError on malformed input.
SimulateSpec simulate_spec_from_json(const json& j);

}  // namespace fiv

#endif  // FIV_JSON_IO_HPP
