#include "fiv/json_io.hpp"

#include <string>

namespace fiv {

json vector_to_json(const VectorXd& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInputError("json: expected an array of numbers");
  VectorXd v(static_cast<long>(j.size()));
  long i = 0;
  for (const auto& x : j) {
    if (!x.is_number()) throw InvalidInputError("json: expected an array of numbers");
    v[i++] = x.get<double>();
  }
  return v;
}

json matrix_to_json(const MatrixXd& m) {
  json out = json::array();
  for (long r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInputError("json: expected an array of rows");
  const long rows = static_cast<long>(j.size());
  VectorXd first = vector_from_json(j.at(0));
  MatrixXd m(rows, first.size());
  m.row(0) = first.transpose();
  for (long r = 1; r < rows; ++r) {
    VectorXd row = vector_from_json(j.at(static_cast<size_t>(r)));
    if (row.size() != m.cols()) throw InvalidInputError("json: ragged matrix rows");
    m.row(r) = row.transpose();
  }
  return m;
}

const char* process_name(Process p) {
  switch (p) {
    case Process::ar1: return "ar1";
    case Process::ma1: return "ma1";
    case Process::fixed_base: return "fixed_base";
  }
  return "unknown";
}

Process process_from_name(const std::string& name) {
  if (name == "ar1") return Process::ar1;
  if (name == "ma1") return Process::ma1;
  if (name == "fixed_base") return Process::fixed_base;
  throw InvalidInputError("json: unknown process '" + name + "'");
}

json dgp_spec_to_json(const DgpSpec& spec) {
  json j;
  j["T"] = spec.T;
  j["K"] = spec.K;
  j["process"] = process_name(spec.process);
  j["rho"] = spec.rho;
  j["sigma2"] = spec.sigma2;
  j["beta"] = vector_to_json(spec.beta);
  json alphas = json::array();
  for (const auto& a : spec.alphas) alphas.push_back(vector_to_json(a));
  j["alphas"] = alphas;
  if (spec.process == Process::fixed_base) j["base"] = matrix_to_json(spec.base);
  return j;
}

DgpSpec dgp_spec_from_json(const json& j) {
  DgpSpec spec;
  try {
    spec.T = j.at("T").get<long>();
    spec.K = j.at("K").get<long>();
    spec.process = process_from_name(j.at("process").get<std::string>());
    if (j.contains("rho")) spec.rho = j.at("rho").get<double>();
    spec.sigma2 = j.at("sigma2").get<double>();
    spec.beta = vector_from_json(j.at("beta"));
    for (const auto& a : j.at("alphas")) spec.alphas.push_back(vector_from_json(a));
    if (j.contains("base")) spec.base = matrix_from_json(j.at("base"));
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("json: bad DgpSpec: ") + e.what());
  }
  spec.validate();
  return spec;
}

json fit_to_json(const FitResult& fit, const std::vector<std::string>& labels) {
  json j;
  json beta = json::object();
  for (long k = 0; k < fit.beta.size(); ++k) beta[labels[static_cast<size_t>(k)]] = fit.beta[k];
  j["beta"] = beta;
  j["sigma2"] = fit.sigma2;
  j["dof"] = fit.dof;
  j["gamma"] = fit.gamma.coeffs;
  j["solver_iterations"] = fit.solver_iterations;
  j["solver_residual"] = vector_to_json(fit.solver_residual);
  j["admissibility_clipped"] = fit.admissibility_clipped;
  return j;
}

json inference_to_json(const InferenceReport& rep) {
  json j;
  j["label"] = rep.label;
  j["estimate"] = rep.estimate;
  j["se"] = rep.se;
  j["t_stat"] = rep.t_stat;
  j["ci_low"] = rep.ci_low;
  j["ci_high"] = rep.ci_high;
  j["psi"] = rep.psi;
  j["regime"] = rep.regime == Regime::gaussian_conservative ? "gaussian_conservative"
                                                            : "moderate_k";
  return j;
}

json diagnostics_to_json(const DiagnosticsReport& rep) {
  json j;
  j["lower_trace_ratios"] = vector_to_json(rep.lower_trace_ratios);
  j["k_over_t"] = rep.k_over_t;
  j["lemma2_ok"] = rep.lemma2_ok;
  j["mu"] = rep.mu;
  j["mu_bound_ok"] = rep.mu_bound_ok;
  j["estimated_alpha"] = vector_to_json(rep.estimated_alpha);
  j["alpha_t_stat"] = rep.alpha_t_stat;
  j["tier"] = tier_name(rep.tier);
  return j;
}

DgpSpec SimulateSpec::cell(long K, double rho) const {
  DgpSpec spec = proto;
  spec.K = K;
  spec.rho = rho;
  if (!a.empty()) {
    spec.alphas.clear();
    for (double al : a) {
      VectorXd v = VectorXd::Zero(K);
      v[0] = al;
      spec.alphas.push_back(v);
    }
  }
  if (!beta_explicit) spec.beta = VectorXd::Constant(K, beta_fill);
  spec.validate();
  return spec;
}

McContrast SimulateSpec::contrast_for(const DgpSpec& cell_spec) const {
  if (contrast_set) return contrast;
  for (const auto& al : cell_spec.alphas)
    if (!al.isZero(0.0)) return McContrast::feedback();
  return McContrast::coordinate(0);
}

SimulateSpec simulate_spec_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInputError("json: simulate spec must be an object");
  SimulateSpec s;
  try {
    s.proto.process =
        j.contains("process") ? process_from_name(j.at("process").get<std::string>())
                              : Process::ar1;
    if (j.contains("base")) {
      s.proto.base = matrix_from_json(j.at("base"));
      s.proto.T = s.proto.base.rows();
      s.k_grid = {s.proto.base.cols()};
    }
    if (j.contains("T")) s.proto.T = j.at("T").get<long>();
    if (j.contains("sigma2")) s.proto.sigma2 = j.at("sigma2").get<double>();

    if (j.contains("K")) {
      s.k_grid.clear();
      const auto& jk = j.at("K");
      if (jk.is_array())
        for (const auto& v : jk) s.k_grid.push_back(v.get<long>());
      else
        s.k_grid.push_back(jk.get<long>());
    }
    json jr = j.contains("rho") ? j.at("rho") : json(0.0);
    if (jr.is_array())
      for (const auto& v : jr) s.rho_grid.push_back(v.get<double>());
    else
      s.rho_grid.push_back(jr.get<double>());

    if (j.contains("a")) {
      const auto& ja = j.at("a");
      if (ja.is_array())
        for (const auto& v : ja) s.a.push_back(v.get<double>());
      else
        s.a.push_back(ja.get<double>());
    }
    if (j.contains("alphas")) {
      if (!s.a.empty()) throw InvalidInputError("json: give either 'a' or 'alphas', not both");
      for (const auto& av : j.at("alphas")) s.proto.alphas.push_back(vector_from_json(av));
    }
    if (j.contains("beta")) {
      const auto& jb = j.at("beta");
      if (jb.is_array()) {
        s.proto.beta = vector_from_json(jb);
        s.beta_explicit = true;
      } else {
        s.beta_fill = jb.get<double>();
      }
    }
    if (j.contains("contrast")) {
      const auto& jc = j.at("contrast");
      s.contrast_set = true;
      if (jc.is_number_integer())
        s.contrast = McContrast::coordinate(jc.get<int>());
      else if (jc.is_string() && jc.get<std::string>() == "feedback")
        s.contrast = McContrast::feedback();
      else
        throw InvalidInputError("json: contrast must be \"feedback\" or a coordinate index");
    }
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("json: bad simulate spec: ") + e.what());
  }
  if (s.k_grid.empty()) throw InvalidInputError("json: simulate spec needs 'K' (or 'base')");
  if (s.proto.T <= 0) throw InvalidInputError("json: simulate spec needs 'T' (or 'base')");
  if (s.a.empty() && s.proto.alphas.empty())
    throw InvalidInputError("json: simulate spec needs 'a' or 'alphas'");
  if (!s.proto.alphas.empty() && s.k_grid.size() > 1)
    throw InvalidInputError("json: explicit 'alphas' require a single K");
  if (s.beta_explicit && s.k_grid.size() > 1)
    throw InvalidInputError("json: explicit 'beta' requires a single K");
  return s;
}

}  // namespace fiv
