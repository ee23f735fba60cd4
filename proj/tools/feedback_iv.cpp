#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fiv/csv.hpp"
#include "fiv/diagnostics.hpp"
#include "fiv/estimators.hpp"
#include "fiv/inference.hpp"
#include "fiv/json_io.hpp"
#include "fiv/preprocess.hpp"
#include "fiv/projections.hpp"
#include "fiv/simulation.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void emit(const fiv::json& report, const std::string& out_path) {
  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw fiv::InvalidInputError("cannot write file: " + out_path);
    out << text;
  }
}

struct FitArgs {
  std::string data, outcome, contrast = "feedback", regime = "moderate", out;
  int lags = 1;
};

int cmd_fit(const FitArgs& a) {
  auto start = Clock::now();
  std::string bytes = fiv::read_file(a.data);
  fiv::NumericTable table = fiv::to_numeric(fiv::parse_csv(bytes));
  fiv::Dataset data = fiv::make_dataset(table, a.outcome);
  if (a.lags < 0) throw fiv::InvalidInputError("--lags must be >= 0");
  fiv::Regime regime;
  if (a.regime == "moderate")
    regime = fiv::Regime::moderate_k;
  else if (a.regime == "gaussian")
    regime = fiv::Regime::gaussian_conservative;
  else
    throw fiv::InvalidInputError("--regime must be 'moderate' or 'gaussian'");

  fiv::CrossMoments mom(data.X, std::max(1, a.lags));
  fiv::FitResult ols = fiv::iv_fit(data, mom, fiv::GammaPolynomial{});
  fiv::FitResult fit = ols;
  if (a.lags >= 1) {
    if (a.lags == 1) {
      int iters = 0;
      fit = fiv::iv_fit(data, mom, fiv::solve_gamma(mom, {}, &iters));
      fit.solver_iterations = iters;
    } else {
      fiv::MultiGammaResult res = fiv::solve_gamma_multi(mom, a.lags);
      fit = fiv::iv_fit(data, mom, res.gamma);
      fit.solver_iterations = res.iterations;
      fit.admissibility_clipped = res.clipped;
    }
  }

  std::vector<fiv::ContrastSpec> contrasts;
  if (a.contrast == "feedback") {
    fiv::DgpSpec cal = fiv::calibrate_from_data(data.X, data.y);
    contrasts.push_back({cal.alphas[0], "feedback"});
  } else if (a.contrast == "all") {
    for (long k = 0; k < data.K(); ++k)
      contrasts.push_back({fiv::VectorXd::Unit(data.K(), k), data.labels[static_cast<size_t>(k)]});
  } else {
    long col = -1;
    for (size_t i = 0; i < data.labels.size(); ++i)
      if (data.labels[i] == a.contrast) col = static_cast<long>(i);
    if (col < 0) throw fiv::InvalidInputError("contrast column not found: " + a.contrast);
    contrasts.push_back({fiv::VectorXd::Unit(data.K(), col), a.contrast});
  }

  fiv::json inference = fiv::json::array();
  for (const auto& cs : contrasts)
    inference.push_back(
        fiv::inference_to_json(fiv::contrast_se(data, mom, fit.gamma, fit, cs, regime)));

  fiv::json report;
  report["command"] = "fit";
  report["input_digest"] = fiv::fnv1a_hex(bytes);
  report["fit"] = fiv::fit_to_json(fit, data.labels);
  report["ols"] = fiv::fit_to_json(ols, data.labels);
  report["inference"] = inference;
  report["diagnostics"] = fiv::diagnostics_to_json(
      fiv::diagnose(data, static_cast<int>(std::min<long>(4, data.T() - 1))));
  report["timing_ms"] = elapsed_ms(start);
  report["version"] = kVersion;
  emit(report, a.out);
  return 0;
}

struct DiagnoseArgs {
  std::string data, out;
  int lmax = 4;
};

int cmd_diagnose(const DiagnoseArgs& a) {
  auto start = Clock::now();
  std::string bytes = fiv::read_file(a.data);
  fiv::NumericTable table = fiv::to_numeric(fiv::parse_csv(bytes));
  // Diagnostics screen the regressors; the last column doubles as outcome
  // when none is designated.
  fiv::Dataset data = fiv::make_dataset(table, table.headers.back());

  fiv::json report;
  report["command"] = "diagnose";
  report["input_digest"] = fiv::fnv1a_hex(bytes);
  report["diagnostics"] = fiv::diagnostics_to_json(fiv::diagnose(data, a.lmax));
  report["timing_ms"] = elapsed_ms(start);
  report["version"] = kVersion;
  emit(report, a.out);
  return 0;
}

struct SimulateArgs {
  std::string spec, out;
  long reps = 0;
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& a) {
  fiv::json j;
  try {
    j = fiv::json::parse(fiv::read_file(a.spec));
  } catch (const fiv::json::exception& e) {
    throw fiv::InvalidInputError(std::string("bad spec JSON: ") + e.what());
  }
  fiv::SimulateSpec spec = fiv::simulate_spec_from_json(j);

  fiv::CsvTable table;
  table.headers = {"K",  "rho",  "T",    "estimator",        "bias",   "sd",
                   "size", "lower_trace_ratio", "n_reps", "failures", "seed"};
  std::uint64_t cell_index = 0;
  for (double rho : spec.rho_grid) {
    for (long K : spec.k_grid) {
      fiv::DgpSpec cell = spec.cell(K, rho);
      std::uint64_t cell_seed = a.seed + 1000003ULL * cell_index++;
      fiv::McSummary mc =
          fiv::run_monte_carlo(cell, a.reps, spec.contrast_for(cell), cell_seed);
      auto row = [&](const char* name, const fiv::EstimatorSummary& s) {
        table.rows.push_back({std::to_string(K), fiv::format_double(rho), std::to_string(cell.T),
                              name, fiv::format_double(s.bias), fiv::format_double(s.sd),
                              fiv::format_double(s.size_5pct),
                              fiv::format_double(mc.lower_trace_ratio), std::to_string(mc.n_reps),
                              std::to_string(mc.failures), std::to_string(mc.seed)});
      };
      row("ols", mc.ols);
      row("iv", mc.iv);
    }
  }
  if (a.out.empty())
    std::cout << fiv::render_csv(table);
  else
    fiv::write_csv(a.out, table);
  return 0;
}

struct FilterArgs {
  std::string data, out;
  int p = 4, h = 8;
};

int cmd_filter(const FilterArgs& a) {
  fiv::NumericTable table = fiv::load_numeric_csv(a.data);
  fiv::FilterConfig cfg{a.p, a.h};
  const long T = table.values.rows();
  const long n = T - cfg.h - cfg.p + 1;
  if (n < 1) throw fiv::InvalidInputError("series too short for the requested p and h");

  fiv::MatrixXd filtered(n, table.values.cols());
  for (long k = 0; k < table.values.cols(); ++k) {
    try {
      filtered.col(k) = fiv::hamilton_filter(table.values.col(k), cfg);
    } catch (const fiv::DegenerateSeriesError&) {
      throw fiv::DegenerateSeriesError("constant column: " + table.headers[static_cast<size_t>(k)]);
    }
  }

  fiv::CsvTable out;
  if (!table.date_header.empty()) out.headers.push_back(table.date_header);
  for (const auto& hname : table.headers) out.headers.push_back(hname);
  for (long j = 0; j < n; ++j) {
    std::vector<std::string> row;
    if (!table.date_header.empty())
      row.push_back(table.dates[static_cast<size_t>(j + cfg.p + cfg.h - 1)]);
    for (long k = 0; k < filtered.cols(); ++k) row.push_back(fiv::format_double(filtered(j, k)));
    out.rows.push_back(std::move(row));
  }
  if (a.out.empty())
    std::cout << fiv::render_csv(out);
  else
    fiv::write_csv(a.out, out);
  return 0;
}

struct CalibrateArgs {
  std::string data, outcome, out;
};

int cmd_calibrate(const CalibrateArgs& a) {
  fiv::NumericTable table = fiv::to_numeric(fiv::parse_csv(fiv::read_file(a.data)));
  fiv::Dataset data = fiv::make_dataset(table, a.outcome);
  fiv::DgpSpec spec = fiv::calibrate_from_data(data.X, data.y);
  emit(fiv::dgp_spec_to_json(spec), a.out);
  return 0;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const fiv::NoConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fiv::NearSingularTransformError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fiv::TooManyFailuresError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const fiv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bias-corrected estimation for time-series regressions with weakly exogenous regressors"};
  app.require_subcommand(1);

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Fit OLS and the trace-equation IV estimator");
  fit->add_option("--data", fa.data, "Input CSV")->required();
  fit->add_option("--outcome", fa.outcome, "Outcome column name")->required();
  fit->add_option("--lags", fa.lags, "Feedback lag order L (0 = OLS only)");
  fit->add_option("--contrast", fa.contrast, "Contrast: column name, 'feedback', or 'all'");
  fit->add_option("--regime", fa.regime, "SE regime: 'moderate' or 'gaussian'");
  fit->add_option("--out", fa.out, "Report JSON path (default stdout)");

  DiagnoseArgs da;
  auto* diag = app.add_subcommand("diagnose", "Pre-estimation feedback diagnostics");
  diag->add_option("--data", da.data, "Input CSV")->required();
  diag->add_option("--lmax", da.lmax, "Number of lower-trace ratios");
  diag->add_option("--out", da.out, "Report JSON path (default stdout)");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo sweep from a JSON spec");
  sim->add_option("--spec", sa.spec, "Sweep spec JSON")->required();
  sim->add_option("--reps", sa.reps, "Replications per grid cell")->required();
  sim->add_option("--seed", sa.seed, "Base RNG seed")->required();
  sim->add_option("--out", sa.out, "Results CSV path (default stdout)");

  FilterArgs la;
  auto* filt = app.add_subcommand("filter", "Hamilton-filter every column");
  filt->set_help_flag("--help", "Print this help message and exit");  // frees -h for the horizon
  filt->add_option("--data", la.data, "Input CSV")->required();
  filt->add_option("--p", la.p, "Autoregressive lags");
  filt->add_option("--h", la.h, "Forecast horizon");
  filt->add_option("--out", la.out, "Filtered CSV path (default stdout)");

  CalibrateArgs ca;
  auto* cal = app.add_subcommand("calibrate", "Empirical DGP spec from data");
  cal->add_option("--data", ca.data, "Input CSV")->required();
  cal->add_option("--outcome", ca.outcome, "Outcome column name")->required();
  cal->add_option("--out", ca.out, "DgpSpec JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (fit->parsed()) return guarded([&] { return cmd_fit(fa); });
  if (diag->parsed()) return guarded([&] { return cmd_diagnose(da); });
  if (sim->parsed()) return guarded([&] { return cmd_simulate(sa); });
  if (filt->parsed()) return guarded([&] { return cmd_filter(la); });
  return guarded([&] { return cmd_calibrate(ca); });
}
