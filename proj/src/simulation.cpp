#include "fiv/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "fiv/estimators.hpp"
#include "fiv/inference.hpp"
#include "fiv/projections.hpp"

namespace fiv {

void DgpSpec::validate() const {
  if (T <= 0 || K <= 0 || T <= K) throw InvalidInputError("DgpSpec: requires T > K > 0");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw InvalidInputError("DgpSpec: sigma2 must be positive");
  if (beta.size() != K || !beta.allFinite())
    throw InvalidInputError("DgpSpec: beta must be a finite K-vector");
  for (const auto& a : alphas)
    if (a.size() != K || !a.allFinite())
      throw InvalidInputError("DgpSpec: each alpha must be a finite K-vector");
  if (process == Process::fixed_base) {
    if (base.rows() != T || base.cols() != K)
      throw InvalidInputError("DgpSpec: fixed_base requires a T x K base matrix");
    if (!base.allFinite()) throw InvalidInputError("DgpSpec: non-finite base entry");
  } else if (!(std::abs(rho) < 1.0)) {
    throw InvalidInputError("DgpSpec: requires |rho| < 1");
  }
}

MatrixXd gen_base_regressors(long T, long K, Process process, double rho, RngStream& rng) {
  if (T <= K) throw InvalidInputError("gen_base_regressors: requires T > K");
  if (process == Process::fixed_base)
    throw InvalidInputError("gen_base_regressors: fixed_base has no generator");
  if (!(std::abs(rho) < 1.0)) throw InvalidInputError("gen_base_regressors: requires |rho| < 1");

  for (int attempt = 0; attempt < 2; ++attempt) {
    MatrixXd V(T, K);
    if (process == Process::ar1) {
      // Stationary start: V_1 ~ N(0, I/(1-rho^2)), then V_t = rho V_{t-1} + u_t.
      V.row(0) = rng.normal_vector(K).transpose() / std::sqrt(1.0 - rho * rho);
      for (long t = 1; t < T; ++t)
        V.row(t) = rho * V.row(t - 1) + rng.normal_vector(K).transpose();
    } else {
      // MA(1): v_t = rho u_{t-1} + u_t with u_0 drawn.
      MatrixXd u = rng.normal_matrix(T + 1, K);
      V = u.bottomRows(T) + rho * u.topRows(T);
    }
    Eigen::LLT<MatrixXd> llt(MatrixXd(V.transpose() * V / static_cast<double>(T)));
    if (llt.info() != Eigen::Success) continue;
    return llt.matrixU().solve<Eigen::OnTheRight>(V);
  }
  throw SingularDesignError("gen_base_regressors: rank-deficient draw twice in a row", -1);
}

Dataset gen_sample(const DgpSpec& spec, RngStream& rng) {
  spec.validate();
  const long T = spec.T;
  const int L = spec.feedback_lags();

  MatrixXd X = spec.process == Process::fixed_base
                   ? spec.base
                   : gen_base_regressors(T, spec.K, spec.process, spec.rho, rng);

  // eps_full holds eps_{1-L},...,eps_T; eps_t = eps_full[t+L-1] (1-based t).
  VectorXd eps_full = std::sqrt(spec.sigma2) * rng.normal_vector(T + L);
  VectorXd eps = eps_full.tail(T);
  for (int l = 1; l <= L; ++l)
    X += eps_full.segment(L - l, T) * spec.alphas[static_cast<size_t>(l - 1)].transpose();

  return Dataset(X, X * spec.beta + eps);
}

DgpSpec calibrate_from_data(const MatrixXd& X_r, const VectorXd& y_r) {
  Dataset d(X_r, y_r);  // validates rank, T > K, finiteness
  const long T = d.T();
  const long K = d.K();

  Eigen::LLT<MatrixXd> llt(MatrixXd(X_r.transpose() * X_r));
  if (llt.info() != Eigen::Success)
    throw SingularDesignError("calibrate_from_data: X'X not positive definite", -1);
  VectorXd beta = llt.solve(X_r.transpose() * y_r);
  VectorXd e = y_r - X_r * beta;
  double ee = e.squaredNorm();
  if (ee <= 1e-20 * (y_r.squaredNorm() + 1.0))
    throw DegenerateSeriesError("calibrate_from_data: zero residual, no feedback identifiable");

  DgpSpec spec;
  spec.T = T;
  spec.K = K;
  spec.process = Process::fixed_base;
  spec.base = X_r;
  spec.beta = beta;
  spec.sigma2 = ee / static_cast<double>(T - K);
  // alpha_k = sum_t x_{k,t+1} e_t / e'e: regressors paired with the lagged residual.
  spec.alphas = {VectorXd(X_r.transpose() * shift(e, 1) / ee)};
  return spec;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FEEDBACK_IV_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct RepResult {
  bool ok = false;
  double est_ols = 0.0, se_ols = 0.0, s2_ols = 0.0;
  double est_iv = 0.0, se_iv = 0.0, s2_iv = 0.0;
  double ltr = 0.0;
};

RepResult run_replication(const DgpSpec& spec, const VectorXd& r, std::uint64_t seed,
                          long rep) {
  RepResult out;
  RngStream rng(seed, static_cast<std::uint64_t>(rep));
  Dataset d = gen_sample(spec, rng);
  const int L = std::max(1, spec.feedback_lags());
  CrossMoments mom(d.X, L);

  GammaPolynomial g0;
  out.ltr = std::abs(GammaTransform(mom, g0).lead_trace(1)) / static_cast<double>(d.T());

  ContrastSpec cs{r, "mc"};
  FitResult fo = iv_fit(d, mom, g0);
  InferenceReport io = contrast_se(d, mom, g0, fo, cs, Regime::moderate_k);
  out.est_ols = io.estimate;
  out.se_ols = io.se;
  out.s2_ols = fo.sigma2;

  GammaPolynomial g = L == 1 ? solve_gamma(mom) : solve_gamma_multi(mom, L).gamma;
  FitResult fi = iv_fit(d, mom, g);
  InferenceReport ii = contrast_se(d, mom, g, fi, cs, Regime::moderate_k);
  out.est_iv = ii.estimate;
  out.se_iv = ii.se;
  out.s2_iv = fi.sigma2;
  out.ok = true;
  return out;
}

EstimatorSummary summarize(const std::vector<double>& est, const std::vector<double>& se,
                           const std::vector<double>& s2, double truth) {
  EstimatorSummary s;
  const long n = static_cast<long>(est.size());
  double mean = 0.0;
  for (double e : est) mean += e;
  mean /= static_cast<double>(n);
  s.bias = mean - truth;
  double ss = 0.0;
  for (double e : est) ss += (e - mean) * (e - mean);
  s.sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  long rej = 0;
  for (long i = 0; i < n; ++i)
    if (std::abs(est[static_cast<size_t>(i)] - truth) >
        1.96 * se[static_cast<size_t>(i)])
      ++rej;
  s.size_5pct = static_cast<double>(rej) / static_cast<double>(n);
  double m2 = 0.0;
  for (double v : s2) m2 += v;
  s.mean_sigma2 = m2 / static_cast<double>(n);
  return s;
}

}  // namespace

McSummary run_monte_carlo(const DgpSpec& spec, long n_reps, const McContrast& contrast,
                          std::uint64_t seed, int workers) {
  spec.validate();
  if (n_reps < 2) throw InvalidInputError("run_monte_carlo: n_reps must be >= 2");

  VectorXd r;
  if (contrast.kind == McContrast::Kind::feedback_direction) {
    r = VectorXd::Zero(spec.K);
    for (const auto& a : spec.alphas) r += a;
    if (r.isZero(0.0))
      throw InvalidInputError("run_monte_carlo: feedback direction undefined (alphas zero)");
  } else {
    if (contrast.k < 0 || contrast.k >= spec.K)
      throw InvalidInputError("run_monte_carlo: coordinate index out of range");
    r = VectorXd::Unit(spec.K, contrast.k);
  }
  const double truth = r.dot(spec.beta);

  std::vector<RepResult> slots(static_cast<size_t>(n_reps));
  const int n_workers = static_cast<int>(std::min<long>(resolve_workers(workers), n_reps));
  std::atomic<long> next{0};
  auto work = [&]() {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= n_reps) return;
      try {
        slots[static_cast<size_t>(i)] = run_replication(spec, r, seed, i);
      } catch (const Error&) {
        slots[static_cast<size_t>(i)].ok = false;
      }
    }
  };
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // Index-order reduction: independent of how replications were scheduled.
  std::vector<double> eo, so, vo, ei, si, vi;
  double ltr_sum = 0.0;
  long failures = 0;
  for (const auto& rr : slots) {
    if (!rr.ok) {
      ++failures;
      continue;
    }
    eo.push_back(rr.est_ols);
    so.push_back(rr.se_ols);
    vo.push_back(rr.s2_ols);
    ei.push_back(rr.est_iv);
    si.push_back(rr.se_iv);
    vi.push_back(rr.s2_iv);
    ltr_sum += rr.ltr;
  }
  if (failures * 100 > n_reps)
    throw TooManyFailuresError("run_monte_carlo: failure rate above 1% (" +
                                   std::to_string(failures) + " of " + std::to_string(n_reps) +
                                   ")",
                               failures, n_reps);

  McSummary out;
  out.ols = summarize(eo, so, vo, truth);
  out.iv = summarize(ei, si, vi, truth);
  out.lower_trace_ratio = ltr_sum / static_cast<double>(n_reps - failures);
  out.n_reps = n_reps;
  out.failures = failures;
  out.seed = seed;
  return out;
}

}  // namespace fiv
