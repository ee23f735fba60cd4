#include "fiv/estimators.hpp"

#include <cmath>

namespace fiv {

namespace {

double gamma_abs_sum(const VectorXd& g) { return g.cwiseAbs().sum(); }

GammaPolynomial to_poly(const VectorXd& g) {
  return GammaPolynomial(std::vector<double>(g.data(), g.data() + g.size()));
}

}  // namespace

FitResult iv_fit(const Dataset& data, const CrossMoments& mom, const GammaPolynomial& g) {
  const long T = data.T();
  const long K = data.K();
  GammaTransform tf(mom, g);

  MatrixXd W = detail::apply_one_minus_gamma(data.X, g);   // (I-Gamma)X
  MatrixXd Z = detail::apply_one_minus_gamma_adj(data.X, g);  // (I-Gamma')X

  FitResult fit;
  fit.gamma = g;
  fit.beta = tf.solve(VectorXd(Z.transpose() * data.y));

  double dof = tf.trace();
  for (int j = 1; j <= g.lags(); ++j) dof -= g[j - 1] * tf.lag_trace(j);
  fit.dof = dof;
  if (!(dof > 0.0)) throw NearSingularTransformError("non-positive effective degrees of freedom");

  // y'(I-Gamma)M_Gamma y = y'(I-Gamma)y - (W'y)' S^{-1} (Z'y)
  double yy = data.y.dot(data.y);
  for (int j = 0; j < g.lags(); ++j) yy -= g[j] * data.y.dot(shift(data.y, j + 1));
  VectorXd Wy = W.transpose() * data.y;
  VectorXd Zy = Z.transpose() * data.y;
  double num = yy - Wy.dot(tf.solve(Zy));
  fit.sigma2 = num / dof;
  if (fit.sigma2 < 0.0 && fit.sigma2 > -1e-10 * (data.y.squaredNorm() / static_cast<double>(T - K) + 1.0))
    fit.sigma2 = 0.0;  // roundoff guard; the quadratic form is psd in exact arithmetic

  fit.solver_residual = g.lags() > 0 ? trace_equation_values(mom, g) : VectorXd(0);
  return fit;
}

FitResult iv_fit(const Dataset& data, const GammaPolynomial& g) {
  CrossMoments mom(data.X, std::max(g.lags(), 0));
  return iv_fit(data, mom, g);
}

FitResult ols_fit(const Dataset& data) {
  CrossMoments mom(data.X, 0);
  return iv_fit(data, mom, GammaPolynomial{});
}

GammaPolynomial solve_gamma(const CrossMoments& mom, const SolverConfig& cfg, int* iterations) {
  const double tk = static_cast<double>(mom.T() - mom.K());
  double g = cfg.initial.lags() >= 1 ? cfg.initial[0] : 0.0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    GammaTransform tf(mom, GammaPolynomial({g}));
    double gn = tf.lead_trace(1) / tk;
    if (std::abs(gn) > kGammaAdmissibleBound)
      gn = std::copysign(kGammaAdmissibleBound, gn);
    if (std::abs(gn - g) <= cfg.tol) {
      if (iterations) *iterations = it;
      return GammaPolynomial({gn});
    }
    g = gn;
  }
  GammaTransform tf(mom, GammaPolynomial({g}));
  throw NoConvergenceError("solve_gamma: no convergence after " + std::to_string(cfg.max_iter) +
                               " iterations",
                           {g}, std::abs(tf.lead_trace(1) / tk - g));
}

GammaPolynomial solve_gamma(const Dataset& data, const SolverConfig& cfg, int* iterations) {
  CrossMoments mom(data.X, 1);
  return solve_gamma(mom, cfg, iterations);
}

MultiGammaResult solve_gamma_multi(const CrossMoments& mom, int L, const SolverConfig& cfg) {
  if (L < 1) throw InvalidInputError("solve_gamma_multi: L must be >= 1");
  if (L >= mom.T() / 4) throw InvalidInputError("solve_gamma_multi: requires L < T/4");
  if (mom.max_lags() < L) throw InvalidInputError("solve_gamma_multi: moments order too small");

  const double scale = static_cast<double>(mom.T() - mom.K());
  VectorXd g = VectorXd::Zero(L);
  if (cfg.initial.lags() == L)
    for (int j = 0; j < L; ++j) g[j] = cfg.initial[j];

  MultiGammaResult out;
  auto eval = [&](const VectorXd& v) { return trace_equation_values(mom, to_poly(v)); };

  VectorXd r = eval(g);
  double rn = r.cwiseAbs().maxCoeff();
  for (int it = 1; it <= cfg.max_iter; ++it) {
    if (rn <= cfg.tol * scale) {
      out.gamma = to_poly(g);
      out.residual = r;
      out.iterations = it - 1;
      return out;
    }
    MatrixXd J(L, L);
    const double h = cfg.jacobian_step;
    for (int j = 0; j < L; ++j) {
      VectorXd gp = g;
      gp[j] += h;
      if (gamma_abs_sum(gp) > kGammaAdmissibleBound) gp[j] = g[j] - h;
      J.col(j) = (eval(gp) - r) / (gp[j] - g[j]);
    }
    Eigen::PartialPivLU<MatrixXd> lu(J);
    if (!(lu.rcond() > 1.0 / kSingularCondition))
      throw NoConvergenceError("solve_gamma_multi: singular Jacobian",
                               {g.data(), g.data() + L}, rn);
    VectorXd step = lu.solve(-r);
    double lambda = 1.0;
    VectorXd gn;
    VectorXd rnext;
    double rn_next = rn;
    bool improved = false;
    for (int halve = 0; halve < 30; ++halve) {
      gn = g + lambda * step;
      if (gamma_abs_sum(gn) > kGammaAdmissibleBound) {
        gn *= kGammaAdmissibleBound / gamma_abs_sum(gn);
        out.clipped = true;
      }
      rnext = eval(gn);
      rn_next = rnext.cwiseAbs().maxCoeff();
      if (rn_next < rn) {
        improved = true;
        break;
      }
      lambda /= 2.0;
    }
    if (!improved)
      throw NoConvergenceError("solve_gamma_multi: line search stalled",
                               {g.data(), g.data() + L}, rn);
    g = gn;
    r = rnext;
    rn = rn_next;
  }
  throw NoConvergenceError("solve_gamma_multi: no convergence after " +
                               std::to_string(cfg.max_iter) + " iterations",
                           {g.data(), g.data() + L}, rn);
}

MultiGammaResult solve_gamma_multi(const Dataset& data, int L, const SolverConfig& cfg) {
  CrossMoments mom(data.X, L);
  return solve_gamma_multi(mom, L, cfg);
}

}  // namespace fiv
