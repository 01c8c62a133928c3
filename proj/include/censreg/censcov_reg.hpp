#pragma once

#include "censreg/quadrature.hpp"
#include "censreg/weibull_reg.hpp"

#include <optional>
#include <span>

namespace censreg {

// Weibull regression with a right-censored endpoint and one interval-censored
// covariate. Reported on the hazard scale: (lambda, gamma, beta...), the
// censored covariate first in beta. p-values cover the betas only; lambda and
// gamma are reported without one. aic = -2 loglik + 2 (2 + d).
struct CensCovFit {
  double lambda = 0.0;
  double gamma = 0.0;
  std::vector<double> beta;
  std::vector<std::string> beta_names;
  // aligned with [lambda, gamma, beta...]
  std::vector<double> std_errors, ci_low, ci_high, p_values;
  Eigen::MatrixXd covariance;
  bool covariance_ok = false;
  double loglik = 0.0;
  double aic = 0.0;
  int n = 0;
  int n_cens_cov = 0;
  int n_events = 0;
  bool converged = false;
  std::vector<std::string> warnings;
  double conf_level = 0.95;
};

// log L2 for fixed covariate density. Exact-covariate rows contribute
// delta log f(T|X) + (1-delta) log S(T|X) + log f_theta(X1); censored rows the
// log of the integral of that product over the covariate region. The constant
// Bernoulli censoring-status factor is omitted throughout (it shifts log L2 by
// a constant for fixed theta), so reported loglik and AIC omit it too.
double loglik_l2(const WeibullPH& baseline, std::span<const double> beta,
                 std::span<const SurvObservation> data, const CovariateDensity& density,
                 const IntegrationSettings& settings = {});

// Two-stage maximum likelihood: density is estimated beforehand by the caller
// and held fixed. `initial` is (lambda, gamma, beta...); when absent the start
// is an L1 fit with censored covariates imputed at their finite bound.
CensCovFit fit_censcov(std::span<const SurvObservation> data, const CovariateDensity& density,
                       std::optional<std::vector<double>> initial = std::nullopt,
                       const IntegrationSettings& settings = {}, double conf_level = 0.95,
                       const std::string& cens_name = "x1",
                       std::vector<std::string> exact_names = {});

}  // namespace censreg
