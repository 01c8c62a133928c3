#pragma once

#include "censreg/distributions.hpp"
#include "censreg/optimize.hpp"
#include "censreg/survdata.hpp"
#include "censreg/twosample.hpp"

#include <span>
#include <string>
#include <vector>

namespace censreg {

// Weibull AFT fit of the fully observed likelihood: events contribute log f,
// right-censored endpoints log S. Covariance is over (mu, log sigma, alpha).
struct AFTFit {
  WeibullAFT params{0.0, 0.0, {}};
  std::vector<std::string> covariate_names;
  Eigen::MatrixXd covariance;
  bool covariance_ok = false;
  double loglik = 0.0;
  int n = 0;
  int n_events = 0;
  bool converged = false;
};

AFTFit fit_weibull_l1(std::span<const double> time, std::span<const int> event,
                      const Eigen::MatrixXd& covariates,
                      std::vector<std::string> names = {});

// Convenience overload: all censored covariates must be exact; the censored
// covariate is placed first, followed by x_exact.
AFTFit fit_weibull_l1(std::span<const SurvObservation> data,
                      std::vector<std::string> names = {});

// Proportional-hazards summary of an AFT fit: gamma = 1/sigma,
// lambda = exp(-mu/sigma), beta = -alpha/sigma, with delta-method standard
// errors from the joint covariance and natural-scale Wald intervals.
// hazard_ratio = exp(beta), event_time_ratio = exp(alpha); their CI bounds are
// the exponentials of the underlying CI bounds.
struct PHSummary {
  ParamEstimate lambda, gamma;
  std::vector<std::string> beta_names;
  std::vector<ParamEstimate> beta;
  std::vector<ParamEstimate> hazard_ratio;
  std::vector<ParamEstimate> event_time_ratio;
  double conf_level = 0.95;
  bool inference_ok = false;
};

PHSummary convert_weibull(const AFTFit& fit, double conf_level = 0.95);

}  // namespace censreg
