#pragma once

#include "censreg/censoring.hpp"
#include "censreg/optimize.hpp"

#include <span>
#include <string>
#include <vector>

namespace censreg {

struct OneSampleFit {
  Family family;
  std::vector<std::string> param_names;
  std::vector<double> estimates;
  std::vector<double> std_errors;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<double> p_values;
  double loglik = 0.0;
  int n_exact = 0, n_left = 0, n_right = 0, n_interval = 0;
  bool converged = false;
  bool covariance_ok = false;
  Eigen::MatrixXd covariance;
  double conf_level = 0.95;

  int n() const { return n_exact + n_left + n_right + n_interval; }
  CovariateDensity density() const { return CovariateDensity(family, estimates); }
};

// Maximum-likelihood fit of one arbitrarily censored sample. Wald p-values
// test location parameters against 0 and scale/shape parameters against 1.
// Throws std::invalid_argument when the sample cannot identify the family
// (fewer than 3 observations, or fewer than 2 exact/interval observations).
OneSampleFit fit_censored_sample(std::span<const CensoredValue> data, Family family,
                                 double conf_level = 0.95);

}  // namespace censreg
