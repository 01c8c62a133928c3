#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace censreg {

// Cox proportional hazards via Newton-Raphson on the Breslow partial
// log-likelihood. Used as the comparison method in the simulation study.
struct CoxFit {
  std::vector<double> beta;
  std::vector<std::string> names;
  std::vector<double> std_errors;
  std::vector<double> p_values;
  double partial_loglik = 0.0;
  bool converged = false;
  bool covariance_ok = false;
  int iterations = 0;
  int n_events = 0;
};

CoxFit fit_cox(std::span<const double> time, std::span<const int> event,
               const Eigen::MatrixXd& covariates, std::vector<std::string> names = {});

}  // namespace censreg
