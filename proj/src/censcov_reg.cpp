#include "censreg/censcov_reg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace censreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int covariate_dim(std::span<const SurvObservation> data) {
  const std::size_t d_exact = data[0].x_exact.size();
  for (const auto& obs : data)
    if (obs.x_exact.size() != d_exact)
      throw std::invalid_argument("fit_censcov: inconsistent covariate dimensions");
  return 1 + static_cast<int>(d_exact);
}

}  // namespace

double loglik_l2(const WeibullPH& baseline, std::span<const double> beta,
                 std::span<const SurvObservation> data, const CovariateDensity& density,
                 const IntegrationSettings& settings) {
  const double log_lambda = std::log(baseline.lambda);
  const double log_gamma = std::log(baseline.gamma);
  const double gamma = baseline.gamma;
  const double beta1 = beta[0];

  double total = 0.0;
  for (const SurvObservation& obs : data) {
    double eta_rest = 0.0;
    for (std::size_t j = 0; j < obs.x_exact.size(); ++j)
      eta_rest += beta[1 + j] * obs.x_exact[j];

    const double logt = std::log(obs.time);
    const double t_pow = std::pow(obs.time, gamma);
    // log f = A + eta, log S = -lambda t^gamma e^eta with A collecting the
    // covariate-free part of the log hazard.
    const double a = log_lambda + log_gamma + (gamma - 1.0) * logt;

    if (obs.x_cens.is_exact()) {
      const double x = obs.x_cens.value();
      if (!density.in_support(x)) return -kInf;
      const double eta = beta1 * x + eta_rest;
      const double cum_hazard = baseline.lambda * t_pow * std::exp(eta);
      double term = -cum_hazard + density.log_pdf(x);
      if (obs.event == 1) term += a + eta;
      total += term;
    } else {
      const double base_hazard = baseline.lambda * t_pow * std::exp(eta_rest);
      const int event = obs.event;
      auto integrand = [&](double x) {
        if (!density.in_support(x)) return 0.0;
        const double ebx = std::exp(beta1 * x);
        double lg = -base_hazard * ebx + density.log_pdf(x);
        if (event == 1) lg += a + eta_rest + beta1 * x;
        return std::exp(lg);
      };
      const IntegralResult r =
          integrate_censored_region(integrand, obs.x_cens, settings, density.support_lower());
      if (!(r.value > 0.0)) return -kInf;
      total += std::log(r.value);
    }
    if (!std::isfinite(total)) return -kInf;
  }
  return total;
}

CensCovFit fit_censcov(std::span<const SurvObservation> data, const CovariateDensity& density,
                       std::optional<std::vector<double>> initial,
                       const IntegrationSettings& settings, double conf_level,
                       const std::string& cens_name, std::vector<std::string> exact_names) {
  if (data.empty()) throw std::invalid_argument("fit_censcov: empty data");
  const int n = static_cast<int>(data.size());
  const int d = covariate_dim(data);

  CensCovFit fit;
  fit.n = n;
  fit.conf_level = conf_level;
  fit.beta_names.push_back(cens_name);
  if (exact_names.empty())
    for (int j = 1; j < d; ++j) fit.beta_names.push_back("x" + std::to_string(j + 1));
  else
    fit.beta_names.insert(fit.beta_names.end(), exact_names.begin(), exact_names.end());
  if (static_cast<int>(fit.beta_names.size()) != d)
    throw std::invalid_argument("fit_censcov: covariate name count mismatch");

  for (const auto& obs : data) {
    fit.n_events += obs.event;
    if (!obs.x_cens.is_exact()) ++fit.n_cens_cov;
  }
  if (fit.n_events < 1) throw std::invalid_argument("fit_censcov: no events in the data");
  if (fit.n_cens_cov == n)
    fit.warnings.push_back(
        "no exactly observed covariate values; the covariate effect is weakly identified");

  std::vector<double> start;
  if (initial) {
    if (static_cast<int>(initial->size()) != 2 + d)
      throw std::invalid_argument("fit_censcov: initial vector must be (lambda, gamma, beta...)");
    start = *initial;
    if (!(start[0] > 0.0) || !(start[1] > 0.0))
      throw std::invalid_argument("fit_censcov: initial lambda and gamma must be positive");
  } else {
    // L1 on imputed data, converted to the hazard parametrization.
    std::vector<double> time(n);
    std::vector<int> event(n);
    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i) {
      time[i] = data[i].time;
      event[i] = data[i].event;
      x(i, 0) = data[i].x_cens.finite_bound();
      for (int j = 1; j < d; ++j) x(i, j) = data[i].x_exact[j - 1];
    }
    const AFTFit l1 = fit_weibull_l1(time, event, x);
    const auto [ph, beta] = aft_to_ph(l1.params);
    start = {ph.lambda, ph.gamma};
    start.insert(start.end(), beta.begin(), beta.end());
  }

  auto objective = [&](const std::vector<double>& par) {
    if (!(par[0] > 0.0) || !(par[1] > 0.0)) return -kInf;
    return loglik_l2(WeibullPH(par[0], par[1]),
                     std::span<const double>(par.data() + 2, static_cast<std::size_t>(d)), data,
                     density, settings);
  };

  std::vector<Transform> transforms = {Transform::Log, Transform::Log};
  transforms.insert(transforms.end(), d, Transform::Identity);
  OptimResult opt = maximize(objective, start, transforms);

  auto transformed = [&](const std::vector<double>& xt) {
    std::vector<double> par = xt;
    par[0] = std::exp(xt[0]);
    par[1] = std::exp(xt[1]);
    return objective(par);
  };
  std::vector<double> xt = opt.argmax;
  xt[0] = std::log(opt.argmax[0]);
  xt[1] = std::log(opt.argmax[1]);
  OptimResult polished = polish_maximum(transformed, xt, HessianSettings{4, 1e-3});

  fit.lambda = std::exp(polished.argmax[0]);
  fit.gamma = std::exp(polished.argmax[1]);
  fit.beta.assign(polished.argmax.begin() + 2, polished.argmax.end());
  fit.loglik = polished.value;
  fit.aic = -2.0 * fit.loglik + 2.0 * (2.0 + d);
  fit.converged = opt.converged;

  // Observed Fisher information on the natural scale, with the quadrature
  // tightened so difference quotients are not polluted by integration error.
  IntegrationSettings tight = settings;
  tight.rel_tol = std::min(settings.rel_tol, 1e-10);
  tight.abs_tol = std::min(settings.abs_tol, 1e-14);
  auto objective_tight = [&](const std::vector<double>& par) {
    if (!(par[0] > 0.0) || !(par[1] > 0.0)) return -kInf;
    return loglik_l2(WeibullPH(par[0], par[1]),
                     std::span<const double>(par.data() + 2, static_cast<std::size_t>(d)), data,
                     density, tight);
  };
  std::vector<double> natural = {fit.lambda, fit.gamma};
  natural.insert(natural.end(), fit.beta.begin(), fit.beta.end());
  const Eigen::MatrixXd hess = num_hessian(objective_tight, natural, HessianSettings{4, 1e-3});
  Covariance cov = covariance_from_hessian(hess);
  fit.covariance_ok = cov.available;

  const int p = 2 + d;
  fit.std_errors.assign(p, kNaN);
  fit.ci_low.assign(p, kNaN);
  fit.ci_high.assign(p, kNaN);
  fit.p_values.assign(p, kNaN);
  if (cov.available) {
    fit.covariance = cov.matrix;
    const double z = normal_quantile(0.5 + conf_level / 2.0);
    for (int i = 0; i < p; ++i) {
      fit.std_errors[i] = std::sqrt(cov.matrix(i, i));
      const double est = i == 0 ? fit.lambda : (i == 1 ? fit.gamma : fit.beta[i - 2]);
      fit.ci_low[i] = est - z * fit.std_errors[i];
      fit.ci_high[i] = est + z * fit.std_errors[i];
      if (i >= 2)
        fit.p_values[i] = 2.0 * normal_cdf(-std::abs(est / fit.std_errors[i]));
    }
  } else {
    fit.warnings.push_back("observed information not positive definite; inference unavailable");
  }
  return fit;
}

}  // namespace censreg
