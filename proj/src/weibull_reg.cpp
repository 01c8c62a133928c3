#include "censreg/weibull_reg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace censreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// log L1 over par = (mu, log sigma, alpha...): w = (log t - mu - alpha'x)/sigma,
// events add w - e^w - log sigma - log t, censored endpoints add -e^w.
double loglik_l1(const std::vector<double>& par, std::span<const double> time,
                 std::span<const int> event, const Eigen::MatrixXd& x) {
  const int n = static_cast<int>(time.size());
  const int d = static_cast<int>(x.cols());
  const double mu = par[0];
  const double log_sigma = par[1];
  const double sigma = std::exp(log_sigma);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double eta = mu;
    for (int j = 0; j < d; ++j) eta += par[2 + j] * x(i, j);
    const double logt = std::log(time[i]);
    const double w = (logt - eta) / sigma;
    const double ew = std::exp(w);
    if (event[i] == 1)
      total += w - ew - log_sigma - logt;
    else
      total += -ew;
  }
  return std::isfinite(total) ? total : -kInf;
}

ParamEstimate wald(double estimate, double variance, double null_value, double z,
                   bool with_p = true) {
  ParamEstimate e;
  e.estimate = estimate;
  e.std_error = variance >= 0.0 ? std::sqrt(variance) : kNaN;
  e.ci_low = estimate - z * e.std_error;
  e.ci_high = estimate + z * e.std_error;
  e.p_value = with_p && e.std_error > 0.0
                  ? 2.0 * normal_cdf(-std::abs((estimate - null_value) / e.std_error))
                  : kNaN;
  return e;
}

}  // namespace

AFTFit fit_weibull_l1(std::span<const double> time, std::span<const int> event,
                      const Eigen::MatrixXd& covariates, std::vector<std::string> names) {
  const int n = static_cast<int>(time.size());
  const int d = static_cast<int>(covariates.cols());
  if (static_cast<int>(event.size()) != n || (d > 0 && covariates.rows() != n))
    throw std::invalid_argument("fit_weibull_l1: inconsistent input sizes");
  const int n_events = std::accumulate(event.begin(), event.end(), 0);
  if (n_events < 1) throw std::invalid_argument("fit_weibull_l1: no events in the data");
  if (n < d + 3) throw std::invalid_argument("fit_weibull_l1: too few observations");
  for (double t : time)
    if (!(t > 0.0)) throw std::invalid_argument("fit_weibull_l1: times must be positive");

  if (names.empty())
    for (int j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));

  AFTFit fit;
  fit.covariate_names = names;
  fit.n = n;
  fit.n_events = n_events;

  std::vector<double> logt(n);
  for (int i = 0; i < n; ++i) logt[i] = std::log(time[i]);
  const double lmean = std::accumulate(logt.begin(), logt.end(), 0.0) / n;
  double lss = 0.0;
  for (double v : logt) lss += (v - lmean) * (v - lmean);
  const double lsd = std::max(std::sqrt(lss / n), 0.1);

  std::vector<double> start(2 + d, 0.0);
  start[0] = lmean;
  start[1] = std::log(lsd);

  auto objective = [&](const std::vector<double>& par) {
    return loglik_l1(par, time, event, covariates);
  };
  const std::vector<Transform> transforms(2 + d, Transform::Identity);
  OptimResult opt = maximize(objective, start, transforms);
  OptimResult polished = polish_maximum(objective, opt.argmax);

  fit.params = WeibullAFT(polished.argmax[0], polished.argmax[1],
                          std::vector<double>(polished.argmax.begin() + 2, polished.argmax.end()));
  fit.loglik = polished.value;
  fit.converged = opt.converged;

  Covariance cov = covariance_from_hessian(num_hessian(objective, polished.argmax));
  fit.covariance_ok = cov.available;
  if (cov.available) fit.covariance = cov.matrix;
  return fit;
}

AFTFit fit_weibull_l1(std::span<const SurvObservation> data, std::vector<std::string> names) {
  const int n = static_cast<int>(data.size());
  if (n == 0) throw std::invalid_argument("fit_weibull_l1: empty data");
  const int d = 1 + static_cast<int>(data[0].x_exact.size());
  std::vector<double> time(n);
  std::vector<int> event(n);
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i) {
    if (!data[i].x_cens.is_exact())
      throw std::invalid_argument("fit_weibull_l1: censored covariate present; use fit_censcov");
    time[i] = data[i].time;
    event[i] = data[i].event;
    x(i, 0) = data[i].x_cens.value();
    for (int j = 1; j < d; ++j) x(i, j) = data[i].x_exact[j - 1];
  }
  return fit_weibull_l1(time, event, x, std::move(names));
}

PHSummary convert_weibull(const AFTFit& fit, double conf_level) {
  PHSummary out;
  out.conf_level = conf_level;
  out.beta_names = fit.covariate_names;
  const double sigma = fit.params.sigma();
  const double mu = fit.params.mu;
  const std::size_t d = fit.params.alpha.size();
  const double gamma = 1.0 / sigma;
  const double lambda = std::exp(-mu / sigma);
  std::vector<double> beta(d);
  for (std::size_t j = 0; j < d; ++j) beta[j] = -fit.params.alpha[j] / sigma;

  out.inference_ok = fit.covariance_ok;
  const Eigen::Index p = static_cast<Eigen::Index>(2 + d);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
  if (fit.covariance_ok) cov = fit.covariance;

  const double z = normal_quantile(0.5 + conf_level / 2.0);
  auto delta_variance = [&](const Eigen::VectorXd& grad) {
    return static_cast<double>(grad.transpose() * cov * grad);
  };

  // gamma = exp(-log sigma)
  Eigen::VectorXd g_gamma = Eigen::VectorXd::Zero(p);
  g_gamma(1) = -1.0 / sigma;
  out.gamma = wald(gamma, delta_variance(g_gamma), 0.0, z, false);

  // lambda = exp(-mu/sigma)
  Eigen::VectorXd g_lambda = Eigen::VectorXd::Zero(p);
  g_lambda(0) = -lambda / sigma;
  g_lambda(1) = lambda * mu / sigma;
  out.lambda = wald(lambda, delta_variance(g_lambda), 0.0, z, false);

  for (std::size_t j = 0; j < d; ++j) {
    Eigen::VectorXd g_beta = Eigen::VectorXd::Zero(p);
    g_beta(1) = fit.params.alpha[j] / sigma;
    g_beta(2 + static_cast<Eigen::Index>(j)) = -1.0 / sigma;
    ParamEstimate b = wald(beta[j], delta_variance(g_beta), 0.0, z);
    out.beta.push_back(b);

    ParamEstimate hr;
    hr.estimate = std::exp(b.estimate);
    hr.std_error = hr.estimate * b.std_error;
    hr.ci_low = std::exp(b.ci_low);
    hr.ci_high = std::exp(b.ci_high);
    hr.p_value = b.p_value;
    out.hazard_ratio.push_back(hr);

    const double alpha_j = fit.params.alpha[j];
    const double var_alpha = fit.covariance_ok ? cov(2 + j, 2 + j) : 0.0;
    ParamEstimate a = wald(alpha_j, var_alpha, 0.0, z);
    ParamEstimate etr;
    etr.estimate = std::exp(alpha_j);
    etr.std_error = etr.estimate * a.std_error;
    etr.ci_low = std::exp(a.ci_low);
    etr.ci_high = std::exp(a.ci_high);
    etr.p_value = a.p_value;
    out.event_time_ratio.push_back(etr);
  }
  return out;
}

}  // namespace censreg
