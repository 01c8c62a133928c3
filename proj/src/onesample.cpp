#include "censreg/onesample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace censreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Moment starting values from data with censored observations replaced by
// their finite bound (interval: midpoint).
std::vector<double> initial_params(const std::vector<double>& proxy, Family family) {
  const double n = static_cast<double>(proxy.size());
  const double mean = std::accumulate(proxy.begin(), proxy.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : proxy) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / n);
  if (!(sd > 0.0)) sd = 0.1 * (1.0 + std::abs(mean));

  switch (family) {
    case Family::Normal:
      return {mean, sd};
    case Family::Logistic:
      return {mean, sd * std::sqrt(3.0) / 3.14159265358979323846};
    case Family::Gamma: {
      if (mean <= 0.0)
        throw std::invalid_argument("gamma fit requires positive data");
      const double var = sd * sd;
      return {std::max(mean * mean / var, 1e-3), std::max(mean / var, 1e-6)};
    }
    case Family::Weibull: {
      if (*std::min_element(proxy.begin(), proxy.end()) <= 0.0)
        throw std::invalid_argument("weibull fit requires positive data");
      std::vector<double> logs(proxy.size());
      std::transform(proxy.begin(), proxy.end(), logs.begin(),
                     [](double v) { return std::log(v); });
      const double lmean = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
      double lss = 0.0;
      for (double v : logs) lss += (v - lmean) * (v - lmean);
      double lsd = std::sqrt(lss / n);
      if (!(lsd > 0.0)) lsd = 0.1;
      const double shape = 3.14159265358979323846 / (std::sqrt(6.0) * lsd);
      const double scale = std::exp(lmean + 0.5772156649 / shape);
      return {shape, scale};
    }
  }
  return {};
}

std::vector<Transform> family_transforms(Family family) {
  switch (family) {
    case Family::Normal:
    case Family::Logistic:
      return {Transform::Identity, Transform::Log};
    case Family::Gamma:
    case Family::Weibull:
      return {Transform::Log, Transform::Log};
  }
  return {};
}

// Null value per parameter for the Wald test: 0 for location, 1 for scale/shape.
std::vector<double> null_values(Family family) {
  switch (family) {
    case Family::Normal:
    case Family::Logistic:
      return {0.0, 1.0};
    case Family::Gamma:
    case Family::Weibull:
      return {1.0, 1.0};
  }
  return {};
}

}  // namespace

OneSampleFit fit_censored_sample(std::span<const CensoredValue> data, Family family,
                                 double conf_level) {
  OneSampleFit fit;
  fit.family = family;
  fit.conf_level = conf_level;
  fit.param_names = CovariateDensity::param_names(family);

  for (const CensoredValue& v : data) {
    switch (v.kind()) {
      case CensoredValue::Kind::Exact: ++fit.n_exact; break;
      case CensoredValue::Kind::Left: ++fit.n_left; break;
      case CensoredValue::Kind::Right: ++fit.n_right; break;
      case CensoredValue::Kind::Interval: ++fit.n_interval; break;
    }
  }
  if (fit.n() < 3)
    throw std::invalid_argument("fit_censored_sample: need at least 3 observations");
  if (fit.n_exact + fit.n_interval < 2)
    throw std::invalid_argument(
        "fit_censored_sample: non-identifiable sample, need at least 2 exact or "
        "interval observations");

  std::vector<double> proxy;
  proxy.reserve(data.size());
  for (const CensoredValue& v : data) proxy.push_back(v.finite_bound());
  const std::vector<double> start = initial_params(proxy, family);
  const std::vector<Transform> transforms = family_transforms(family);

  auto loglik = [&data, family](const std::vector<double>& params) {
    CovariateDensity d(family, params);
    double total = 0.0;
    for (const CensoredValue& v : data) {
      const double term = loglik_contribution(v, d);
      if (term == -kInf) return -kInf;
      total += term;
    }
    return total;
  };

  OptimResult opt = maximize(loglik, start, transforms);

  // Newton polish on the transformed scale.
  auto transformed = [&](const std::vector<double>& xt) {
    std::vector<double> nat(xt.size());
    for (std::size_t i = 0; i < xt.size(); ++i)
      nat[i] = transforms[i] == Transform::Log ? std::exp(xt[i]) : xt[i];
    return loglik(nat);
  };
  std::vector<double> xt(opt.argmax.size());
  for (std::size_t i = 0; i < xt.size(); ++i)
    xt[i] = transforms[i] == Transform::Log ? std::log(opt.argmax[i]) : opt.argmax[i];
  OptimResult polished = polish_maximum(transformed, xt);
  for (std::size_t i = 0; i < xt.size(); ++i)
    fit.estimates.push_back(transforms[i] == Transform::Log ? std::exp(polished.argmax[i])
                                                            : polished.argmax[i]);
  fit.loglik = polished.value;
  fit.converged = opt.converged;

  const Eigen::MatrixXd hess = num_hessian(loglik, fit.estimates);
  Covariance cov = covariance_from_hessian(hess);
  fit.covariance_ok = cov.available;
  const std::size_t p = fit.estimates.size();
  fit.std_errors.assign(p, std::numeric_limits<double>::quiet_NaN());
  fit.ci_low = fit.std_errors;
  fit.ci_high = fit.std_errors;
  fit.p_values = fit.std_errors;
  if (cov.available) {
    fit.covariance = cov.matrix;
    const double z = normal_quantile(0.5 + conf_level / 2.0);
    const std::vector<double> nulls = null_values(family);
    for (std::size_t i = 0; i < p; ++i) {
      fit.std_errors[i] = std::sqrt(cov.matrix(i, i));
      fit.ci_low[i] = fit.estimates[i] - z * fit.std_errors[i];
      fit.ci_high[i] = fit.estimates[i] + z * fit.std_errors[i];
      const double wald = (fit.estimates[i] - nulls[i]) / fit.std_errors[i];
      fit.p_values[i] = 2.0 * normal_cdf(-std::abs(wald));
    }
  }
  return fit;
}

}  // namespace censreg
