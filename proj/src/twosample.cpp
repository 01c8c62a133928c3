#include "censreg/twosample.hpp"

#include <cmath>

namespace censreg {

namespace {

ParamEstimate from_fit(const OneSampleFit& fit, std::size_t index) {
  ParamEstimate e;
  e.estimate = fit.estimates[index];
  e.std_error = fit.std_errors[index];
  e.ci_low = fit.ci_low[index];
  e.ci_high = fit.ci_high[index];
  e.p_value = fit.p_values[index];
  return e;
}

}  // namespace

MeanDiffFit normal_mean_diff(std::span<const CensoredValue> sample1,
                             std::span<const CensoredValue> sample2, double conf_level) {
  MeanDiffFit out;
  out.conf_level = conf_level;
  out.fit1 = fit_censored_sample(sample1, Family::Normal, conf_level);
  out.fit2 = fit_censored_sample(sample2, Family::Normal, conf_level);
  out.mu1 = from_fit(out.fit1, 0);
  out.sigma1 = from_fit(out.fit1, 1);
  out.mu2 = from_fit(out.fit2, 0);
  out.sigma2 = from_fit(out.fit2, 1);

  out.delta.estimate = out.mu1.estimate - out.mu2.estimate;
  out.delta.std_error =
      std::sqrt(out.mu1.std_error * out.mu1.std_error + out.mu2.std_error * out.mu2.std_error);
  const double z = normal_quantile(0.5 + conf_level / 2.0);
  out.delta.ci_low = out.delta.estimate - z * out.delta.std_error;
  out.delta.ci_high = out.delta.estimate + z * out.delta.std_error;
  out.delta.p_value = 2.0 * normal_cdf(-std::abs(out.delta.estimate / out.delta.std_error));
  return out;
}

}  // namespace censreg
