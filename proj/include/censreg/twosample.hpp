#pragma once

#include "censreg/onesample.hpp"

namespace censreg {

struct ParamEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_value = 0.0;
};

// Mean difference of two independent censored Normal samples with unequal
// variances. delta = mu1 - mu2; SE(delta) combines the two fits by independence.
struct MeanDiffFit {
  ParamEstimate mu1, mu2, sigma1, sigma2, delta;
  OneSampleFit fit1, fit2;
  double conf_level = 0.95;
};

MeanDiffFit normal_mean_diff(std::span<const CensoredValue> sample1,
                             std::span<const CensoredValue> sample2,
                             double conf_level = 0.95);

}  // namespace censreg
