#pragma once

#include "censreg/censoring.hpp"

#include <stdexcept>
#include <vector>

namespace censreg {

// One subject: follow-up time, event indicator, fully observed covariates,
// and the one possibly-censored covariate.
struct SurvObservation {
  double time;
  int event;  // 1 = event, 0 = right-censored endpoint
  std::vector<double> x_exact;
  CensoredValue x_cens;

  SurvObservation(double time_, int event_, std::vector<double> x_exact_, CensoredValue x_cens_)
      : time(time_), event(event_), x_exact(std::move(x_exact_)), x_cens(x_cens_) {
    if (!(time > 0.0)) throw std::invalid_argument("SurvObservation: time must be positive");
    if (event != 0 && event != 1)
      throw std::invalid_argument("SurvObservation: event must be 0 or 1");
  }
};

}  // namespace censreg
