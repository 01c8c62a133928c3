#pragma once

#include <span>
#include <string>
#include <vector>

namespace censreg {

// Product-limit estimate for one stratum. survival[k] is the value just after
// the drop at event_times[k]; at_risk[k] counts subjects with time >= that
// event time (censored subjects tied with an event time are still at risk).
struct KMCurve {
  std::string stratum;
  std::vector<double> event_times;
  std::vector<double> survival;
  std::vector<int> at_risk;
  std::vector<int> n_events;
};

std::vector<KMCurve> kaplan_meier(std::span<const double> time, std::span<const int> event,
                                  std::span<const std::string> stratum);

// Weibull adequacy check: log(-log S(t)) against log t is linear with slope
// gamma and intercept log lambda under the hazard parametrization.
struct DiagSeries {
  std::string stratum;
  std::vector<double> log_time;
  std::vector<double> loglog_survival;
  double slope = 0.0;
  double intercept = 0.0;
};

struct DiagResult {
  std::vector<DiagSeries> series;
  std::vector<std::string> warnings;
};

// Transform + least squares on given survival points; only points with
// 0 < S < 1 enter. Throws when fewer than 2 usable points remain.
DiagSeries diag_from_survival(std::span<const double> time, std::span<const double> survival,
                              const std::string& stratum);

// Kaplan-Meier per stratum, then the diagnostic transform. Strata with fewer
// than 2 usable points are skipped with a warning.
DiagResult weibull_diag(std::span<const double> time, std::span<const int> event,
                        std::span<const std::string> stratum);

}  // namespace censreg
