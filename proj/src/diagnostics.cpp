#include "censreg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace censreg {

namespace {

KMCurve km_one_stratum(std::vector<std::pair<double, int>> rows, const std::string& label) {
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  KMCurve curve;
  curve.stratum = label;
  const int n = static_cast<int>(rows.size());
  double surv = 1.0;
  int i = 0;
  while (i < n) {
    const double t = rows[i].first;
    int deaths = 0;
    int j = i;
    while (j < n && rows[j].first == t) {
      deaths += rows[j].second;
      ++j;
    }
    if (deaths > 0) {
      const int at_risk = n - i;
      surv *= 1.0 - static_cast<double>(deaths) / at_risk;
      curve.event_times.push_back(t);
      curve.survival.push_back(surv);
      curve.at_risk.push_back(at_risk);
      curve.n_events.push_back(deaths);
    }
    i = j;
  }
  return curve;
}

}  // namespace

std::vector<KMCurve> kaplan_meier(std::span<const double> time, std::span<const int> event,
                                  std::span<const std::string> stratum) {
  const std::size_t n = time.size();
  if (event.size() != n || stratum.size() != n)
    throw std::invalid_argument("kaplan_meier: inconsistent input sizes");
  for (double t : time)
    if (!(t > 0.0)) throw std::invalid_argument("kaplan_meier: times must be positive");

  std::map<std::string, std::vector<std::pair<double, int>>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[stratum[i]].emplace_back(time[i], event[i]);

  std::vector<KMCurve> curves;
  curves.reserve(groups.size());
  for (auto& [label, rows] : groups) curves.push_back(km_one_stratum(std::move(rows), label));
  return curves;
}

DiagSeries diag_from_survival(std::span<const double> time, std::span<const double> survival,
                              const std::string& stratum) {
  if (time.size() != survival.size())
    throw std::invalid_argument("diag_from_survival: inconsistent input sizes");
  DiagSeries series;
  series.stratum = stratum;
  for (std::size_t i = 0; i < time.size(); ++i) {
    const double s = survival[i];
    if (!(s > 0.0) || !(s < 1.0)) continue;  // transform undefined at 0 and 1
    series.log_time.push_back(std::log(time[i]));
    series.loglog_survival.push_back(std::log(-std::log(s)));
  }
  const std::size_t m = series.log_time.size();
  if (m < 2)
    throw std::invalid_argument("diag_from_survival: fewer than 2 usable points in stratum '" +
                                stratum + "'");
  const double xm = std::accumulate(series.log_time.begin(), series.log_time.end(), 0.0) / m;
  const double ym =
      std::accumulate(series.loglog_survival.begin(), series.loglog_survival.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = series.log_time[i] - xm;
    sxx += dx * dx;
    sxy += dx * (series.loglog_survival[i] - ym);
  }
  if (!(sxx > 0.0))
    throw std::invalid_argument("diag_from_survival: degenerate time points in stratum '" +
                                stratum + "'");
  series.slope = sxy / sxx;
  series.intercept = ym - series.slope * xm;
  return series;
}

DiagResult weibull_diag(std::span<const double> time, std::span<const int> event,
                        std::span<const std::string> stratum) {
  DiagResult out;
  for (const KMCurve& curve : kaplan_meier(time, event, stratum)) {
    try {
      out.series.push_back(diag_from_survival(curve.event_times, curve.survival, curve.stratum));
    } catch (const std::invalid_argument& err) {
      out.warnings.push_back(std::string("stratum skipped: ") + err.what());
    }
  }
  return out;
}

}  // namespace censreg
