#include "censreg/report.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace censreg {

using nlohmann::ordered_json;

namespace {

ordered_json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

ordered_json estimate_json(const ParamEstimate& e) {
  return ordered_json{{"estimate", e.estimate},
                      {"std_error", number_or_null(e.std_error)},
                      {"ci_low", number_or_null(e.ci_low)},
                      {"ci_high", number_or_null(e.ci_high)},
                      {"p_value", number_or_null(e.p_value)}};
}

CoefRow row_from(const std::string& name, const ParamEstimate& e) {
  return CoefRow{name, e.estimate, e.std_error, e.ci_low, e.ci_high, e.p_value};
}

}  // namespace

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

ordered_json envelope_json(const ReportEnvelope& envelope) {
  return ordered_json{{"command", envelope.command},
                      {"input_digest", envelope.input_digest},
                      {"version", kVersion},
                      {"warnings", envelope.warnings},
                      {"fit", envelope.payload}};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.5g", v);
  return buffer;
}

std::string format_p_value(double p) {
  if (std::isnan(p)) return "NA";
  if (p < 2e-16) return "<2e-16";
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.3g", p);
  return buffer;
}

std::string format_coef_table(const std::vector<CoefRow>& rows) {
  const std::vector<std::string> headers = {"Estimate", "Std. Error", "CI.low", "CI.up",
                                            "p-value"};
  std::size_t name_width = 0;
  std::vector<std::vector<std::string>> cells;
  for (const CoefRow& row : rows) {
    name_width = std::max(name_width, row.name.size());
    cells.push_back({format_number(row.estimate), format_number(row.std_error),
                     format_number(row.ci_low), format_number(row.ci_high),
                     format_p_value(row.p_value)});
  }
  std::vector<std::size_t> widths;
  for (std::size_t c = 0; c < headers.size(); ++c) {
    std::size_t w = headers[c].size();
    for (const auto& row : cells) w = std::max(w, row[c].size());
    widths.push_back(w);
  }
  std::ostringstream out;
  out << std::string(name_width, ' ');
  for (std::size_t c = 0; c < headers.size(); ++c)
    out << " " << std::setw(static_cast<int>(widths[c])) << headers[c];
  out << "\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << std::left << std::setw(static_cast<int>(name_width)) << rows[r].name << std::right;
    for (std::size_t c = 0; c < headers.size(); ++c)
      out << " " << std::setw(static_cast<int>(widths[c])) << cells[r][c];
    out << "\n";
  }
  return out.str();
}

ordered_json to_json(const OneSampleFit& fit) {
  ordered_json params = ordered_json::array();
  for (std::size_t i = 0; i < fit.estimates.size(); ++i) {
    params.push_back(ordered_json{{"name", fit.param_names[i]},
                                  {"estimate", fit.estimates[i]},
                                  {"std_error", number_or_null(fit.std_errors[i])},
                                  {"ci_low", number_or_null(fit.ci_low[i])},
                                  {"ci_high", number_or_null(fit.ci_high[i])},
                                  {"p_value", number_or_null(fit.p_values[i])}});
  }
  return ordered_json{{"family", family_name(fit.family)},
                      {"parameters", params},
                      {"loglik", fit.loglik},
                      {"n_exact", fit.n_exact},
                      {"n_left", fit.n_left},
                      {"n_right", fit.n_right},
                      {"n_interval", fit.n_interval},
                      {"converged", fit.converged},
                      {"covariance_ok", fit.covariance_ok},
                      {"conf_level", fit.conf_level}};
}

std::vector<CoefRow> coef_rows(const OneSampleFit& fit) {
  std::vector<CoefRow> rows;
  for (std::size_t i = 0; i < fit.estimates.size(); ++i)
    rows.push_back(CoefRow{fit.param_names[i], fit.estimates[i], fit.std_errors[i], fit.ci_low[i],
                           fit.ci_high[i], fit.p_values[i]});
  return rows;
}

ordered_json to_json(const MeanDiffFit& fit) {
  return ordered_json{{"mu1", estimate_json(fit.mu1)},       {"mu2", estimate_json(fit.mu2)},
                      {"sigma1", estimate_json(fit.sigma1)}, {"sigma2", estimate_json(fit.sigma2)},
                      {"delta", estimate_json(fit.delta)},   {"loglik1", fit.fit1.loglik},
                      {"loglik2", fit.fit2.loglik},          {"conf_level", fit.conf_level}};
}

std::vector<CoefRow> coef_rows(const MeanDiffFit& fit) {
  return {row_from("mu1", fit.mu1), row_from("mu2", fit.mu2), row_from("sigma1", fit.sigma1),
          row_from("sigma2", fit.sigma2), row_from("delta", fit.delta)};
}

ordered_json to_json(const AFTFit& fit, const PHSummary& ph) {
  ordered_json aft{{"mu", fit.params.mu},
                   {"log_sigma", fit.params.log_sigma},
                   {"sigma", fit.params.sigma()},
                   {"alpha", fit.params.alpha},
                   {"covariate_names", fit.covariate_names},
                   {"loglik", fit.loglik},
                   {"n", fit.n},
                   {"n_events", fit.n_events},
                   {"converged", fit.converged},
                   {"covariance_ok", fit.covariance_ok}};
  ordered_json betas = ordered_json::array();
  for (std::size_t j = 0; j < ph.beta.size(); ++j) {
    betas.push_back(ordered_json{{"name", ph.beta_names[j]},
                                 {"beta", estimate_json(ph.beta[j])},
                                 {"hazard_ratio", estimate_json(ph.hazard_ratio[j])},
                                 {"event_time_ratio", estimate_json(ph.event_time_ratio[j])}});
  }
  ordered_json converted{{"lambda", estimate_json(ph.lambda)},
                         {"gamma", estimate_json(ph.gamma)},
                         {"covariates", betas},
                         {"inference_ok", ph.inference_ok},
                         {"conf_level", ph.conf_level}};
  return ordered_json{{"aft", aft}, {"ph", converted}};
}

ordered_json to_json(const CensCovFit& fit) {
  ordered_json coef = ordered_json::array();
  std::vector<std::string> names = {"lambda", "gamma"};
  names.insert(names.end(), fit.beta_names.begin(), fit.beta_names.end());
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double est = i == 0 ? fit.lambda : (i == 1 ? fit.gamma : fit.beta[i - 2]);
    coef.push_back(ordered_json{{"name", names[i]},
                                {"estimate", est},
                                {"std_error", number_or_null(fit.std_errors[i])},
                                {"ci_low", number_or_null(fit.ci_low[i])},
                                {"ci_high", number_or_null(fit.ci_high[i])},
                                {"p_value", number_or_null(fit.p_values[i])}});
  }
  return ordered_json{{"coefficients", coef},
                      {"loglik", fit.loglik},
                      {"aic", fit.aic},
                      {"n", fit.n},
                      {"n_cens_cov", fit.n_cens_cov},
                      {"n_events", fit.n_events},
                      {"converged", fit.converged},
                      {"covariance_ok", fit.covariance_ok},
                      {"warnings", fit.warnings},
                      {"conf_level", fit.conf_level}};
}

std::vector<CoefRow> coef_rows(const CensCovFit& fit, bool exact_covariates_first) {
  std::vector<CoefRow> rows;
  rows.push_back(
      CoefRow{"lambda", fit.lambda, fit.std_errors[0], fit.ci_low[0], fit.ci_high[0],
              fit.p_values[0]});
  rows.push_back(CoefRow{"gamma", fit.gamma, fit.std_errors[1], fit.ci_low[1], fit.ci_high[1],
                         fit.p_values[1]});
  std::vector<std::size_t> order;
  if (exact_covariates_first) {
    for (std::size_t j = 1; j < fit.beta.size(); ++j) order.push_back(j);
    order.push_back(0);
  } else {
    for (std::size_t j = 0; j < fit.beta.size(); ++j) order.push_back(j);
  }
  for (std::size_t j : order)
    rows.push_back(CoefRow{fit.beta_names[j], fit.beta[j], fit.std_errors[2 + j],
                           fit.ci_low[2 + j], fit.ci_high[2 + j], fit.p_values[2 + j]});
  return rows;
}

std::string format_table(const CensCovFit& fit, bool exact_covariates_first) {
  std::ostringstream out;
  out << "Coefficients:\n"
      << format_coef_table(coef_rows(fit, exact_covariates_first)) << "\nAIC: ";
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.1f", fit.aic);
  out << buffer << "\n";
  return out.str();
}

ordered_json to_json(const CoxFit& fit) {
  ordered_json coef = ordered_json::array();
  for (std::size_t j = 0; j < fit.beta.size(); ++j) {
    const double se = fit.std_errors[j];
    coef.push_back(ordered_json{{"name", fit.names[j]},
                                {"estimate", fit.beta[j]},
                                {"std_error", std::isinf(se) ? ordered_json("inf")
                                                             : ordered_json(se)},
                                {"p_value", number_or_null(fit.p_values[j])}});
  }
  return ordered_json{{"coefficients", coef},
                      {"partial_loglik", fit.partial_loglik},
                      {"n_events", fit.n_events},
                      {"iterations", fit.iterations},
                      {"converged", fit.converged},
                      {"covariance_ok", fit.covariance_ok}};
}

std::vector<CoefRow> coef_rows(const CoxFit& fit) {
  std::vector<CoefRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < fit.beta.size(); ++j)
    rows.push_back(
        CoefRow{fit.names[j], fit.beta[j], fit.std_errors[j], nan, nan, fit.p_values[j]});
  return rows;
}

ordered_json to_json(const DiagResult& diag) {
  ordered_json series = ordered_json::array();
  for (const DiagSeries& s : diag.series) {
    series.push_back(ordered_json{{"stratum", s.stratum},
                                  {"log_time", s.log_time},
                                  {"loglog_survival", s.loglog_survival},
                                  {"slope", s.slope},
                                  {"intercept", s.intercept}});
  }
  return ordered_json{{"series", series}, {"warnings", diag.warnings}};
}

std::string diag_csv(const DiagResult& diag) {
  std::ostringstream out;
  out << "stratum,log_time,loglog_surv,fitted\n";
  char buffer[64];
  for (const DiagSeries& s : diag.series) {
    for (std::size_t i = 0; i < s.log_time.size(); ++i) {
      out << s.stratum;
      std::snprintf(buffer, sizeof(buffer), ",%.17g", s.log_time[i]);
      out << buffer;
      std::snprintf(buffer, sizeof(buffer), ",%.17g", s.loglog_survival[i]);
      out << buffer;
      std::snprintf(buffer, sizeof(buffer), ",%.17g", s.intercept + s.slope * s.log_time[i]);
      out << buffer << "\n";
    }
  }
  return out.str();
}

std::string diag_svg(const DiagResult& diag) {
  // Minimal scatter + fitted-line plot; one color per stratum.
  const int width = 640, height = 480, margin = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const DiagSeries& s : diag.series) {
    for (double v : s.log_time) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    for (double v : s.loglog_survival) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
  }
  if (!(xmax > xmin)) { xmin -= 1.0; xmax += 1.0; }
  if (!(ymax > ymin)) { ymin -= 1.0; ymax += 1.0; }
  auto sx = [&](double x) {
    return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
  };
  auto sy = [&](double y) {
    return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
  };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  int k = 0;
  for (const DiagSeries& s : diag.series) {
    const char* color = colors[k % 6];
    for (std::size_t i = 0; i < s.log_time.size(); ++i)
      out << "<circle cx=\"" << sx(s.log_time[i]) << "\" cy=\"" << sy(s.loglog_survival[i])
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    out << "<line x1=\"" << sx(xmin) << "\" y1=\"" << sy(s.intercept + s.slope * xmin)
        << "\" x2=\"" << sx(xmax) << "\" y2=\"" << sy(s.intercept + s.slope * xmax)
        << "\" stroke=\"" << color << "\"/>\n";
    out << "<text x=\"" << margin + 8 << "\" y=\"" << margin + 16 * (k + 1) << "\" fill=\""
        << color << "\">" << s.stratum << "</text>\n";
    ++k;
  }
  out << "</svg>\n";
  return out.str();
}

ordered_json to_json(const SimReport& report) {
  const SimConfig& c = report.config;
  ordered_json config{{"mu_r", c.mu_r},
                      {"sigma_r", c.sigma_r},
                      {"mu_o", c.mu_o},
                      {"sigma_o", c.sigma_o},
                      {"lambda", c.lambda},
                      {"gamma", c.gamma},
                      {"beta_tmt", c.beta_tmt},
                      {"beta_mrd", c.beta_mrd},
                      {"cens_prop_r", c.cens_prop_r},
                      {"cens_prop_o", c.cens_prop_o},
                      {"n_per_arm", c.n_per_arm},
                      {"horizon", c.horizon},
                      {"replications", c.replications},
                      {"seed", c.seed}};
  ordered_json methods = ordered_json::array();
  for (const MethodReport& m : report.methods) {
    ordered_json params = ordered_json::array();
    for (const ParamStats& p : m.params) {
      params.push_back(ordered_json{{"name", p.name},
                                    {"true_value", p.true_value},
                                    {"mean_estimate", number_or_null(p.mean_estimate)},
                                    {"bias", number_or_null(p.bias)},
                                    {"mse", number_or_null(p.mse)},
                                    {"empirical_se", number_or_null(p.empirical_se)}});
    }
    methods.push_back(ordered_json{{"method", m.method},
                                   {"parameters", params},
                                   {"rejection_rate_tmt", number_or_null(m.rejection_rate_tmt)},
                                   {"n_converged", m.n_converged},
                                   {"n_failed", m.n_failed}});
  }
  return ordered_json{{"config", config}, {"methods", methods}};
}

std::string format_table(const SimReport& report) {
  const std::vector<std::string> parameter_order = {"lambda", "gamma", "beta_tmt", "beta_mrd"};
  auto find_param = [](const MethodReport& m, const std::string& name) -> const ParamStats* {
    for (const ParamStats& p : m.params)
      if (p.name == name) return &p;
    return nullptr;
  };

  std::ostringstream out;
  auto emit = [&](const std::string& title, auto field) {
    out << title << "\n";
    out << std::left << std::setw(14) << "method" << std::right;
    for (const auto& name : parameter_order) out << std::setw(12) << name;
    out << "\n";
    for (const MethodReport& m : report.methods) {
      out << std::left << std::setw(14) << m.method << std::right;
      for (const auto& name : parameter_order) {
        const ParamStats* p = find_param(m, name);
        out << std::setw(12) << (p ? format_number(field(*p)) : "");
      }
      out << "\n";
    }
    out << "\n";
  };
  out << "Simulation study: " << report.config.replications << " replications, n = "
      << report.config.n_per_arm << " per arm, seed = " << report.config.seed << "\n\n";
  emit("Bias", [](const ParamStats& p) { return p.bias; });
  emit("Mean squared error", [](const ParamStats& p) { return p.mse; });
  out << "Rejection rate for beta_tmt at alpha = 0.05\n";
  for (const MethodReport& m : report.methods) {
    out << std::left << std::setw(14) << m.method << std::right
        << format_number(m.rejection_rate_tmt) << "  (converged " << m.n_converged << ", failed "
        << m.n_failed << ")\n";
  }
  return out.str();
}

}  // namespace censreg
