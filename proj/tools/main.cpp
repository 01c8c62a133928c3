#include "censreg/censcov_reg.hpp"
#include "censreg/coxph.hpp"
#include "censreg/csv.hpp"
#include "censreg/diagnostics.hpp"
#include "censreg/onesample.hpp"
#include "censreg/report.hpp"
#include "censreg/simulate.hpp"
#include "censreg/twosample.hpp"
#include "censreg/weibull_reg.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace censreg;

struct CommonOptions {
  std::string format = "table";
  double conf_level = 0.95;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  cmd->add_option("--conf-level", opts.conf_level, "Confidence level for intervals")
      ->check(CLI::Range(0.5, 0.9999))
      ->capture_default_str();
}

std::string join_command(int argc, char** argv) {
  std::ostringstream out;
  for (int i = 0; i < argc; ++i) out << (i ? " " : "") << argv[i];
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const CommonOptions& common, ReportEnvelope envelope, const std::string& table) {
  if (common.format == "json") {
    std::cout << envelope_json(envelope).dump(2) << "\n";
  } else {
    std::cout << table;
    for (const std::string& w : envelope.warnings) std::cerr << "warning: " << w << "\n";
  }
}

CovariateDensity parse_density_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("--density expects FAMILY:P1,P2 (e.g. normal:-2.47,1.71)");
  const Family family = family_from_name(spec.substr(0, colon));
  const std::string rest = spec.substr(colon + 1);
  const auto comma = rest.find(',');
  if (comma == std::string::npos)
    throw std::runtime_error("--density expects two comma-separated parameters");
  return CovariateDensity(family,
                          {std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1))});
}

// shared covariate name for a pair like (mrd.low, mrd.up)
std::string derive_cens_name(const std::string& low, const std::string& high) {
  std::size_t k = 0;
  while (k < low.size() && k < high.size() && low[k] == high[k]) ++k;
  while (k > 0 && (low[k - 1] == '.' || low[k - 1] == '_' || low[k - 1] == '-')) --k;
  return k > 0 ? low.substr(0, k) : "cens";
}

int run_censcov(const CommonOptions& common, const std::string& command,
                const std::string& data_path, const std::string& time_col,
                const std::string& event_col, const std::string& cens_low,
                const std::string& cens_high, const std::vector<std::string>& covars,
                std::string cens_name, const std::string& density_from,
                const std::string& density_spec, const std::vector<double>& initial) {
  const std::string bytes = read_file(data_path);
  std::vector<ColumnSpec> schema = {{time_col, ColumnType::PositiveNumeric},
                                    {event_col, ColumnType::Binary},
                                    {cens_low, ColumnType::NumericOrNA},
                                    {cens_high, ColumnType::NumericOrNA}};
  for (const std::string& c : covars) schema.push_back({c, ColumnType::Numeric});
  const Dataset data = ingest_csv_text(bytes, schema, data_path);
  const std::vector<CensoredValue> cens = assemble_interval2(data, cens_low, cens_high);

  std::vector<SurvObservation> observations;
  const auto& time = data.column(time_col);
  const auto& event = data.column(event_col);
  for (int i = 0; i < data.n_rows(); ++i) {
    std::vector<double> x;
    for (const std::string& c : covars) x.push_back(data.column(c)[i]);
    observations.emplace_back(time[i], static_cast<int>(event[i]), std::move(x), cens[i]);
  }

  ReportEnvelope envelope;
  envelope.command = command;
  envelope.input_digest = fnv1a_digest(bytes);

  std::optional<CovariateDensity> density;
  if (!density_spec.empty()) {
    density = parse_density_spec(density_spec);
  } else if (density_from == "pooled") {
    const OneSampleFit pooled = fit_censored_sample(cens, Family::Normal, common.conf_level);
    density = pooled.density();
    if (!pooled.converged)
      envelope.warnings.push_back("pooled density estimation did not converge");
  } else {
    throw std::runtime_error("specify --density FAMILY:P1,P2 or --density-from pooled");
  }

  if (cens_name.empty()) cens_name = derive_cens_name(cens_low, cens_high);
  const CensCovFit fit =
      fit_censcov(observations, *density, initial.empty() ? std::nullopt
                                                          : std::make_optional(initial),
                  {}, common.conf_level, cens_name, covars);
  envelope.warnings.insert(envelope.warnings.end(), fit.warnings.begin(), fit.warnings.end());
  envelope.payload = to_json(fit);
  if (!fit.converged) envelope.warnings.push_back("fit did not converge");
  emit(common, envelope, format_table(fit));
  return fit.converged ? 0 : 2;
}

int run_weibullreg(const CommonOptions& common, const std::string& command,
                   const std::string& data_path, const std::string& time_col,
                   const std::string& event_col, const std::vector<std::string>& covars) {
  const std::string bytes = read_file(data_path);
  std::vector<ColumnSpec> schema = {{time_col, ColumnType::PositiveNumeric},
                                    {event_col, ColumnType::Binary}};
  for (const std::string& c : covars) schema.push_back({c, ColumnType::Numeric});
  const Dataset data = ingest_csv_text(bytes, schema, data_path);

  const int n = data.n_rows();
  std::vector<double> time = data.column(time_col);
  std::vector<int> event(n);
  for (int i = 0; i < n; ++i) event[i] = static_cast<int>(data.column(event_col)[i]);
  Eigen::MatrixXd x(n, static_cast<int>(covars.size()));
  for (std::size_t j = 0; j < covars.size(); ++j) {
    const auto& col = data.column(covars[j]);
    for (int i = 0; i < n; ++i) x(i, static_cast<int>(j)) = col[i];
  }

  const AFTFit fit = fit_weibull_l1(time, event, x, covars);
  const PHSummary ph = convert_weibull(fit, common.conf_level);

  ReportEnvelope envelope;
  envelope.command = command;
  envelope.input_digest = fnv1a_digest(bytes);
  envelope.payload = to_json(fit, ph);
  if (!fit.converged) envelope.warnings.push_back("fit did not converge");

  std::ostringstream table;
  table << "Coefficients:\n";
  std::vector<CoefRow> rows = {
      {"lambda", ph.lambda.estimate, ph.lambda.std_error, ph.lambda.ci_low, ph.lambda.ci_high,
       ph.lambda.p_value},
      {"gamma", ph.gamma.estimate, ph.gamma.std_error, ph.gamma.ci_low, ph.gamma.ci_high,
       ph.gamma.p_value}};
  for (std::size_t j = 0; j < ph.beta.size(); ++j)
    rows.push_back({ph.beta_names[j], ph.beta[j].estimate, ph.beta[j].std_error,
                    ph.beta[j].ci_low, ph.beta[j].ci_high, ph.beta[j].p_value});
  table << format_coef_table(rows) << "\n";
  std::vector<CoefRow> ratios;
  for (std::size_t j = 0; j < ph.beta.size(); ++j)
    ratios.push_back({"HR(" + ph.beta_names[j] + ")", ph.hazard_ratio[j].estimate,
                      ph.hazard_ratio[j].std_error, ph.hazard_ratio[j].ci_low,
                      ph.hazard_ratio[j].ci_high, ph.hazard_ratio[j].p_value});
  for (std::size_t j = 0; j < ph.beta.size(); ++j)
    ratios.push_back({"ETR(" + ph.beta_names[j] + ")", ph.event_time_ratio[j].estimate,
                      ph.event_time_ratio[j].std_error, ph.event_time_ratio[j].ci_low,
                      ph.event_time_ratio[j].ci_high, ph.event_time_ratio[j].p_value});
  if (!ratios.empty()) table << "Ratios:\n" << format_coef_table(ratios) << "\n";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.5g", fit.loglik);
  table << "Log-likelihood: " << buffer << "  (n = " << fit.n << ", events = " << fit.n_events
        << ")\n";
  emit(common, envelope, table.str());
  return fit.converged ? 0 : 2;
}

int run_cox(const CommonOptions& common, const std::string& command,
            const std::string& data_path, const std::string& time_col,
            const std::string& event_col, const std::vector<std::string>& covars) {
  const std::string bytes = read_file(data_path);
  std::vector<ColumnSpec> schema = {{time_col, ColumnType::PositiveNumeric},
                                    {event_col, ColumnType::Binary}};
  for (const std::string& c : covars) schema.push_back({c, ColumnType::Numeric});
  const Dataset data = ingest_csv_text(bytes, schema, data_path);
  const int n = data.n_rows();
  std::vector<double> time = data.column(time_col);
  std::vector<int> event(n);
  for (int i = 0; i < n; ++i) event[i] = static_cast<int>(data.column(event_col)[i]);
  Eigen::MatrixXd x(n, static_cast<int>(covars.size()));
  for (std::size_t j = 0; j < covars.size(); ++j) {
    const auto& col = data.column(covars[j]);
    for (int i = 0; i < n; ++i) x(i, static_cast<int>(j)) = col[i];
  }
  const CoxFit fit = fit_cox(time, event, x, covars);

  ReportEnvelope envelope;
  envelope.command = command;
  envelope.input_digest = fnv1a_digest(bytes);
  envelope.payload = to_json(fit);
  if (!fit.converged) envelope.warnings.push_back("fit did not converge");
  std::ostringstream table;
  table << "Cox partial-likelihood fit:\n" << format_coef_table(coef_rows(fit));
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.5g", fit.partial_loglik);
  table << "\nPartial log-likelihood: " << buffer << "  (events = " << fit.n_events << ")\n";
  emit(common, envelope, table.str());
  return fit.converged ? 0 : 2;
}

int run_onesample(const CommonOptions& common, const std::string& command,
                  const std::string& data_path, const std::string& low_col,
                  const std::string& high_col, const std::string& value_col,
                  const std::string& dist) {
  const std::string bytes = read_file(data_path);
  std::vector<CensoredValue> values;
  if (!value_col.empty()) {
    const Dataset data = ingest_csv_text(bytes, {{value_col, ColumnType::Numeric}}, data_path);
    for (double v : data.column(value_col)) values.push_back(CensoredValue::exact(v));
  } else {
    const Dataset data = ingest_csv_text(
        bytes, {{low_col, ColumnType::NumericOrNA}, {high_col, ColumnType::NumericOrNA}},
        data_path);
    values = assemble_interval2(data, low_col, high_col);
  }
  const OneSampleFit fit = fit_censored_sample(values, family_from_name(dist), common.conf_level);

  ReportEnvelope envelope;
  envelope.command = command;
  envelope.input_digest = fnv1a_digest(bytes);
  envelope.payload = to_json(fit);
  if (!fit.converged) envelope.warnings.push_back("fit did not converge");
  std::ostringstream table;
  table << format_coef_table(coef_rows(fit));
  table << "\nn = " << fit.n() << " (exact " << fit.n_exact << ", left " << fit.n_left
        << ", right " << fit.n_right << ", interval " << fit.n_interval << ")\n";
  emit(common, envelope, table.str());
  return fit.converged ? 0 : 2;
}

int run_meandiff(const CommonOptions& common, const std::string& command,
                 const std::string& data1_path, const std::string& data2_path,
                 const std::string& low_col, const std::string& high_col) {
  const std::string bytes1 = read_file(data1_path);
  const std::string bytes2 = read_file(data2_path);
  const std::vector<ColumnSpec> schema = {{low_col, ColumnType::NumericOrNA},
                                          {high_col, ColumnType::NumericOrNA}};
  const std::vector<CensoredValue> s1 =
      assemble_interval2(ingest_csv_text(bytes1, schema, data1_path), low_col, high_col);
  const std::vector<CensoredValue> s2 =
      assemble_interval2(ingest_csv_text(bytes2, schema, data2_path), low_col, high_col);
  const MeanDiffFit fit = normal_mean_diff(s1, s2, common.conf_level);

  ReportEnvelope envelope;
  envelope.command = command;
  envelope.input_digest = fnv1a_digest(bytes1 + bytes2);
  envelope.payload = to_json(fit);
  const bool converged = fit.fit1.converged && fit.fit2.converged;
  if (!converged) envelope.warnings.push_back("a component fit did not converge");
  emit(common, envelope, format_coef_table(coef_rows(fit)));
  return converged ? 0 : 2;
}

int run_diag(const CommonOptions& common, const std::string& command,
             const std::string& data_path, const std::string& time_col,
             const std::string& event_col, const std::string& group_col,
             const std::string& svg_path) {
  const std::string bytes = read_file(data_path);
  std::vector<ColumnSpec> schema = {{time_col, ColumnType::PositiveNumeric},
                                    {event_col, ColumnType::Binary}};
  if (!group_col.empty()) schema.push_back({group_col, ColumnType::Numeric});
  const Dataset data = ingest_csv_text(bytes, schema, data_path);
  const int n = data.n_rows();
  std::vector<double> time = data.column(time_col);
  std::vector<int> event(n);
  for (int i = 0; i < n; ++i) event[i] = static_cast<int>(data.column(event_col)[i]);
  std::vector<std::string> stratum(n, "all");
  if (!group_col.empty()) {
    const auto& g = data.column(group_col);
    for (int i = 0; i < n; ++i) stratum[i] = group_col + "=" + format_number(g[i]);
  }
  const DiagResult diag = weibull_diag(time, event, stratum);

  if (!svg_path.empty()) {
    std::ofstream svg(svg_path);
    if (!svg) throw std::runtime_error("cannot write SVG file: " + svg_path);
    svg << diag_svg(diag);
  }

  ReportEnvelope envelope;
  envelope.command = command;
  envelope.input_digest = fnv1a_digest(bytes);
  envelope.warnings = diag.warnings;
  envelope.payload = to_json(diag);
  emit(common, envelope, diag_csv(diag));
  return 0;
}

int run_convert(const CommonOptions& common, const std::string& command, double mu,
                double log_sigma, const std::vector<double>& alpha) {
  const auto [ph, beta] = aft_to_ph(WeibullAFT(mu, log_sigma, alpha));
  ReportEnvelope envelope;
  envelope.command = command;
  nlohmann::ordered_json betas = nlohmann::ordered_json::array();
  for (std::size_t j = 0; j < beta.size(); ++j)
    betas.push_back({{"name", "x" + std::to_string(j + 1)},
                     {"beta", beta[j]},
                     {"hazard_ratio", std::exp(beta[j])},
                     {"event_time_ratio", std::exp(alpha[j])}});
  envelope.payload = {{"lambda", ph.lambda}, {"gamma", ph.gamma}, {"covariates", betas}};
  std::ostringstream table;
  table << "lambda " << format_number(ph.lambda) << "\n"
        << "gamma  " << format_number(ph.gamma) << "\n";
  for (std::size_t j = 0; j < beta.size(); ++j)
    table << "beta" << (j + 1) << "  " << format_number(beta[j]) << " (HR "
          << format_number(std::exp(beta[j])) << ", ETR " << format_number(std::exp(alpha[j]))
          << ")\n";
  emit(common, envelope, table.str());
  return 0;
}

int run_simulate(const CommonOptions& common, const std::string& command,
                 const std::string& config_path, int replications_override,
                 std::int64_t seed_override, int threads) {
  const std::string bytes = read_file(config_path);
  SimConfig cfg = load_sim_config(config_path);
  if (replications_override > 0) cfg.replications = replications_override;
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  const SimReport report = run_study(cfg, threads);

  ReportEnvelope envelope;
  envelope.command = command;
  envelope.input_digest = fnv1a_digest(bytes);
  envelope.payload = to_json(report);
  for (const MethodReport& m : report.methods)
    if (m.n_failed > 0)
      envelope.warnings.push_back(m.method + ": " + std::to_string(m.n_failed) +
                                  " replications excluded (non-convergence)");
  emit(common, envelope, format_table(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weibull survival regression with censored covariates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("censreg ") + censreg::kVersion);
  const std::string command = join_command(argc, argv);

  CommonOptions common;

  auto* censcov = app.add_subcommand(
      "censcov", "Weibull regression with an interval-censored covariate");
  std::string data_path, time_col = "time", event_col = "event";
  std::string cens_low, cens_high, cens_name, density_from, density_spec;
  std::vector<std::string> covars;
  std::vector<double> initial;
  censcov->add_option("--data", data_path, "CSV input file")->required();
  censcov->add_option("--time", time_col, "Follow-up time column")->capture_default_str();
  censcov->add_option("--event", event_col, "Event indicator column")->capture_default_str();
  censcov->add_option("--cens-low", cens_low, "Lower-bound column (interval2)")->required();
  censcov->add_option("--cens-high", cens_high, "Upper-bound column (interval2)")->required();
  censcov->add_option("--covars", covars, "Fully observed covariate columns")->delimiter(',');
  censcov->add_option("--cens-name", cens_name, "Report name for the censored covariate");
  censcov->add_option("--density-from", density_from,
                      "Estimate the covariate density from the data ('pooled')")
      ->check(CLI::IsMember({"pooled"}));
  censcov->add_option("--density", density_spec, "Explicit covariate density FAMILY:P1,P2");
  censcov->add_option("--initial", initial, "Starting values lambda,gamma,beta...")
      ->delimiter(',');
  add_common(censcov, common);

  auto* weibullreg =
      app.add_subcommand("weibullreg", "Weibull regression with exact covariates");
  std::string wr_data, wr_time = "time", wr_event = "event";
  std::vector<std::string> wr_covars;
  weibullreg->add_option("--data", wr_data, "CSV input file")->required();
  weibullreg->add_option("--time", wr_time, "Follow-up time column")->capture_default_str();
  weibullreg->add_option("--event", wr_event, "Event indicator column")->capture_default_str();
  weibullreg->add_option("--covars", wr_covars, "Covariate columns")->delimiter(',');
  add_common(weibullreg, common);

  auto* cox = app.add_subcommand("cox", "Cox proportional-hazards comparison fit");
  std::string cox_data, cox_time = "time", cox_event = "event";
  std::vector<std::string> cox_covars;
  cox->add_option("--data", cox_data, "CSV input file")->required();
  cox->add_option("--time", cox_time, "Follow-up time column")->capture_default_str();
  cox->add_option("--event", cox_event, "Event indicator column")->capture_default_str();
  cox->add_option("--covars", cox_covars, "Covariate columns")->delimiter(',');
  add_common(cox, common);

  auto* onesample = app.add_subcommand("onesample", "Censored one-sample parametric fit");
  std::string os_data, os_low, os_high, os_value, os_dist = "normal";
  onesample->add_option("--data", os_data, "CSV input file")->required();
  onesample->add_option("--low", os_low, "Lower-bound column (interval2)");
  onesample->add_option("--high", os_high, "Upper-bound column (interval2)");
  onesample->add_option("--value", os_value, "Exact-value column (no censoring)");
  onesample->add_option("--dist", os_dist, "normal|logistic|gamma|weibull")
      ->capture_default_str();
  add_common(onesample, common);

  auto* meandiff = app.add_subcommand("meandiff", "Censored two-sample Normal mean difference");
  std::string md_data1, md_data2, md_low, md_high;
  meandiff->add_option("--data1", md_data1, "First sample CSV")->required();
  meandiff->add_option("--data2", md_data2, "Second sample CSV")->required();
  meandiff->add_option("--low", md_low, "Lower-bound column (interval2)")->required();
  meandiff->add_option("--high", md_high, "Upper-bound column (interval2)")->required();
  add_common(meandiff, common);

  auto* diag = app.add_subcommand("diag", "Kaplan-Meier Weibull adequacy diagnostic");
  std::string dg_data, dg_time = "time", dg_event = "event", dg_group, dg_svg;
  diag->add_option("--data", dg_data, "CSV input file")->required();
  diag->add_option("--time", dg_time, "Follow-up time column")->capture_default_str();
  diag->add_option("--event", dg_event, "Event indicator column")->capture_default_str();
  diag->add_option("--group", dg_group, "Stratum column");
  diag->add_option("--svg", dg_svg, "Write a plot to this SVG file");
  add_common(diag, common);

  auto* convert = app.add_subcommand("convert", "AFT to hazard parametrization");
  double cv_mu = 0.0, cv_log_sigma = 0.0;
  std::vector<double> cv_alpha;
  convert->add_option("--mu", cv_mu, "AFT intercept")->required();
  convert->add_option("--log-sigma", cv_log_sigma, "AFT log scale")->required();
  convert->add_option("--alpha", cv_alpha, "AFT regression coefficients")->delimiter(',');
  add_common(convert, common);

  auto* simulate = app.add_subcommand("simulate", "Run the three-method comparison study");
  std::string sim_config;
  int sim_reps = 0, sim_threads = 0;
  std::int64_t sim_seed = -1;
  simulate->add_option("--config", sim_config, "key=value configuration file")->required();
  simulate->add_option("--replications", sim_reps, "Override the configured replication count");
  simulate->add_option("--seed", sim_seed, "Override the configured seed");
  simulate->add_option("--threads", sim_threads, "Worker threads (0 = hardware)");
  add_common(simulate, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(censcov))
      return run_censcov(common, command, data_path, time_col, event_col, cens_low, cens_high,
                         covars, cens_name, density_from, density_spec, initial);
    if (app.got_subcommand(weibullreg))
      return run_weibullreg(common, command, wr_data, wr_time, wr_event, wr_covars);
    if (app.got_subcommand(cox))
      return run_cox(common, command, cox_data, cox_time, cox_event, cox_covars);
    if (app.got_subcommand(onesample)) {
      if (os_value.empty() && (os_low.empty() || os_high.empty()))
        throw CLI::ValidationError("onesample", "provide --low and --high, or --value");
      return run_onesample(common, command, os_data, os_low, os_high, os_value, os_dist);
    }
    if (app.got_subcommand(meandiff))
      return run_meandiff(common, command, md_data1, md_data2, md_low, md_high);
    if (app.got_subcommand(diag))
      return run_diag(common, command, dg_data, dg_time, dg_event, dg_group, dg_svg);
    if (app.got_subcommand(convert))
      return run_convert(common, command, cv_mu, cv_log_sigma, cv_alpha);
    if (app.got_subcommand(simulate))
      return run_simulate(common, command, sim_config, sim_reps, sim_seed, sim_threads);
  } catch (const CLI::ValidationError& err) {
    std::cerr << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 1;
}
