#include "censreg/simulate.hpp"

#include "censreg/coxph.hpp"
#include "censreg/onesample.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace censreg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct MethodDraw {
  bool ok = false;
  double lambda = kNaN, gamma = kNaN, beta_tmt = kNaN, beta_mrd = kNaN;
  double p_tmt = kNaN;
};

struct ReplicationDraw {
  MethodDraw censcov, weibull_lod, cox_lod;
};

ReplicationDraw run_one(const SimConfig& cfg, std::uint64_t rep) {
  ReplicationDraw out;
  Rng rng = Rng::substream(cfg.seed, rep);
  const std::vector<SurvObservation> data = generate_trial(cfg, rng);
  const int n = static_cast<int>(data.size());

  // Method A: two-stage fit, density estimated from the pooled covariate sample.
  try {
    std::vector<CensoredValue> pooled;
    pooled.reserve(data.size());
    for (const auto& obs : data) pooled.push_back(obs.x_cens);
    const OneSampleFit density_fit = fit_censored_sample(pooled, Family::Normal);
    const CovariateDensity density(Family::Normal, density_fit.estimates);
    const CensCovFit fit =
        fit_censcov(data, density, std::nullopt, {}, 0.95, "mrd", {"tmt"});
    if (fit.converged && fit.covariance_ok && density_fit.converged) {
      out.censcov.ok = true;
      out.censcov.lambda = fit.lambda;
      out.censcov.gamma = fit.gamma;
      out.censcov.beta_mrd = fit.beta[0];
      out.censcov.beta_tmt = fit.beta[1];
      out.censcov.p_tmt = fit.p_values[3];
    }
  } catch (const std::exception&) {
  }

  // Methods B and C: impute the bound for censored covariate values.
  std::vector<double> time(n);
  std::vector<int> event(n);
  Eigen::MatrixXd x(n, 2);
  for (int i = 0; i < n; ++i) {
    time[i] = data[i].time;
    event[i] = data[i].event;
    x(i, 0) = data[i].x_cens.finite_bound();
    x(i, 1) = data[i].x_exact[0];
  }

  try {
    const AFTFit l1 = fit_weibull_l1(time, event, x, {"mrd", "tmt"});
    const PHSummary ph = convert_weibull(l1);
    if (l1.converged && l1.covariance_ok) {
      out.weibull_lod.ok = true;
      out.weibull_lod.lambda = ph.lambda.estimate;
      out.weibull_lod.gamma = ph.gamma.estimate;
      out.weibull_lod.beta_mrd = ph.beta[0].estimate;
      out.weibull_lod.beta_tmt = ph.beta[1].estimate;
      out.weibull_lod.p_tmt = ph.beta[1].p_value;
    }
  } catch (const std::exception&) {
  }

  try {
    const CoxFit cox = fit_cox(time, event, x, {"mrd", "tmt"});
    if (cox.converged && cox.covariance_ok) {
      out.cox_lod.ok = true;
      out.cox_lod.beta_mrd = cox.beta[0];
      out.cox_lod.beta_tmt = cox.beta[1];
      out.cox_lod.p_tmt = cox.p_values[1];
    }
  } catch (const std::exception&) {
  }
  return out;
}

ParamStats aggregate_param(const std::string& name, double truth,
                           const std::vector<double>& estimates) {
  ParamStats stats;
  stats.name = name;
  stats.true_value = truth;
  const std::size_t m = estimates.size();
  if (m == 0) {
    stats.mean_estimate = stats.bias = stats.mse = stats.empirical_se = kNaN;
    return stats;
  }
  double sum = 0.0;
  for (double e : estimates) sum += e;
  stats.mean_estimate = sum / static_cast<double>(m);
  stats.bias = stats.mean_estimate - truth;
  double ss = 0.0;
  for (double e : estimates) ss += (e - stats.mean_estimate) * (e - stats.mean_estimate);
  const double variance = ss / static_cast<double>(m);
  stats.empirical_se = std::sqrt(variance);
  stats.mse = stats.bias * stats.bias + variance;
  return stats;
}

MethodReport aggregate_method(const std::string& method, const SimConfig& cfg,
                              const std::vector<ReplicationDraw>& draws, bool has_baseline) {
  MethodReport report;
  report.method = method;
  std::vector<double> lambda, gamma, beta_tmt, beta_mrd;
  int rejections = 0;
  for (const auto& draw : draws) {
    const MethodDraw& d = method == "censcov"      ? draw.censcov
                          : method == "weibull_lod" ? draw.weibull_lod
                                                     : draw.cox_lod;
    if (!d.ok) {
      ++report.n_failed;
      continue;
    }
    ++report.n_converged;
    if (has_baseline) {
      lambda.push_back(d.lambda);
      gamma.push_back(d.gamma);
    }
    beta_tmt.push_back(d.beta_tmt);
    beta_mrd.push_back(d.beta_mrd);
    if (d.p_tmt < 0.05) ++rejections;
  }
  if (has_baseline) {
    report.params.push_back(aggregate_param("lambda", cfg.lambda, lambda));
    report.params.push_back(aggregate_param("gamma", cfg.gamma, gamma));
  }
  report.params.push_back(aggregate_param("beta_tmt", cfg.beta_tmt, beta_tmt));
  report.params.push_back(aggregate_param("beta_mrd", cfg.beta_mrd, beta_mrd));
  report.rejection_rate_tmt =
      report.n_converged > 0 ? static_cast<double>(rejections) / report.n_converged : kNaN;
  return report;
}

}  // namespace

void SimConfig::validate() const {
  if (!(sigma_r > 0.0) || !(sigma_o > 0.0))
    throw std::invalid_argument("SimConfig: sigmas must be positive");
  if (!(lambda > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("SimConfig: lambda and gamma must be positive");
  if (cens_prop_r < 0.0 || cens_prop_r >= 1.0 || cens_prop_o < 0.0 || cens_prop_o >= 1.0)
    throw std::invalid_argument("SimConfig: censoring proportions must be in [0, 1)");
  if (n_per_arm < 10) throw std::invalid_argument("SimConfig: n_per_arm must be at least 10");
  if (!(horizon > 0.0)) throw std::invalid_argument("SimConfig: horizon must be positive");
  if (replications < 1) throw std::invalid_argument("SimConfig: replications must be positive");
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::istringstream vs(value);
    auto parse = [&](auto& field) {
      vs >> field;
      if (vs.fail() || !vs.eof())
        throw std::runtime_error("config line " + std::to_string(lineno) + ": bad value for " +
                                 key);
    };
    if (key == "mu_r") parse(cfg.mu_r);
    else if (key == "sigma_r") parse(cfg.sigma_r);
    else if (key == "mu_o") parse(cfg.mu_o);
    else if (key == "sigma_o") parse(cfg.sigma_o);
    else if (key == "lambda") parse(cfg.lambda);
    else if (key == "gamma") parse(cfg.gamma);
    else if (key == "beta_tmt") parse(cfg.beta_tmt);
    else if (key == "beta_mrd") parse(cfg.beta_mrd);
    else if (key == "cens_prop_r") parse(cfg.cens_prop_r);
    else if (key == "cens_prop_o") parse(cfg.cens_prop_o);
    else if (key == "n_per_arm") parse(cfg.n_per_arm);
    else if (key == "horizon") parse(cfg.horizon);
    else if (key == "replications") parse(cfg.replications);
    else if (key == "seed") parse(cfg.seed);
    else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key " + key);
  }
  cfg.validate();
  return cfg;
}

std::vector<SurvObservation> generate_trial(const SimConfig& cfg, Rng& rng) {
  cfg.validate();
  std::vector<SurvObservation> data;
  data.reserve(2 * static_cast<std::size_t>(cfg.n_per_arm));

  const struct Arm {
    double mu, sigma, cens_prop;
    double tmt;
  } arms[2] = {{cfg.mu_r, cfg.sigma_r, cfg.cens_prop_r, 0.0},
               {cfg.mu_o, cfg.sigma_o, cfg.cens_prop_o, 1.0}};

  const WeibullPH baseline(cfg.lambda, cfg.gamma);
  for (const Arm& arm : arms) {
    // true arm quantile of the covariate at the configured censoring proportion
    const double lod = arm.cens_prop > 0.0
                           ? arm.mu + arm.sigma * normal_quantile(arm.cens_prop)
                           : -std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.n_per_arm; ++i) {
      const double x = rng.normal(arm.mu, arm.sigma);
      const double z =
          rng.weibull_ph(baseline, std::exp(cfg.beta_tmt * arm.tmt + cfg.beta_mrd * x));
      const double t = std::min(z, cfg.horizon);
      const int event = z <= cfg.horizon ? 1 : 0;
      const CensoredValue mrd =
          x < lod ? CensoredValue::left_censored(lod) : CensoredValue::exact(x);
      data.emplace_back(t, event, std::vector<double>{arm.tmt}, mrd);
    }
  }
  return data;
}

SimReport run_study(const SimConfig& cfg, int threads) {
  cfg.validate();
  const int m = cfg.replications;
  std::vector<ReplicationDraw> draws(m);

  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, m);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int rep = next.fetch_add(1);
      if (rep >= m) return;
      draws[rep] = run_one(cfg, static_cast<std::uint64_t>(rep));
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SimReport report;
  report.config = cfg;
  report.methods.push_back(aggregate_method("censcov", cfg, draws, true));
  report.methods.push_back(aggregate_method("weibull_lod", cfg, draws, true));
  report.methods.push_back(aggregate_method("cox_lod", cfg, draws, false));
  return report;
}

}  // namespace censreg
