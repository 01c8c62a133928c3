#include <catch2/catch_amalgamated.hpp>

#include "censreg/onesample.hpp"
#include "censreg/rng.hpp"
#include "censreg/weibull_reg.hpp"

#include <cmath>

using namespace censreg;

namespace {

struct SimulatedTrial {
  std::vector<double> time;
  std::vector<int> event;
  Eigen::MatrixXd x;
};

SimulatedTrial simulate_trial(Rng& rng, int n, const WeibullPH& baseline,
                              const std::vector<double>& beta, double horizon) {
  SimulatedTrial trial;
  trial.time.resize(n);
  trial.event.resize(n);
  trial.x.resize(n, static_cast<int>(beta.size()));
  for (int i = 0; i < n; ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
      const double v = j == 0 ? rng.normal(0.0, 1.0) : static_cast<double>(i % 2);
      trial.x(i, static_cast<int>(j)) = v;
      eta += beta[j] * v;
    }
    const double z = rng.weibull_ph(baseline, std::exp(eta));
    trial.time[i] = std::min(z, horizon);
    trial.event[i] = z <= horizon ? 1 : 0;
  }
  return trial;
}

}  // namespace

TEST_CASE("null model on unit-exponential data", "[weibull_reg]") {
  Rng rng(3);
  const int n = 1500;
  std::vector<double> time(n);
  std::vector<int> event(n, 1);
  for (double& t : time) t = rng.weibull_ph(WeibullPH(1.0, 1.0));
  const AFTFit fit = fit_weibull_l1(time, event, Eigen::MatrixXd(n, 0));
  REQUIRE(fit.converged);
  REQUIRE(fit.covariance_ok);
  const double se_mu = std::sqrt(fit.covariance(0, 0));
  const double se_logsigma = std::sqrt(fit.covariance(1, 1));
  CHECK(std::abs(fit.params.mu) < 3.0 * se_mu);
  CHECK(std::abs(fit.params.log_sigma) < 3.0 * se_logsigma);
}

TEST_CASE("covariate model recovery", "[weibull_reg]") {
  Rng rng(8);
  const WeibullPH truth(0.75, 3.1);
  const std::vector<double> beta = {0.7, 0.0};
  const SimulatedTrial trial = simulate_trial(rng, 700, truth, beta, 2.6);
  const AFTFit fit = fit_weibull_l1(trial.time, trial.event, trial.x, {"mrd", "tmt"});
  REQUIRE(fit.converged);
  const PHSummary ph = convert_weibull(fit);
  REQUIRE(ph.inference_ok);
  CHECK(std::abs(ph.lambda.estimate - truth.lambda) < 3.0 * ph.lambda.std_error);
  CHECK(std::abs(ph.gamma.estimate - truth.gamma) < 3.0 * ph.gamma.std_error);
  CHECK(std::abs(ph.beta[0].estimate - beta[0]) < 3.0 * ph.beta[0].std_error);
  CHECK(std::abs(ph.beta[1].estimate - beta[1]) < 3.0 * ph.beta[1].std_error);
}

TEST_CASE("duplicating rows keeps estimates and shrinks SEs by sqrt 2", "[weibull_reg]") {
  Rng rng(12);
  const SimulatedTrial trial = simulate_trial(rng, 250, WeibullPH(0.9, 1.8), {0.5}, 2.0);
  const AFTFit fit = fit_weibull_l1(trial.time, trial.event, trial.x);

  std::vector<double> time2 = trial.time;
  time2.insert(time2.end(), trial.time.begin(), trial.time.end());
  std::vector<int> event2 = trial.event;
  event2.insert(event2.end(), trial.event.begin(), trial.event.end());
  Eigen::MatrixXd x2(trial.x.rows() * 2, trial.x.cols());
  x2 << trial.x, trial.x;
  const AFTFit doubled = fit_weibull_l1(time2, event2, x2);

  CHECK(doubled.params.mu == Catch::Approx(fit.params.mu).margin(1e-3));
  CHECK(doubled.params.log_sigma == Catch::Approx(fit.params.log_sigma).margin(1e-3));
  CHECK(doubled.params.alpha[0] == Catch::Approx(fit.params.alpha[0]).margin(1e-3));
  for (int k = 0; k < 3; ++k) {
    const double ratio =
        std::sqrt(doubled.covariance(k, k)) / std::sqrt(fit.covariance(k, k));
    CHECK(ratio == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
  }
}

TEST_CASE("conversion with zero covariance is exact", "[weibull_reg]") {
  AFTFit fit;
  fit.params = WeibullAFT(0.0, 0.0, {0.0});
  fit.covariate_names = {"x1"};
  fit.covariance = Eigen::MatrixXd::Zero(3, 3);
  fit.covariance_ok = true;
  const PHSummary ph = convert_weibull(fit);
  CHECK(ph.lambda.estimate == 1.0);
  CHECK(ph.gamma.estimate == 1.0);
  CHECK(ph.beta[0].estimate == 0.0);
  CHECK(ph.lambda.std_error == 0.0);
  CHECK(ph.gamma.std_error == 0.0);
  CHECK(ph.beta[0].std_error == 0.0);
}

TEST_CASE("hazard ratio CI bounds are exponentials of the beta CI", "[weibull_reg]") {
  Rng rng(14);
  const SimulatedTrial trial = simulate_trial(rng, 300, WeibullPH(0.8, 2.0), {0.4}, 2.2);
  const PHSummary ph = convert_weibull(fit_weibull_l1(trial.time, trial.event, trial.x));
  CHECK(ph.hazard_ratio[0].ci_low == std::exp(ph.beta[0].ci_low));
  CHECK(ph.hazard_ratio[0].ci_high == std::exp(ph.beta[0].ci_high));
  CHECK(ph.hazard_ratio[0].estimate == std::exp(ph.beta[0].estimate));
  CHECK(ph.event_time_ratio[0].estimate ==
        Catch::Approx(std::exp(-ph.beta[0].estimate / ph.gamma.estimate)).epsilon(1e-10));
}

TEST_CASE("conversion back to AFT recovers the fit", "[weibull_reg]") {
  Rng rng(15);
  const SimulatedTrial trial = simulate_trial(rng, 220, WeibullPH(0.7, 2.4), {0.6}, 2.4);
  const AFTFit fit = fit_weibull_l1(trial.time, trial.event, trial.x);
  const PHSummary ph = convert_weibull(fit);
  std::vector<double> beta;
  for (const auto& b : ph.beta) beta.push_back(b.estimate);
  const WeibullAFT back = ph_to_aft(WeibullPH(ph.lambda.estimate, ph.gamma.estimate), beta);
  CHECK(back.mu == Catch::Approx(fit.params.mu).margin(1e-12));
  CHECK(back.log_sigma == Catch::Approx(fit.params.log_sigma).margin(1e-12));
  CHECK(back.alpha[0] == Catch::Approx(fit.params.alpha[0]).margin(1e-12));
}

TEST_CASE("no-covariate fit agrees with the one-sample weibull fit", "[weibull_reg]") {
  Rng rng(19);
  const int n = 400;
  std::vector<double> time(n);
  std::vector<int> event(n, 1);
  std::vector<CensoredValue> sample;
  const WeibullPH truth(0.6, 2.1);
  for (int i = 0; i < n; ++i) {
    time[i] = rng.weibull_ph(truth);
    sample.push_back(CensoredValue::exact(time[i]));
  }
  const AFTFit l1 = fit_weibull_l1(time, event, Eigen::MatrixXd(n, 0));
  const auto [ph, beta] = aft_to_ph(l1.params);
  const OneSampleFit os = fit_censored_sample(sample, Family::Weibull);
  const WeibullPH os_ph = shapescale_to_ph(WeibullShapeScale(os.estimates[0], os.estimates[1]));
  CHECK(ph.lambda == Catch::Approx(os_ph.lambda).margin(1e-4));
  CHECK(ph.gamma == Catch::Approx(os_ph.gamma).margin(1e-4));
}

TEST_CASE("gamma delta-method SE agrees with a parametric bootstrap", "[weibull_reg][slow]") {
  Rng rng(21);
  const int n = 300;
  const WeibullPH truth(0.75, 3.1);
  std::vector<double> time(n);
  std::vector<int> event(n);
  for (int i = 0; i < n; ++i) {
    const double z = rng.weibull_ph(truth);
    time[i] = std::min(z, 1.3);
    event[i] = z <= 1.3 ? 1 : 0;
  }
  const AFTFit fit = fit_weibull_l1(time, event, Eigen::MatrixXd(n, 0));
  const PHSummary ph = convert_weibull(fit);
  const WeibullPH fitted(ph.lambda.estimate, ph.gamma.estimate);

  const int resamples = 200;
  std::vector<double> gammas;
  for (int b = 0; b < resamples; ++b) {
    Rng boot = Rng::substream(555, static_cast<std::uint64_t>(b));
    std::vector<double> bt(n);
    std::vector<int> be(n);
    for (int i = 0; i < n; ++i) {
      const double z = boot.weibull_ph(fitted);
      bt[i] = std::min(z, 1.3);
      be[i] = z <= 1.3 ? 1 : 0;
    }
    const AFTFit refit = fit_weibull_l1(bt, be, Eigen::MatrixXd(n, 0));
    gammas.push_back(1.0 / refit.params.sigma());
  }
  double mean = 0.0;
  for (double g : gammas) mean += g;
  mean /= resamples;
  double ss = 0.0;
  for (double g : gammas) ss += (g - mean) * (g - mean);
  const double bootstrap_se = std::sqrt(ss / (resamples - 1));
  CHECK(ph.gamma.std_error == Catch::Approx(bootstrap_se).epsilon(0.15));
}

TEST_CASE("input validation", "[weibull_reg]") {
  std::vector<double> time = {1.0, 2.0, 3.0, 4.0};
  std::vector<int> none(4, 0);
  CHECK_THROWS_AS(fit_weibull_l1(time, none, Eigen::MatrixXd(4, 0)), std::invalid_argument);
  std::vector<int> events = {1, 1, 0, 1};
  std::vector<double> bad_time = {1.0, -2.0, 3.0, 4.0};
  CHECK_THROWS_AS(fit_weibull_l1(bad_time, events, Eigen::MatrixXd(4, 0)),
                  std::invalid_argument);
}
