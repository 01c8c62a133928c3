#include <catch2/catch_amalgamated.hpp>

#include "censreg/censcov_reg.hpp"
#include "censreg/rng.hpp"
#include "censreg/simulate.hpp"

#include <cmath>

using namespace censreg;

namespace {

// reference two-arm trial data via the simulation generator
std::vector<SurvObservation> reference_trial(std::uint64_t seed, int n_per_arm,
                                             double cens_r = 0.05, double cens_o = 0.35) {
  SimConfig cfg;
  cfg.n_per_arm = n_per_arm;
  cfg.cens_prop_r = cens_r;
  cfg.cens_prop_o = cens_o;
  cfg.seed = seed;
  Rng rng(seed);
  return generate_trial(cfg, rng);
}

double loglik_l1_plus_density(const WeibullPH& ph, const std::vector<double>& beta,
                              const std::vector<SurvObservation>& data,
                              const CovariateDensity& density) {
  double total = 0.0;
  for (const auto& obs : data) {
    double eta = beta[0] * obs.x_cens.value();
    for (std::size_t j = 0; j < obs.x_exact.size(); ++j) eta += beta[1 + j] * obs.x_exact[j];
    const double cum_hazard = ph.lambda * std::pow(obs.time, ph.gamma) * std::exp(eta);
    if (obs.event == 1)
      total += std::log(ph.lambda * ph.gamma) + (ph.gamma - 1.0) * std::log(obs.time) + eta -
               cum_hazard;
    else
      total += -cum_hazard;
    total += density.log_pdf(obs.x_cens.value());
  }
  return total;
}

}  // namespace

TEST_CASE("L2 with exact covariates equals L1 plus the density terms", "[censcov]") {
  const auto data = reference_trial(100, 60, 0.0, 0.0);
  const CovariateDensity density(Family::Normal, {-2.467, 1.712});
  const WeibullPH ph(0.8, 2.9);
  const std::vector<double> beta = {0.6, 0.1};
  const double l2 = loglik_l2(ph, beta, data, density);
  const double oracle = loglik_l1_plus_density(ph, beta, data, density);
  CHECK(l2 == Catch::Approx(oracle).margin(1e-10));
}

TEST_CASE("censored-row integral factorizes when the covariate effect is zero", "[censcov]") {
  const CovariateDensity density(Family::Normal, {-2.0, 1.5});
  std::vector<SurvObservation> data;
  data.emplace_back(1.3, 1, std::vector<double>{1.0}, CensoredValue::left_censored(-3.2));
  const WeibullPH ph(0.75, 3.1);
  const std::vector<double> beta = {0.0, 0.4};

  const double l2 = loglik_l2(ph, beta, data, density);
  // with beta1 = 0 the integrand factorizes into (f or S) * F_theta(c)
  const double eta = 0.4 * 1.0;
  const double log_f = std::log(ph.lambda * ph.gamma) + (ph.gamma - 1.0) * std::log(1.3) + eta -
                       ph.lambda * std::pow(1.3, ph.gamma) * std::exp(eta);
  const double expected = log_f + std::log(density.cdf(-3.2));
  CHECK(l2 == Catch::Approx(expected).margin(1e-8));
}

TEST_CASE("censored-row integral matches a brute-force sum", "[censcov]") {
  const CovariateDensity density(Family::Normal, {-2.467, 1.712});
  const WeibullPH ph(0.75, 3.1);
  const std::vector<double> beta = {0.7, 0.14};
  const double c = -3.9673;
  std::vector<SurvObservation> data;
  data.emplace_back(0.9, 1, std::vector<double>{1.0}, CensoredValue::left_censored(c));

  const double l2 = loglik_l2(ph, beta, data, density);

  // midpoint-rule mixture over a wide truncated grid, independent of the
  // adaptive quadrature path
  const int points = 20000;
  const double lo = c - 40.0 * 1.712;
  const double step = (c - lo) / points;
  double sum = 0.0;
  for (int k = 0; k < points; ++k) {
    const double x = lo + (k + 0.5) * step;
    const double eta = beta[0] * x + beta[1] * 1.0;
    const double f = ph.lambda * ph.gamma * std::pow(0.9, ph.gamma - 1.0) * std::exp(eta) *
                     std::exp(-ph.lambda * std::pow(0.9, ph.gamma) * std::exp(eta));
    sum += f * density.pdf(x) * step;
  }
  CHECK(l2 == Catch::Approx(std::log(sum)).margin(1e-3));
}

TEST_CASE("fit with no censored rows matches the converted L1 fit", "[censcov]") {
  const auto data = reference_trial(200, 100, 0.0, 0.0);
  const CovariateDensity density(Family::Normal, {-2.467, 1.712});
  const CensCovFit fit = fit_censcov(data, density, std::nullopt, {}, 0.95, "mrd", {"tmt"});
  REQUIRE(fit.converged);
  CHECK(fit.n_cens_cov == 0);

  const AFTFit l1 = fit_weibull_l1(data);
  const auto [ph, beta] = aft_to_ph(l1.params);
  CHECK(fit.lambda == Catch::Approx(ph.lambda).margin(1e-4));
  CHECK(fit.gamma == Catch::Approx(ph.gamma).margin(1e-4));
  CHECK(fit.beta[0] == Catch::Approx(beta[0]).margin(1e-4));
  CHECK(fit.beta[1] == Catch::Approx(beta[1]).margin(1e-4));
}

TEST_CASE("reference configuration fit is near the truth", "[censcov][slow]") {
  const auto data = reference_trial(42, 200);
  std::vector<CensoredValue> pooled;
  for (const auto& obs : data) pooled.push_back(obs.x_cens);
  const OneSampleFit density_fit = fit_censored_sample(pooled, Family::Normal);
  const CensCovFit fit = fit_censcov(data, density_fit.density(), std::nullopt, {}, 0.95, "mrd",
                                     {"tmt"});
  REQUIRE(fit.converged);
  REQUIRE(fit.covariance_ok);
  CHECK(fit.n_cens_cov > 0);
  // truth: lambda 0.75, gamma 3.1, beta_mrd 0.7, beta_tmt 0
  CHECK(std::abs(fit.lambda - 0.75) < 3.0 * fit.std_errors[0]);
  CHECK(std::abs(fit.gamma - 3.1) < 3.0 * fit.std_errors[1]);
  CHECK(std::abs(fit.beta[0] - 0.7) < 3.0 * fit.std_errors[2]);
  CHECK(std::abs(fit.beta[1] - 0.0) < 3.0 * fit.std_errors[3]);
  // the covariate effect is overwhelming in this design
  CHECK(fit.p_values[2] < 1e-10);
  // lambda and gamma are reported without p-values
  CHECK(std::isnan(fit.p_values[0]));
  CHECK(std::isnan(fit.p_values[1]));
  // AIC identity
  CHECK(fit.aic == -2.0 * fit.loglik + 2.0 * 4.0);
}

TEST_CASE("omitting the constant status factor does not move the maximizer", "[censcov][slow]") {
  const auto data = reference_trial(7, 30, 0.3, 0.3);
  const CovariateDensity density(Family::Normal, {-2.467, 1.712});

  const CensCovFit fit = fit_censcov(data, density, std::nullopt, {}, 0.95, "mrd", {"tmt"});

  // alternative objective including the Bernoulli status factor log p_(R_i)(r_i):
  // r_i = 1 contributes log pi_i, r_i = 0 contributes log(1 - pi_i), with
  // pi_i = P(X > c_i) fixed by the density, so the addition is constant in
  // (lambda, gamma, beta)
  double status_constant = 0.0;
  for (const auto& obs : data) {
    if (obs.x_cens.is_exact()) {
      // exact rows in this design were observed above their arm LOD; use the
      // arm LOD encoded by the censored rows (constant either way)
      continue;
    }
    status_constant += std::log(density.cdf(*obs.x_cens.high()));
  }
  auto objective_with_factor = [&](const std::vector<double>& par) {
    std::vector<double> beta(par.begin() + 2, par.end());
    return loglik_l2(WeibullPH(par[0], par[1]), beta, data, density) + status_constant;
  };
  std::vector<double> start = {fit.lambda, fit.gamma};
  start.insert(start.end(), fit.beta.begin(), fit.beta.end());
  // nudge the start so the optimizer has real work to do
  start[0] *= 1.3;
  start[2] += 0.2;
  const OptimResult alt = maximize(objective_with_factor, start,
                                   {Transform::Log, Transform::Log, Transform::Identity,
                                    Transform::Identity});
  auto transformed = [&](const std::vector<double>& xt) {
    std::vector<double> par = xt;
    par[0] = std::exp(xt[0]);
    par[1] = std::exp(xt[1]);
    return objective_with_factor(par);
  };
  std::vector<double> xt = alt.argmax;
  xt[0] = std::log(alt.argmax[0]);
  xt[1] = std::log(alt.argmax[1]);
  const OptimResult polished = polish_maximum(transformed, xt, HessianSettings{4, 1e-3});

  CHECK(std::exp(polished.argmax[0]) == Catch::Approx(fit.lambda).margin(1e-6));
  CHECK(std::exp(polished.argmax[1]) == Catch::Approx(fit.gamma).margin(1e-6));
  CHECK(polished.argmax[2] == Catch::Approx(fit.beta[0]).margin(1e-6));
  CHECK(polished.argmax[3] == Catch::Approx(fit.beta[1]).margin(1e-6));
}

TEST_CASE("doubling the data keeps estimates and shrinks SEs", "[censcov][slow]") {
  const auto data = reference_trial(9, 40);
  std::vector<SurvObservation> doubled = data;
  doubled.insert(doubled.end(), data.begin(), data.end());
  const CovariateDensity density(Family::Normal, {-2.467, 1.712});
  const CensCovFit fit = fit_censcov(data, density, std::nullopt, {}, 0.95, "mrd", {"tmt"});
  const CensCovFit fit2 = fit_censcov(doubled, density, std::nullopt, {}, 0.95, "mrd", {"tmt"});
  CHECK(fit2.lambda == Catch::Approx(fit.lambda).margin(1e-3));
  CHECK(fit2.gamma == Catch::Approx(fit.gamma).margin(2e-3));
  CHECK(fit2.beta[0] == Catch::Approx(fit.beta[0]).margin(1e-3));
  CHECK(fit2.beta[1] == Catch::Approx(fit.beta[1]).margin(1e-3));
  for (int k = 0; k < 4; ++k) CHECK(fit2.std_errors[k] < fit.std_errors[k]);
}

TEST_CASE("gradient at the reported argmax is small", "[censcov]") {
  const auto data = reference_trial(11, 40);
  const CovariateDensity density(Family::Normal, {-2.467, 1.712});
  const CensCovFit fit = fit_censcov(data, density, std::nullopt, {}, 0.95, "mrd", {"tmt"});
  IntegrationSettings tight;
  tight.rel_tol = 1e-12;
  tight.abs_tol = 1e-15;
  auto transformed = [&](const std::vector<double>& xt) {
    std::vector<double> beta(xt.begin() + 2, xt.end());
    return loglik_l2(WeibullPH(std::exp(xt[0]), std::exp(xt[1])), beta, data, density, tight);
  };
  std::vector<double> xt = {std::log(fit.lambda), std::log(fit.gamma), fit.beta[0], fit.beta[1]};
  const std::vector<double> g = num_gradient(transformed, xt, HessianSettings{4, 1e-3});
  for (double gi : g) CHECK(std::abs(gi) < 1e-3);
}

TEST_CASE("interval rows converge to the exact-row fit as the width shrinks", "[censcov][slow]") {
  const auto exact_data = reference_trial(13, 40, 0.0, 0.0);
  const CovariateDensity density(Family::Normal, {-2.467, 1.712});
  const CensCovFit exact_fit =
      fit_censcov(exact_data, density, std::nullopt, {}, 0.95, "mrd", {"tmt"});

  auto widen = [&](double eps) {
    std::vector<SurvObservation> widened;
    for (const auto& obs : exact_data) {
      const double x = obs.x_cens.value();
      widened.emplace_back(obs.time, obs.event, obs.x_exact,
                           CensoredValue::interval(x - eps, x + eps));
    }
    return widened;
  };
  auto distance = [&](const CensCovFit& fit) {
    return std::abs(fit.lambda - exact_fit.lambda) + std::abs(fit.gamma - exact_fit.gamma) +
           std::abs(fit.beta[0] - exact_fit.beta[0]) + std::abs(fit.beta[1] - exact_fit.beta[1]);
  };
  const CensCovFit coarse =
      fit_censcov(widen(1e-3), density, std::nullopt, {}, 0.95, "mrd", {"tmt"});
  const CensCovFit fine =
      fit_censcov(widen(1e-4), density, std::nullopt, {}, 0.95, "mrd", {"tmt"});
  CHECK(distance(fine) <= distance(coarse) + 1e-9);
  CHECK(distance(fine) < 1e-3);
}

TEST_CASE("preconditions and warnings", "[censcov]") {
  const CovariateDensity density(Family::Normal, {0.0, 1.0});
  SECTION("no events") {
    std::vector<SurvObservation> data;
    for (int i = 0; i < 5; ++i)
      data.emplace_back(1.0 + i, 0, std::vector<double>{}, CensoredValue::exact(0.1 * i));
    CHECK_THROWS_AS(fit_censcov(data, density), std::invalid_argument);
  }
  SECTION("all covariate rows censored is flagged, not refused") {
    Rng rng(55);
    std::vector<SurvObservation> data;
    for (int i = 0; i < 40; ++i) {
      const double x = rng.normal(0.0, 1.0);
      const double z = rng.weibull_ph(WeibullPH(1.0, 1.5), std::exp(0.3 * x));
      data.emplace_back(z, 1, std::vector<double>{},
                        CensoredValue::interval(x - 0.5, x + 0.5));
    }
    const CensCovFit fit = fit_censcov(data, density);
    CHECK_FALSE(fit.warnings.empty());
  }
}
