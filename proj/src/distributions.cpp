#include "censreg/distributions.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <limits>

namespace censreg {

namespace {
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

WeibullShapeScale ph_to_shapescale(const WeibullPH& p) {
  return WeibullShapeScale(p.gamma, std::pow(p.lambda, -1.0 / p.gamma));
}

WeibullPH shapescale_to_ph(const WeibullShapeScale& p) {
  return WeibullPH(std::pow(p.scale, -p.shape), p.shape);
}

std::pair<WeibullPH, std::vector<double>> aft_to_ph(const WeibullAFT& p) {
  const double sigma = p.sigma();
  WeibullPH ph(std::exp(-p.mu / sigma), 1.0 / sigma);
  std::vector<double> beta(p.alpha.size());
  for (std::size_t j = 0; j < beta.size(); ++j) beta[j] = -p.alpha[j] / sigma;
  return {ph, beta};
}

WeibullAFT ph_to_aft(const WeibullPH& p, const std::vector<double>& beta) {
  const double sigma = 1.0 / p.gamma;
  const double mu = -sigma * std::log(p.lambda);
  std::vector<double> alpha(beta.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) alpha[j] = -sigma * beta[j];
  return WeibullAFT(mu, std::log(sigma), alpha);
}

static void check_time(double z) {
  if (!(z > 0.0)) throw std::domain_error("Weibull PH functions require z > 0");
}

double weibull_log_pdf_ph(double z, const WeibullPH& p) {
  check_time(z);
  return std::log(p.lambda) + std::log(p.gamma) + (p.gamma - 1.0) * std::log(z) -
         p.lambda * std::pow(z, p.gamma);
}

double weibull_pdf_ph(double z, const WeibullPH& p) { return std::exp(weibull_log_pdf_ph(z, p)); }

double weibull_log_survival_ph(double z, const WeibullPH& p) {
  check_time(z);
  return -p.lambda * std::pow(z, p.gamma);
}

double weibull_survival_ph(double z, const WeibullPH& p) {
  return std::exp(weibull_log_survival_ph(z, p));
}

double weibull_hazard_ph(double z, const WeibullPH& p) {
  check_time(z);
  return p.lambda * p.gamma * std::pow(z, p.gamma - 1.0);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Normal: return "normal";
    case Family::Logistic: return "logistic";
    case Family::Gamma: return "gamma";
    case Family::Weibull: return "weibull";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  if (name == "normal") return Family::Normal;
  if (name == "logistic") return Family::Logistic;
  if (name == "gamma") return Family::Gamma;
  if (name == "weibull") return Family::Weibull;
  throw std::invalid_argument("unknown distribution family: " + name);
}

std::vector<std::string> CovariateDensity::param_names(Family f) {
  switch (f) {
    case Family::Normal: return {"mu", "sigma"};
    case Family::Logistic: return {"location", "scale"};
    case Family::Gamma: return {"shape", "rate"};
    case Family::Weibull: return {"shape", "scale"};
  }
  return {};
}

CovariateDensity::CovariateDensity(Family family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {
  if (params_.size() != 2)
    throw std::invalid_argument("CovariateDensity: expected 2 parameters");
  const bool first_positive = params_[0] > 0.0;
  const bool second_positive = params_[1] > 0.0;
  switch (family_) {
    case Family::Normal:
    case Family::Logistic:
      if (!second_positive)
        throw std::invalid_argument("CovariateDensity: scale parameter must be positive");
      break;
    case Family::Gamma:
    case Family::Weibull:
      if (!first_positive || !second_positive)
        throw std::invalid_argument("CovariateDensity: parameters must be positive");
      break;
  }
}

bool CovariateDensity::in_support(double x) const {
  return support_lower() == -kInf || x > 0.0;
}

double CovariateDensity::support_lower() const {
  return (family_ == Family::Gamma || family_ == Family::Weibull) ? 0.0 : -kInf;
}

double CovariateDensity::log_pdf(double x) const {
  if (!in_support(x)) throw std::domain_error("density evaluated outside support");
  const double p0 = params_[0], p1 = params_[1];
  switch (family_) {
    case Family::Normal: {
      const double z = (x - p0) / p1;
      return -0.5 * z * z - std::log(p1) - kLogSqrt2Pi;
    }
    case Family::Logistic: {
      const double u = std::abs((x - p0) / p1);
      return -u - std::log(p1) - 2.0 * std::log1p(std::exp(-u));
    }
    case Family::Gamma:
      return p0 * std::log(p1) + (p0 - 1.0) * std::log(x) - p1 * x - std::lgamma(p0);
    case Family::Weibull: {
      const double lw = p0 * (std::log(x) - std::log(p1));
      return std::log(p0 / p1) + (p0 - 1.0) * (std::log(x) - std::log(p1)) - std::exp(lw);
    }
  }
  return -kInf;
}

double CovariateDensity::pdf(double x) const { return std::exp(log_pdf(x)); }

double CovariateDensity::cdf(double x) const {
  const double p0 = params_[0], p1 = params_[1];
  switch (family_) {
    case Family::Normal:
      return normal_cdf((x - p0) / p1);
    case Family::Logistic: {
      const double u = (x - p0) / p1;
      if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
      const double e = std::exp(u);
      return e / (1.0 + e);
    }
    case Family::Gamma:
      if (x <= 0.0) return 0.0;
      return gamma_cdf_lower(p0, p1 * x);
    case Family::Weibull:
      if (x <= 0.0) return 0.0;
      return -std::expm1(-std::pow(x / p1, p0));
  }
  return 0.0;
}

double CovariateDensity::survival(double x) const {
  const double p0 = params_[0], p1 = params_[1];
  switch (family_) {
    case Family::Normal:
      return normal_cdf(-(x - p0) / p1);
    case Family::Logistic: {
      const double u = (x - p0) / p1;
      if (u <= 0.0) return 1.0 / (1.0 + std::exp(u));
      const double e = std::exp(-u);
      return e / (1.0 + e);
    }
    case Family::Gamma:
      if (x <= 0.0) return 1.0;
      return boost::math::gamma_q(p0, p1 * x);
    case Family::Weibull:
      if (x <= 0.0) return 1.0;
      return std::exp(-std::pow(x / p1, p0));
  }
  return 1.0;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::domain_error("normal_quantile requires p in (0, 1)");
  static const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
  return boost::math::quantile(std_normal, p);
}

double gamma_cdf_lower(double shape, double ratex) {
  return boost::math::gamma_p(shape, ratex);
}

}  // namespace censreg
