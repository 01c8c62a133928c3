#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace censreg {

// Weibull in hazard form: f(z) = lambda * gamma * z^(gamma-1) * exp(-lambda * z^gamma),
// h(z) = lambda * gamma * z^(gamma-1). Covariates enter as lambda* = lambda * exp(beta'x).
struct WeibullPH {
  double lambda;
  double gamma;

  WeibullPH(double lambda_, double gamma_) : lambda(lambda_), gamma(gamma_) {
    if (!(lambda > 0.0) || !(gamma > 0.0))
      throw std::invalid_argument("WeibullPH: lambda and gamma must be positive");
  }
};

// Shape/scale form: f(z) = (a/b) (z/b)^(a-1) exp(-(z/b)^a).
struct WeibullShapeScale {
  double shape;  // a
  double scale;  // b

  WeibullShapeScale(double shape_, double scale_) : shape(shape_), scale(scale_) {
    if (!(shape > 0.0) || !(scale > 0.0))
      throw std::invalid_argument("WeibullShapeScale: shape and scale must be positive");
  }
};

// Accelerated-failure-time form: log Z = mu + alpha'x + sigma * W, W standard Gumbel (minimum).
struct WeibullAFT {
  double mu;
  double log_sigma;
  std::vector<double> alpha;

  WeibullAFT(double mu_, double log_sigma_, std::vector<double> alpha_ = {})
      : mu(mu_), log_sigma(log_sigma_), alpha(std::move(alpha_)) {}

  double sigma() const { return std::exp(log_sigma); }
};

WeibullShapeScale ph_to_shapescale(const WeibullPH& p);
WeibullPH shapescale_to_ph(const WeibullShapeScale& p);

// gamma = 1/sigma, lambda = exp(-mu/sigma), beta = -alpha/sigma.
std::pair<WeibullPH, std::vector<double>> aft_to_ph(const WeibullAFT& p);
WeibullAFT ph_to_aft(const WeibullPH& p, const std::vector<double>& beta = {});

// Log-space evaluation; z <= 0 is a domain error (survival times are strictly positive).
double weibull_log_pdf_ph(double z, const WeibullPH& p);
double weibull_pdf_ph(double z, const WeibullPH& p);
double weibull_log_survival_ph(double z, const WeibullPH& p);
double weibull_survival_ph(double z, const WeibullPH& p);
double weibull_hazard_ph(double z, const WeibullPH& p);

enum class Family { Normal, Logistic, Gamma, Weibull };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Parametric density for the censored covariate. Parameter conventions:
//   Normal:   (mean, sd)         sd > 0
//   Logistic: (location, scale)  scale > 0
//   Gamma:    (shape, rate)      both > 0
//   Weibull:  (shape, scale)     both > 0, shape/scale form
class CovariateDensity {
 public:
  CovariateDensity(Family family, std::vector<double> params);

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }

  bool in_support(double x) const;
  double support_lower() const;  // -inf for Normal/Logistic, 0 for Gamma/Weibull

  double pdf(double x) const;      // domain error outside support
  double log_pdf(double x) const;  // domain error outside support
  double cdf(double x) const;      // 0 below support
  double survival(double x) const;

  static std::vector<std::string> param_names(Family f);

 private:
  Family family_;
  std::vector<double> params_;
};

// Standard normal helpers shared by the inference code.
double normal_cdf(double z);
double normal_quantile(double p);

// Regularized incomplete gamma (lower). Used for the Gamma family CDF.
double gamma_cdf_lower(double shape, double ratex);

}  // namespace censreg
