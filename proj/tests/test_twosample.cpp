#include <catch2/catch_amalgamated.hpp>

#include "censreg/rng.hpp"
#include "censreg/twosample.hpp"

#include <cmath>

using namespace censreg;

namespace {

std::vector<CensoredValue> normal_sample(Rng& rng, int n, double mu, double sigma, double prop) {
  const double lod = prop > 0.0 ? mu + sigma * normal_quantile(prop)
                                : -std::numeric_limits<double>::infinity();
  std::vector<CensoredValue> out;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(mu, sigma);
    out.push_back(x < lod ? CensoredValue::left_censored(lod) : CensoredValue::exact(x));
  }
  return out;
}

}  // namespace

TEST_CASE("mean difference recovers the true delta", "[twosample]") {
  Rng rng(99);
  const auto s1 = normal_sample(rng, 800, -1.5, 1.5, 0.05);
  const auto s2 = normal_sample(rng, 800, -3.5, 1.5, 0.35);
  const MeanDiffFit fit = normal_mean_diff(s1, s2);
  CHECK(std::abs(fit.delta.estimate - 2.0) < 3.0 * fit.delta.std_error);
  CHECK(fit.delta.estimate == fit.mu1.estimate - fit.mu2.estimate);  // exact identity
  const double combined = std::sqrt(fit.mu1.std_error * fit.mu1.std_error +
                                    fit.mu2.std_error * fit.mu2.std_error);
  CHECK(fit.delta.std_error == combined);
  CHECK(fit.delta.p_value < 1e-10);
}

TEST_CASE("identical samples give delta zero with p near one", "[twosample]") {
  Rng rng(5);
  const auto s = normal_sample(rng, 200, 0.3, 1.0, 0.1);
  const MeanDiffFit fit = normal_mean_diff(s, s);
  CHECK(fit.delta.estimate == 0.0);
  CHECK(fit.delta.p_value == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("shifting one sample shifts delta by the same constant", "[twosample]") {
  Rng rng(17);
  std::vector<CensoredValue> s1;
  for (int i = 0; i < 300; ++i) s1.push_back(CensoredValue::exact(rng.normal(0.5, 1.2)));
  std::vector<CensoredValue> s2;
  for (const auto& v : s1) s2.push_back(CensoredValue::exact(v.value() + 1.0));

  const MeanDiffFit fit = normal_mean_diff(s1, s2);
  CHECK(fit.delta.estimate == Catch::Approx(-1.0).margin(1e-6));

  // translation equivariance on sample 1
  std::vector<CensoredValue> s1_shifted;
  for (const auto& v : s1) s1_shifted.push_back(CensoredValue::exact(v.value() + 2.5));
  const MeanDiffFit shifted = normal_mean_diff(s1_shifted, s2);
  CHECK(shifted.mu1.estimate == Catch::Approx(fit.mu1.estimate + 2.5).margin(1e-6));
  CHECK(shifted.delta.estimate == Catch::Approx(fit.delta.estimate + 2.5).margin(1e-6));
}

TEST_CASE("swapping the samples negates delta and keeps its p-value", "[twosample]") {
  Rng rng(23);
  const auto s1 = normal_sample(rng, 250, -1.0, 1.4, 0.15);
  const auto s2 = normal_sample(rng, 250, -2.0, 1.1, 0.1);
  const MeanDiffFit ab = normal_mean_diff(s1, s2);
  const MeanDiffFit ba = normal_mean_diff(s2, s1);
  CHECK(ab.delta.estimate == Catch::Approx(-ba.delta.estimate).margin(1e-9));
  CHECK(ab.delta.p_value == Catch::Approx(ba.delta.p_value).margin(1e-12));
}
