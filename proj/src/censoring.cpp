#include "censreg/censoring.hpp"

#include <cstdlib>
#include <limits>

namespace censreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_missing(const std::string& token) { return token.empty() || token == "NA"; }

double parse_number(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::invalid_argument("interval2: not a number: '" + token + "'");
  return v;
}

}  // namespace

CensoredValue parse_interval2(const std::string& low_text, const std::string& high_text) {
  const bool low_na = is_missing(low_text);
  const bool high_na = is_missing(high_text);
  if (low_na && high_na)
    throw std::invalid_argument("interval2: both bounds missing (NA, NA)");
  if (low_na) return CensoredValue::left_censored(parse_number(high_text));
  if (high_na) return CensoredValue::right_censored(parse_number(low_text));
  const double low = parse_number(low_text);
  const double high = parse_number(high_text);
  if (low > high)
    throw std::invalid_argument("interval2: lower bound exceeds upper bound");
  if (low == high) return CensoredValue::exact(low);
  return CensoredValue::interval(low, high);
}

double interval_mass(const CovariateDensity& d, double low, double high) {
  // In the upper tail F(high) - F(low) cancels; S(low) - S(high) does not.
  if (d.cdf(low) + d.cdf(high) > 1.0) return d.survival(low) - d.survival(high);
  return d.cdf(high) - d.cdf(low);
}

double loglik_contribution(const CensoredValue& v, const CovariateDensity& d) {
  switch (v.kind()) {
    case CensoredValue::Kind::Exact: {
      const double x = v.value();
      if (!d.in_support(x)) return -kInf;
      return d.log_pdf(x);
    }
    case CensoredValue::Kind::Left: {
      const double mass = d.cdf(*v.high());
      return mass > 0.0 ? std::log(mass) : -kInf;
    }
    case CensoredValue::Kind::Right: {
      const double mass = d.survival(*v.low());
      return mass > 0.0 ? std::log(mass) : -kInf;
    }
    case CensoredValue::Kind::Interval: {
      const double mass = interval_mass(d, *v.low(), *v.high());
      return mass > 0.0 ? std::log(mass) : -kInf;
    }
  }
  return -kInf;
}

}  // namespace censreg
