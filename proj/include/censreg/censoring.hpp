#pragma once

#include "censreg/distributions.hpp"

#include <optional>
#include <string>

namespace censreg {

// One possibly-censored scalar measurement. Encodes the interval2 convention:
//   (x, x)    exact
//   (NA, u)   left-censored at u
//   (l, NA)   right-censored at l
//   (l, u)    interval-censored, l < u
class CensoredValue {
 public:
  enum class Kind { Exact, Left, Right, Interval };

  static CensoredValue exact(double x) { return CensoredValue(x, x); }
  static CensoredValue left_censored(double upper) { return CensoredValue(std::nullopt, upper); }
  static CensoredValue right_censored(double lower) { return CensoredValue(lower, std::nullopt); }
  static CensoredValue interval(double lower, double upper) {
    if (!(lower < upper))
      throw std::invalid_argument("CensoredValue::interval requires lower < upper");
    return CensoredValue(lower, upper);
  }

  Kind kind() const {
    if (!low_) return Kind::Left;
    if (!high_) return Kind::Right;
    return *low_ == *high_ ? Kind::Exact : Kind::Interval;
  }

  bool is_exact() const { return kind() == Kind::Exact; }
  double value() const {
    if (!is_exact()) throw std::logic_error("CensoredValue::value on a censored observation");
    return *low_;
  }

  const std::optional<double>& low() const { return low_; }
  const std::optional<double>& high() const { return high_; }

  // Finite stand-in used for imputation-based initial values and comparison methods:
  // left -> bound, right -> bound, interval -> midpoint.
  double finite_bound() const {
    switch (kind()) {
      case Kind::Exact: return *low_;
      case Kind::Left: return *high_;
      case Kind::Right: return *low_;
      case Kind::Interval: return 0.5 * (*low_ + *high_);
    }
    return 0.0;
  }

 private:
  CensoredValue(std::optional<double> low, std::optional<double> high)
      : low_(low), high_(high) {
    if (!low_ && !high_)
      throw std::invalid_argument("CensoredValue: at least one bound must be present");
  }

  std::optional<double> low_;
  std::optional<double> high_;
};

// Parses the two-column interval2 text coding. Missing marker is the literal
// token "NA" (case-sensitive) or an empty field. Rejects (NA, NA) and l > u;
// l == u parses as exact.
CensoredValue parse_interval2(const std::string& low_text, const std::string& high_text);

// Probability mass of [low, high] under d, evaluated from whichever tail is
// better conditioned.
double interval_mass(const CovariateDensity& d, double low, double high);

// Log-likelihood term of one censored observation:
//   exact    log f(x)
//   left     log F(high)
//   right    log S(low)
//   interval log(F(high) - F(low))
// Returns -inf (a sentinel, not an error) when the region carries no mass.
double loglik_contribution(const CensoredValue& v, const CovariateDensity& d);

}  // namespace censreg
