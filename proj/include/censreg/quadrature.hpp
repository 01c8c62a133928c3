#pragma once

#include "censreg/censoring.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace censreg {

struct IntegrationSettings {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  // Raw integrand values below this are set to 0 before accumulation. Suppresses
  // underflow noise from the far tail of the transformed semi-infinite range.
  double trunc_eps = 1e-100;
  int max_subdivisions = 200;
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  int subdivisions = 0;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule (QUADPACK dqk15).
inline constexpr std::array<double, 8> kGK15Nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};

inline constexpr std::array<double, 8> kGK15WeightsK = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGK15WeightsG = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gauss_kronrod_15(const F& f, double a, double b, double& value, double& error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double result_gauss = kGK15WeightsG[3] * f_center;
  double result_kronrod = kGK15WeightsK[7] * f_center;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kGK15Nodes[i];
    const double sum = f(center - dx) + f(center + dx);
    result_kronrod += kGK15WeightsK[i] * sum;
    if (i % 2 == 1) result_gauss += kGK15WeightsG[i / 2] * sum;
  }
  value = result_kronrod * half;
  error = std::abs((result_kronrod - result_gauss) * half);
}

struct Segment {
  double a, b, value, error;
};

template <class F>
IntegralResult adaptive_gk(const F& f, double a, double b, const IntegrationSettings& s) {
  IntegralResult out;
  if (a == b) return out;

  std::vector<Segment> segments;
  segments.reserve(16);
  Segment root{a, b, 0.0, 0.0};
  gauss_kronrod_15(f, a, b, root.value, root.error);
  segments.push_back(root);

  for (;;) {
    double total = 0.0, total_error = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      total += segments[i].value;
      total_error += segments[i].error;
      if (segments[i].error > segments[worst].error) worst = i;
    }
    out.value = total;
    out.error = total_error;
    if (total_error <= std::max(s.abs_tol, s.rel_tol * std::abs(total))) return out;
    if (out.subdivisions >= s.max_subdivisions) {
      out.converged = false;
      return out;
    }
    const Segment seg = segments[worst];
    const double mid = 0.5 * (seg.a + seg.b);
    if (mid <= seg.a || mid >= seg.b) {  // interval no longer bisectable
      out.converged = false;
      return out;
    }
    Segment left{seg.a, mid, 0.0, 0.0}, right{mid, seg.b, 0.0, 0.0};
    gauss_kronrod_15(f, left.a, left.b, left.value, left.error);
    gauss_kronrod_15(f, right.a, right.b, right.value, right.error);
    segments[worst] = left;
    segments.push_back(right);
    ++out.subdivisions;
  }
}

}  // namespace detail

template <class F>
IntegralResult integrate_interval(const F& g, double low, double high,
                                  const IntegrationSettings& s = {}) {
  auto truncated = [&](double x) {
    const double v = g(x);
    return std::abs(v) < s.trunc_eps ? 0.0 : v;
  };
  return detail::adaptive_gk(truncated, low, high, s);
}

// Integral over (-inf, high] via x = high - t/(1-t), t in [0, 1).
template <class F>
IntegralResult integrate_left_tail(const F& g, double high, const IntegrationSettings& s = {}) {
  auto transformed = [&](double t) {
    const double one_minus = 1.0 - t;
    if (one_minus <= 0.0) return 0.0;
    const double v = g(high - t / one_minus);
    if (std::abs(v) < s.trunc_eps) return 0.0;
    return v / (one_minus * one_minus);
  };
  return detail::adaptive_gk(transformed, 0.0, 1.0, s);
}

// Integral over [low, +inf) via x = low + t/(1-t), t in [0, 1).
template <class F>
IntegralResult integrate_right_tail(const F& g, double low, const IntegrationSettings& s = {}) {
  auto transformed = [&](double t) {
    const double one_minus = 1.0 - t;
    if (one_minus <= 0.0) return 0.0;
    const double v = g(low + t / one_minus);
    if (std::abs(v) < s.trunc_eps) return 0.0;
    return v / (one_minus * one_minus);
  };
  return detail::adaptive_gk(transformed, 0.0, 1.0, s);
}

// Integral of g over the region encoded by v. Exact observations carry no
// region and integrate to 0. `support_lower` clips semi-infinite left regions
// for integrands that vanish below it (e.g. Gamma/Weibull covariate densities).
template <class F>
IntegralResult integrate_censored_region(const F& g, const CensoredValue& v,
                                         const IntegrationSettings& s = {},
                                         double support_lower =
                                             -std::numeric_limits<double>::infinity()) {
  switch (v.kind()) {
    case CensoredValue::Kind::Exact:
      return {};
    case CensoredValue::Kind::Left:
      if (std::isfinite(support_lower)) {
        if (*v.high() <= support_lower) return {};
        return integrate_interval(g, support_lower, *v.high(), s);
      }
      return integrate_left_tail(g, *v.high(), s);
    case CensoredValue::Kind::Right:
      return integrate_right_tail(g, std::max(*v.low(), support_lower), s);
    case CensoredValue::Kind::Interval: {
      const double low = std::max(*v.low(), support_lower);
      if (*v.high() <= low) return {};
      return integrate_interval(g, low, *v.high(), s);
    }
  }
  return {};
}

}  // namespace censreg
