#include "censreg/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace censreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> to_internal(const std::vector<double>& x,
                                const std::vector<Transform>& transforms) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (transforms[i] == Transform::Log) {
      if (!(x[i] > 0.0)) {
        std::ostringstream msg;
        msg << "maximize: coordinate " << i << " requires a positive start (got " << x[i] << ")";
        throw std::invalid_argument(msg.str());
      }
      out[i] = std::log(x[i]);
    } else {
      out[i] = x[i];
    }
  }
  return out;
}

std::vector<double> to_natural(const std::vector<double>& x,
                               const std::vector<Transform>& transforms) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = transforms[i] == Transform::Log ? std::exp(x[i]) : x[i];
  return out;
}

struct NelderMeadOutcome {
  std::vector<double> best_x;
  double best_f = kInf;  // minimized value
  bool converged = false;
  int iterations = 0;
  long evals = 0;
};

// Standard Nelder-Mead minimization; infeasible points evaluate to +inf.
NelderMeadOutcome nelder_mead_min(const std::function<double(const std::vector<double>&)>& f,
                                  const std::vector<double>& x0, double value_tol,
                                  int max_iterations) {
  const int n = static_cast<int>(x0.size());
  NelderMeadOutcome out;

  std::vector<std::vector<double>> vertex(n + 1, x0);
  for (int i = 0; i < n; ++i)
    vertex[i + 1][i] += x0[i] != 0.0 ? 0.05 * std::abs(x0[i]) : 0.00025;

  std::vector<double> fv(n + 1);
  for (int i = 0; i <= n; ++i) {
    fv[i] = f(vertex[i]);
    ++out.evals;
  }

  std::vector<int> order(n + 1);
  auto sort_vertices = [&]() {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
  };

  for (int iter = 0; iter < max_iterations; ++iter) {
    sort_vertices();
    const int best = order[0], worst = order[n];
    out.iterations = iter;
    if (std::isfinite(fv[best]) && std::isfinite(fv[worst]) &&
        fv[worst] - fv[best] < value_tol * (1.0 + std::abs(fv[best]))) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (int k = 0; k <= n; ++k) {
      if (k == worst) continue;
      for (int i = 0; i < n; ++i) centroid[i] += vertex[k][i];
    }
    for (int i = 0; i < n; ++i) centroid[i] /= n;

    auto point_along = [&](double scale) {
      std::vector<double> p(n);
      for (int i = 0; i < n; ++i) p[i] = centroid[i] + scale * (centroid[i] - vertex[worst][i]);
      return p;
    };

    const std::vector<double> reflected = point_along(1.0);
    const double fr = f(reflected);
    ++out.evals;

    if (fr < fv[best]) {
      const std::vector<double> expanded = point_along(2.0);
      const double fe = f(expanded);
      ++out.evals;
      if (fe < fr) {
        vertex[worst] = expanded;
        fv[worst] = fe;
      } else {
        vertex[worst] = reflected;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[order[n - 1]]) {
      vertex[worst] = reflected;
      fv[worst] = fr;
      continue;
    }

    bool shrink = false;
    if (fr < fv[worst]) {  // outside contraction
      const std::vector<double> contracted = point_along(0.5);
      const double fc = f(contracted);
      ++out.evals;
      if (fc <= fr) {
        vertex[worst] = contracted;
        fv[worst] = fc;
      } else {
        shrink = true;
      }
    } else {  // inside contraction
      const std::vector<double> contracted = point_along(-0.5);
      const double fc = f(contracted);
      ++out.evals;
      if (fc < fv[worst]) {
        vertex[worst] = contracted;
        fv[worst] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (int k = 0; k <= n; ++k) {
        if (k == best) continue;
        for (int i = 0; i < n; ++i)
          vertex[k][i] = vertex[best][i] + 0.5 * (vertex[k][i] - vertex[best][i]);
        fv[k] = f(vertex[k]);
        ++out.evals;
      }
    }
  }

  sort_vertices();
  out.best_x = vertex[order[0]];
  out.best_f = fv[order[0]];
  return out;
}

// Richardson table: estimates[k] computed with step h / 2^k, truncation error O(h^2).
double richardson(const std::vector<double>& estimates) {
  std::vector<double> row = estimates;
  const std::size_t r = row.size();
  double factor = 4.0;
  for (std::size_t m = 1; m < r; ++m) {
    for (std::size_t k = r - 1; k >= m; --k)
      row[k] = (factor * row[k] - row[k - 1]) / (factor - 1.0);
    factor *= 4.0;
  }
  return row[r - 1];
}

double rel_step(double x, double initial_step) {
  return initial_step * std::max(1.0, std::abs(x));
}

}  // namespace

OptimResult maximize(const Objective& f, const std::vector<double>& x0,
                     const std::vector<Transform>& transforms,
                     const MaximizeSettings& settings) {
  if (x0.size() != transforms.size())
    throw std::invalid_argument("maximize: transforms size must match x0");
  const int n = static_cast<int>(x0.size());
  const int max_iter = settings.max_iterations > 0 ? settings.max_iterations : 400 * n;

  long evals = 0;
  auto internal_objective = [&](const std::vector<double>& xt) {
    const double v = f(to_natural(xt, transforms));
    return std::isnan(v) ? kInf : -v;
  };

  const std::vector<double> x0t = to_internal(x0, transforms);
  const double f0 = internal_objective(x0t);
  ++evals;
  if (!std::isfinite(f0)) {
    std::ostringstream msg;
    msg << "maximize: objective not finite at the initial point (";
    for (int i = 0; i < n; ++i) msg << (i ? ", " : "") << "x" << i << "=" << x0[i];
    msg << ")";
    throw std::invalid_argument(msg.str());
  }

  NelderMeadOutcome first = nelder_mead_min(internal_objective, x0t, settings.value_tol, max_iter);
  NelderMeadOutcome second =
      nelder_mead_min(internal_objective, first.best_x, settings.value_tol, max_iter);
  const NelderMeadOutcome& best = second.best_f <= first.best_f ? second : first;

  OptimResult out;
  out.argmax = to_natural(best.best_x, transforms);
  out.value = -best.best_f;
  out.converged = second.converged && std::isfinite(best.best_f);
  out.iterations = first.iterations + second.iterations;
  out.function_evals = evals + first.evals + second.evals;
  if (!out.converged) out.message = "Nelder-Mead did not meet the value-spread tolerance";
  return out;
}

std::vector<double> num_gradient(const Objective& f, const std::vector<double>& x,
                                 const HessianSettings& settings) {
  if (settings.richardson_steps < 2)
    throw std::invalid_argument("HessianSettings: richardson_steps must be >= 2");
  const std::size_t n = x.size();
  const int r = settings.richardson_steps;
  std::vector<double> grad(n);
  std::vector<double> point = x;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> estimates(r);
    double h = rel_step(x[i], settings.initial_step);
    for (int k = 0; k < r; ++k) {
      point[i] = x[i] + h;
      const double fp = f(point);
      point[i] = x[i] - h;
      const double fm = f(point);
      point[i] = x[i];
      estimates[k] = (fp - fm) / (2.0 * h);
      h *= 0.5;
    }
    grad[i] = richardson(estimates);
  }
  return grad;
}

Eigen::MatrixXd num_hessian(const Objective& f, const std::vector<double>& x,
                            const HessianSettings& settings) {
  if (settings.richardson_steps < 2)
    throw std::invalid_argument("HessianSettings: richardson_steps must be >= 2");
  const std::size_t n = x.size();
  const int r = settings.richardson_steps;
  Eigen::MatrixXd hess(n, n);
  std::vector<double> point = x;
  const double f_center = f(x);

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> estimates(r);
    double h = rel_step(x[i], settings.initial_step);
    for (int k = 0; k < r; ++k) {
      point[i] = x[i] + h;
      const double fp = f(point);
      point[i] = x[i] - h;
      const double fm = f(point);
      point[i] = x[i];
      estimates[k] = (fp - 2.0 * f_center + fm) / (h * h);
      h *= 0.5;
    }
    hess(i, i) = richardson(estimates);
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<double> estimates(r);
      double hi = rel_step(x[i], settings.initial_step);
      double hj = rel_step(x[j], settings.initial_step);
      for (int k = 0; k < r; ++k) {
        point[i] = x[i] + hi;
        point[j] = x[j] + hj;
        const double fpp = f(point);
        point[j] = x[j] - hj;
        const double fpm = f(point);
        point[i] = x[i] - hi;
        point[j] = x[j] + hj;
        const double fmp = f(point);
        point[j] = x[j] - hj;
        const double fmm = f(point);
        point[i] = x[i];
        point[j] = x[j];
        estimates[k] = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
        hi *= 0.5;
        hj *= 0.5;
      }
      const double v = richardson(estimates);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

Covariance covariance_from_hessian(const Eigen::MatrixXd& hessian) {
  Covariance out;
  const Eigen::MatrixXd info = -hessian;
  if (!info.allFinite()) return out;
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() != Eigen::Success) return out;
  out.matrix = llt.solve(Eigen::MatrixXd::Identity(info.rows(), info.cols()));
  out.available = out.matrix.allFinite();
  return out;
}

OptimResult polish_maximum(const Objective& f, const std::vector<double>& x,
                           const HessianSettings& settings, int max_steps) {
  OptimResult out;
  out.argmax = x;
  out.value = f(x);
  out.converged = true;
  const std::size_t n = x.size();

  for (int step = 0; step < max_steps; ++step) {
    const std::vector<double> grad = num_gradient(f, out.argmax, settings);
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    if (gmax < 1e-7 * (1.0 + std::abs(out.value))) break;

    const Eigen::MatrixXd hess = num_hessian(f, out.argmax, settings);
    if (!hess.allFinite()) break;
    Eigen::VectorXd g(n);
    for (std::size_t i = 0; i < n; ++i) g(i) = grad[i];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(hess);
    if (!lu.isInvertible()) break;
    const Eigen::VectorXd direction = -lu.solve(g);

    double t = 1.0;
    bool accepted = false;
    while (t > 1e-4) {
      std::vector<double> candidate(n);
      for (std::size_t i = 0; i < n; ++i) candidate[i] = out.argmax[i] + t * direction(i);
      const double fc = f(candidate);
      if (std::isfinite(fc) && fc >= out.value - 1e-12 * (1.0 + std::abs(out.value))) {
        if (fc > out.value) {
          out.argmax = candidate;
          out.value = fc;
          accepted = true;
        } else if (t == 1.0) {
          // flat to within noise: take the Newton point, it centres the simplex
          out.argmax = candidate;
          out.value = fc;
          accepted = true;
        }
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return out;
}

}  // namespace censreg
