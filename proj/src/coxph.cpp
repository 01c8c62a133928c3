#include "censreg/coxph.hpp"

#include "censreg/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace censreg {

namespace {

struct PartialLik {
  double value = 0.0;
  Eigen::VectorXd score;
  Eigen::MatrixXd info;
};

// One pass over distinct times in descending order, accumulating risk-set sums
// S0, S1, S2. Subjects tied with an event time are at risk at that time.
PartialLik breslow(const Eigen::VectorXd& beta, std::span<const double> time,
                   std::span<const int> event, const Eigen::MatrixXd& x,
                   const std::vector<int>& order, bool with_derivatives) {
  const int n = static_cast<int>(time.size());
  const int d = static_cast<int>(x.cols());
  PartialLik out;
  out.score = Eigen::VectorXd::Zero(d);
  out.info = Eigen::MatrixXd::Zero(d, d);

  Eigen::VectorXd eta(n);
  for (int i = 0; i < n; ++i) eta(i) = x.row(i) * beta;
  const double eta_shift = eta.mean();  // e^eta overflow guard; cancels in the ratio terms

  double s0 = 0.0;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(d, d);

  int k = 0;
  while (k < n) {
    const double t = time[order[k]];
    int block_end = k;
    while (block_end < n && time[order[block_end]] == t) ++block_end;
    for (int idx = k; idx < block_end; ++idx) {
      const int i = order[idx];
      const double w = std::exp(eta(i) - eta_shift);
      s0 += w;
      if (with_derivatives) {
        s1 += w * x.row(i).transpose();
        s2 += w * x.row(i).transpose() * x.row(i);
      }
    }
    for (int idx = k; idx < block_end; ++idx) {
      const int i = order[idx];
      if (event[i] != 1) continue;
      out.value += (eta(i) - eta_shift) - std::log(s0);
      if (with_derivatives) {
        const Eigen::VectorXd mean = s1 / s0;
        out.score += x.row(i).transpose() - mean;
        out.info += s2 / s0 - mean * mean.transpose();
      }
    }
    k = block_end;
  }
  return out;
}

}  // namespace

CoxFit fit_cox(std::span<const double> time, std::span<const int> event,
               const Eigen::MatrixXd& covariates, std::vector<std::string> names) {
  const int n = static_cast<int>(time.size());
  const int d = static_cast<int>(covariates.cols());
  if (static_cast<int>(event.size()) != n || covariates.rows() != n)
    throw std::invalid_argument("fit_cox: inconsistent input sizes");

  CoxFit fit;
  fit.n_events = std::accumulate(event.begin(), event.end(), 0);
  if (fit.n_events < 1) throw std::invalid_argument("fit_cox: no events in the data");
  if (names.empty())
    for (int j = 0; j < d; ++j) names.push_back("x" + std::to_string(j + 1));
  fit.names = std::move(names);

  // descending time so the risk set grows as we walk forward
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return time[a] > time[b]; });

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d);
  PartialLik current = breslow(beta, time, event, covariates, order, true);
  const int max_iter = 50;
  bool singular = false;
  for (int iter = 1; iter <= max_iter; ++iter) {
    fit.iterations = iter;
    if (current.score.cwiseAbs().maxCoeff() < 1e-8) {
      fit.converged = true;
      break;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(current.info);
    Eigen::VectorXd step = ldlt.solve(current.score);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      singular = true;
      break;
    }
    double scale = 1.0;
    PartialLik next;
    for (int halving = 0; halving < 20; ++halving) {
      next = breslow(beta + scale * step, time, event, covariates, order, true);
      if (next.value >= current.value - 1e-12 * (1.0 + std::abs(current.value))) break;
      scale *= 0.5;
    }
    beta += scale * step;
    current = next;
  }

  fit.beta.assign(beta.data(), beta.data() + d);
  fit.partial_loglik = current.value;
  fit.std_errors.assign(d, std::numeric_limits<double>::infinity());
  fit.p_values.assign(d, std::numeric_limits<double>::quiet_NaN());

  Eigen::LLT<Eigen::MatrixXd> llt(current.info);
  if (!singular && llt.info() == Eigen::Success) {
    const Eigen::MatrixXd cov =
        llt.solve(Eigen::MatrixXd::Identity(d, d));
    if (cov.allFinite()) {
      fit.covariance_ok = true;
      for (int j = 0; j < d; ++j) {
        fit.std_errors[j] = std::sqrt(cov(j, j));
        if (fit.std_errors[j] > 0.0)
          fit.p_values[j] = 2.0 * normal_cdf(-std::abs(fit.beta[j] / fit.std_errors[j]));
      }
    }
  }
  return fit;
}

}  // namespace censreg
