#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace censreg {

using Objective = std::function<double(const std::vector<double>&)>;

// Per-coordinate reparametrization for maximize(): Log coordinates are
// optimized unconstrained on the log scale and reported back on the natural
// scale, which keeps positive parameters positive without penalties.
enum class Transform { Identity, Log };

struct OptimResult {
  std::vector<double> argmax;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  long function_evals = 0;
  std::string message;
};

struct MaximizeSettings {
  double value_tol = 1e-10;    // simplex value spread, relative to 1 + |f|
  int max_iterations = 0;      // 0 -> 400 * dimension
};

// Nelder-Mead on transformed coordinates with one restart from the incumbent.
// Throws std::invalid_argument when f is not finite at x0 (after transform).
OptimResult maximize(const Objective& f, const std::vector<double>& x0,
                     const std::vector<Transform>& transforms,
                     const MaximizeSettings& settings = {});

struct HessianSettings {
  int richardson_steps = 4;   // >= 2
  double initial_step = 1e-4; // relative step
};

// Richardson-extrapolated central differences.
std::vector<double> num_gradient(const Objective& f, const std::vector<double>& x,
                                 const HessianSettings& settings = {});
Eigen::MatrixXd num_hessian(const Objective& f, const std::vector<double>& x,
                            const HessianSettings& settings = {});

struct Covariance {
  Eigen::MatrixXd matrix;
  bool available = false;
};

// Inverse of the negated Hessian (observed Fisher information). Unavailable
// when the negated Hessian is not positive definite.
Covariance covariance_from_hessian(const Eigen::MatrixXd& hessian);

// A few Newton steps from an incumbent maximizer, using Richardson
// derivatives. Tightens Nelder-Mead output to gradient-level accuracy.
OptimResult polish_maximum(const Objective& f, const std::vector<double>& x,
                           const HessianSettings& settings = {}, int max_steps = 4);

}  // namespace censreg
