#pragma once

#include <functional>
#include <vector>

namespace gcfib {

struct LevMarOptions {
  int max_iters = 200;
  double grad_tol = 1e-13;
  double step_tol = 1e-14;
  double initial_damping = 1e-3;
};

struct LevMarResult {
  std::vector<double> params;
  double cost = 0.0;  // 0.5 * sum of squared residuals
  int iters = 0;
  bool converged = false;
};

using ResidualFn = std::function<void(const std::vector<double>&, std::vector<double>&)>;

// Damped least squares with a numerical Jacobian; small dense problems only.
LevMarResult levenberg_marquardt(const ResidualFn& residuals, std::vector<double> initial,
                                 int residual_count, const LevMarOptions& opts = {});

}  // namespace gcfib
