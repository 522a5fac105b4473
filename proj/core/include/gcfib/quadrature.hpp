#pragma once

#include <functional>
#include <vector>

namespace gcfib {

struct QuadratureConfig {
  int panels = 64;
  int nodes_per_panel = 8;
  double rel_tol = 1e-10;
};

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
const std::vector<double>& gauss_nodes(int order);
const std::vector<double>& gauss_weights(int order);

double pairwise_sum(const std::vector<double>& terms);

// Composite Gauss-Legendre over [breaks.front(), breaks.back()] with the
// given interior breakpoints, each segment split into `panels` equal panels.
double integrate(const std::function<double(double)>& f, const std::vector<double>& breaks,
                 int panels, int order);

// Panel-doubling wrapper around integrate(); throws NoConvergence if the
// doubling comparison never reaches cfg.rel_tol.
double integrate_adaptive(const std::function<double(double)>& f,
                          const std::vector<double>& breaks, const QuadratureConfig& cfg);

}  // namespace gcfib
