#include "gcfib/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "gcfib/errors.hpp"

namespace gcfib {

namespace {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule make_rule(int n) {
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(3.14159265358979323846 * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P_{n-1}(x).
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(k)] = -x;
    rule.weights[static_cast<std::size_t>(k)] = w;
    rule.nodes[static_cast<std::size_t>(n - 1 - k)] = x;
    rule.weights[static_cast<std::size_t>(n - 1 - k)] = w;
  }
  return rule;
}

const Rule& cached_rule(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

double sum_range(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return sum_range(v, lo, mid) + sum_range(v, mid, hi);
}

}  // namespace

const std::vector<double>& gauss_nodes(int order) {
  if (order < 2) throw InvalidParams("quadrature order must be at least 2");
  return cached_rule(order).nodes;
}

const std::vector<double>& gauss_weights(int order) {
  if (order < 2) throw InvalidParams("quadrature order must be at least 2");
  return cached_rule(order).weights;
}

double pairwise_sum(const std::vector<double>& terms) {
  if (terms.empty()) return 0.0;
  return sum_range(terms, 0, terms.size());
}

double integrate(const std::function<double(double)>& f, const std::vector<double>& breaks,
                 int panels, int order) {
  if (breaks.size() < 2) throw InvalidParams("need at least two breakpoints");
  if (panels < 1) throw InvalidParams("panels must be positive");
  const std::vector<double>& xs = gauss_nodes(order);
  const std::vector<double>& ws = gauss_weights(order);

  std::vector<double> terms;
  terms.reserve((breaks.size() - 1) * static_cast<std::size_t>(panels) * xs.size());
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    double a = breaks[s], b = breaks[s + 1];
    if (!(b > a)) continue;  // empty or inverted segment
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      double mid = a + (p + 0.5) * h;
      double half = 0.5 * h;
      for (std::size_t k = 0; k < xs.size(); ++k)
        terms.push_back(half * ws[k] * f(mid + half * xs[k]));
    }
  }
  return pairwise_sum(terms);
}

double integrate_adaptive(const std::function<double(double)>& f,
                          const std::vector<double>& breaks, const QuadratureConfig& cfg) {
  if (cfg.panels < 1 || cfg.nodes_per_panel < 2 || !(cfg.rel_tol > 0.0))
    throw InvalidParams("bad quadrature config");
  double prev = integrate(f, breaks, cfg.panels, cfg.nodes_per_panel);
  int panels = cfg.panels;
  for (int round = 0; round < 3; ++round) {
    panels *= 2;
    double cur = integrate(f, breaks, panels, cfg.nodes_per_panel);
    double denom = std::max(std::fabs(cur), 1e-300);
    if (std::fabs(cur - prev) / denom <= cfg.rel_tol) return cur;
    prev = cur;
  }
  throw NoConvergence("panel doubling did not reach the requested tolerance");
}

}  // namespace gcfib
