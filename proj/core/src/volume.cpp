#include "gcfib/volume.hpp"

#include <cmath>

#include "gcfib/errors.hpp"

namespace gcfib {

namespace {

constexpr double kPi = 3.14159265358979323846;

double powi(double x, int n) {
  double r = 1.0, base = x;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) r *= base;
    base *= base;
  }
  return r;
}

// Integral over 0 <= x <= y <= pi of g(y - x), with g allowed a kink at
// pi/2 (the fiber factor's |cos|). Inner segments split at the kink; the
// outer integrand inherits a kink at x = pi/2.
double shifted_double_integral(const std::function<double(double)>& g,
                               const QuadratureConfig& cfg) {
  auto outer = [&](int panels) {
    auto outer_fn = [&](double x) {
      std::vector<double> inner_breaks{x};
      if (x + 0.5 * kPi < kPi) inner_breaks.push_back(x + 0.5 * kPi);
      inner_breaks.push_back(kPi);
      return integrate([&](double y) { return g(y - x); }, inner_breaks, panels,
                       cfg.nodes_per_panel);
    };
    return integrate(outer_fn, {0.0, 0.5 * kPi, kPi}, panels, cfg.nodes_per_panel);
  };

  if (cfg.panels < 1 || cfg.nodes_per_panel < 2 || !(cfg.rel_tol > 0.0))
    throw InvalidParams("bad quadrature config");
  int panels = cfg.panels;
  double prev = outer(panels);
  for (int round = 0; round < 3; ++round) {
    panels *= 2;
    double cur = outer(panels);
    double denom = std::max(std::fabs(cur), 1e-300);
    if (std::fabs(cur - prev) / denom <= cfg.rel_tol) return cur;
    prev = cur;
  }
  throw NoConvergence("panel doubling did not reach the requested tolerance");
}

}  // namespace

ModelSpaceParams ModelSpaceParams::checked(int a, int n) {
  if (a != 1 && a != 2 && a != 4 && a != 8) throw InvalidParams("base dimension must be 1, 2, 4, or 8");
  if (n < 1) throw InvalidParams("projective dimension must be positive");
  if (a == 8 && n != 2) throw InvalidParams("the octonionic model exists only for n = 2");
  return {a, n};
}

double model_volume_form(const ModelSpaceParams& p, double t) {
  return powi(std::sin(t), p.a * p.n - p.a) * jacobi_fiber_factor(p.a, t);
}

double jacobi_fiber_factor(int a, double t) {
  if (a == 1) return 1.0;  // no fiber-tangent directions
  return powi(std::fabs(0.5 * std::sin(2.0 * t)), a - 1);
}

double beta_quadrature(const ModelSpaceParams& p, const QuadratureConfig& cfg) {
  return shifted_double_integral([&](double t) { return model_volume_form(p, t); }, cfg);
}

double beta_closed_form(const ModelSpaceParams& p) {
  double x = 0.5 * p.a * p.n, y = 0.5 * p.a;
  return 0.5 * kPi * std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double sphere_volume(int n) {
  if (n < 1) throw InvalidParams("sphere dimension must be positive");
  return 2.0 * std::pow(kPi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

double cross_volume(const ModelSpaceParams& p) {
  return beta_closed_form(p) * sphere_volume(p.dim() - 1) / kPi;
}

double lemma27_residual(const ModelSpaceParams& p, const QuadratureConfig& cfg) {
  double v = cross_volume(p);
  double vs = sphere_volume(p.dim() - 1);
  double j = beta_quadrature(p, cfg);
  double lhs = kPi * v * v;
  return std::fabs(lhs - vs * v * j) / lhs;
}

HolderSides holder_sides(const ModelSpaceParams& p, const QuadratureConfig& cfg,
                         const std::function<double(double)>& profile) {
  int order = p.a * p.n - p.a;
  if (order < 2) throw InvalidParams("Hoelder order must be at least 2");

  auto weight = [&](double t) { return jacobi_fiber_factor(p.a, t); };
  double lhs = shifted_double_integral(
      [&](double t) { return powi(profile(t), order) * weight(t); }, cfg);
  double mixed = shifted_double_integral(
      [&](double t) { return profile(t) * powi(std::sin(t), order - 1) * weight(t); }, cfg);
  double denom = shifted_double_integral(
      [&](double t) { return powi(std::sin(t), order) * weight(t); }, cfg);

  HolderSides sides;
  sides.lhs = lhs;
  sides.bound = powi(mixed, order) / powi(denom, order - 1);
  return sides;
}

double holder_equality_residual(const ModelSpaceParams& p, const QuadratureConfig& cfg) {
  HolderSides sides = holder_sides(p, cfg, [](double t) { return std::sin(t); });
  return std::fabs(sides.lhs - sides.bound) / std::max(std::fabs(sides.lhs), 1e-300);
}

BergerMetricReport berger_report(double s) {
  if (!(s > 0.0) || !(s <= 1.0)) throw InvalidParams("shrink factor must be in (0, 1]");
  BergerMetricReport rep;
  rep.s = s;
  rep.k_min = s * s;
  rep.k_max = 4.0 - 3.0 * s * s;
  rep.fiber_length = 2.0 * kPi * s;
  rep.pinch = rep.k_min / rep.k_max;
  rep.inj_bound = kPi / std::sqrt(rep.k_max);
  rep.inj_less_than_bound = kPi * s < rep.inj_bound;
  return rep;
}

}  // namespace gcfib
