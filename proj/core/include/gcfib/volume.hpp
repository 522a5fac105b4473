#pragma once

#include <functional>

#include "gcfib/quadrature.hpp"

namespace gcfib {

// Parameters of a model projective space over a base field of real dimension
// a (1 = degenerate sphere model, 2, 4, 8) with projective dimension n.
struct ModelSpaceParams {
  int a = 2;
  int n = 1;

  static ModelSpaceParams checked(int a, int n);
  int dim() const { return a * n; }
};

// Polar volume density (sin t)^(an-a) * |1/2 sin 2t|^(a-1) on [0, pi].
double model_volume_form(const ModelSpaceParams& p, double t);

// The fiber-tangent Jacobi determinant factor |1/2 sin 2t|^(a-1).
double jacobi_fiber_factor(int a, double t);

// The double integral of the volume density over 0 <= x <= y <= pi,
// by composite Gauss-Legendre with panel doubling.
double beta_quadrature(const ModelSpaceParams& p, const QuadratureConfig& cfg = {});

// (pi/2) * B(an/2, a/2); must agree with beta_quadrature, which is the check
// that validates this reduction.
double beta_closed_form(const ModelSpaceParams& p);

// Volume of the unit sphere S^N.
double sphere_volume(int n);

// Volume of the model space: (1/pi) * beta * V(S^(an-1)).
double cross_volume(const ModelSpaceParams& p);

// Relative residual of the volume identity pi V^2 = V(S^(an-1)) V J with J
// the quadrature value of the double integral.
double lemma27_residual(const ModelSpaceParams& p, const QuadratureConfig& cfg = {});

struct HolderSides {
  double lhs = 0.0;    // integral of profile^p times the fiber weight
  double bound = 0.0;  // the Hoelder lower bound built from the same profile
};

// Both sides of the order-(an-a) Hoelder bound for a radial profile; equality
// holds exactly for profile = sin. Requires an - a >= 2.
HolderSides holder_sides(const ModelSpaceParams& p, const QuadratureConfig& cfg,
                         const std::function<double(double)>& profile);

double holder_equality_residual(const ModelSpaceParams& p, const QuadratureConfig& cfg = {});

struct BergerMetricReport {
  double s = 1.0;
  double k_min = 1.0;        // s^2
  double k_max = 1.0;        // 4 - 3 s^2
  double fiber_length = 0.0;  // 2 pi s
  double pinch = 1.0;        // k_min / k_max
  double inj_bound = 0.0;    // pi / sqrt(k_max)
  bool inj_less_than_bound = false;
};

// Curvature range and fiber-length arithmetic of the shrunk round metric.
BergerMetricReport berger_report(double s);

}  // namespace gcfib
