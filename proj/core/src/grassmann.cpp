#include "gcfib/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcfib/levmar.hpp"
#include "gcfib/rng.hpp"

namespace gcfib {

const Vec3& factor_point(const SurfacePoint& p, DomainFactor f) {
  return f == DomainFactor::Minus ? p.xi_minus : p.xi_plus;
}

DomainFactor other_factor(DomainFactor f) {
  return f == DomainFactor::Minus ? DomainFactor::Plus : DomainFactor::Minus;
}

std::vector<SurfacePoint> base_surface(const GreatCircleFibration& f, int sample_count,
                                       std::uint64_t seed) {
  if (sample_count < 4) throw InvalidParams("need at least 4 surface samples");
  if (f.kind == GreatCircleFibration::Kind::SpecialBasis && f.phi &&
      eig2_discriminant(f.phi->f) >= -1e-12)
    throw InvalidParams("not a fibration: phi map has real eigenvalues");

  // Chart for the lambda parameters, available when the structure is block
  // diagonal in its own basis (always true for special-basis input).
  bool have_chart = true;
  PhiMap chart = PhiMap::unchecked(Mat2{});
  try {
    chart = f.phi ? *f.phi : structure_to_phi(f.structure);
  } catch (const Error&) {
    have_chart = false;
  }
  Mat4 basis_inv = f.basis.inverse();

  std::vector<SurfacePoint> out;
  std::vector<OrientedPlane2> kept;
  out.reserve(static_cast<std::size_t>(sample_count));
  long budget = 60L * sample_count;
  for (long attempt = 0; attempt < budget && static_cast<int>(out.size()) < sample_count;
       ++attempt) {
    Vec4 base = s3_lattice_point(static_cast<int>(attempt), sample_count);
    Rng rng(seed, static_cast<std::uint64_t>(attempt));
    Vec4 x = base + 0.05 * Vec4{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    x = normalized(x);

    OrientedPlane2 plane = fiber_through(f, x);
    bool dup = false;
    for (const OrientedPlane2& k : kept)
      if (planes_coincide(plane, k, 1e-8)) {
        dup = true;
        break;
      }
    if (dup) continue;

    SurfacePoint sp;
    if (have_chart) {
      Vec4 u = basis_inv.apply(plane.u);
      Vec4 v = basis_inv.apply(plane.v);
      double det = u[0] * v[1] - v[0] * u[1];
      if (std::fabs(det) < 1e-10) continue;  // chartless fiber, skip
      double alpha = v[1] / det, beta = -u[1] / det;
      sp.lambda3 = alpha * u[2] + beta * v[2];
      sp.lambda4 = alpha * u[3] + beta * v[3];
    }
    BivectorSplit split = plucker_split(plane);
    sp.xi_minus = split.xi_minus;
    sp.xi_plus = split.xi_plus;
    kept.push_back(plane);
    out.push_back(sp);
  }
  return out;
}

double factor_spread(const std::vector<SurfacePoint>& pts, DomainFactor f) {
  if (pts.empty()) return 0.0;
  double spread = 0.0;
  for (const SurfacePoint& p : pts)
    spread = std::max(spread, sphere_distance(factor_point(p, f), factor_point(pts.front(), f)));
  return spread;
}

namespace {

struct RatioScan {
  bool single_valued = true;
  double max_ratio = 0.0;
  int wi = -1, wj = -1;
  bool any_pair = false;
};

RatioScan scan_pairs(const std::vector<SurfacePoint>& pts, DomainFactor dom) {
  RatioScan rs;
  DomainFactor img = other_factor(dom);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double dd = sphere_distance(factor_point(pts[i], dom), factor_point(pts[j], dom));
      double di = sphere_distance(factor_point(pts[i], img), factor_point(pts[j], img));
      if (dd < 1e-8 && di > 1e-6) rs.single_valued = false;
      if (dd < 1e-6) continue;
      rs.any_pair = true;
      double ratio = di / dd;
      if (ratio > rs.max_ratio) {
        rs.max_ratio = ratio;
        rs.wi = static_cast<int>(i);
        rs.wj = static_cast<int>(j);
      }
    }
  return rs;
}

}  // namespace

DomainFactor graph_domain(const std::vector<SurfacePoint>& pts) {
  if (pts.size() < 4) throw InvalidParams("need at least 4 surface points");
  bool const_minus = factor_spread(pts, DomainFactor::Minus) <= 1e-8;
  bool const_plus = factor_spread(pts, DomainFactor::Plus) <= 1e-8;
  if (const_minus && const_plus) throw NotAGraph("sample covers a single Grassmann point");
  if (const_minus) return DomainFactor::Plus;
  if (const_plus) return DomainFactor::Minus;

  RatioScan minus = scan_pairs(pts, DomainFactor::Minus);
  RatioScan plus = scan_pairs(pts, DomainFactor::Plus);
  if (!minus.single_valued && !plus.single_valued)
    throw NotAGraph("sample is single-valued over neither factor");
  if (!plus.single_valued) return DomainFactor::Minus;
  if (!minus.single_valued) return DomainFactor::Plus;
  // Both work; the graph direction is the distance-decreasing one.
  return minus.max_ratio <= plus.max_ratio ? DomainFactor::Minus : DomainFactor::Plus;
}

LipschitzReport lipschitz_check(const std::vector<SurfacePoint>& pts) {
  return lipschitz_check(pts, graph_domain(pts));
}

LipschitzReport lipschitz_check(const std::vector<SurfacePoint>& pts, DomainFactor domain) {
  if (pts.size() < 2) throw InvalidParams("need at least 2 surface points");
  LipschitzReport rep;
  rep.domain = domain;
  RatioScan rs = scan_pairs(pts, domain);
  if (!rs.any_pair) {
    rep.domain_collapsed = true;
    return rep;
  }
  rep.max_ratio = rs.max_ratio;
  rep.witness = {rs.wi, rs.wj};
  return rep;
}

std::array<Vec3, 2> plane_frame(const Vec3& n) {
  Vec3 axis = std::fabs(n.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  Vec3 b1 = normalized(cross(n, axis));
  Vec3 b2 = cross(n, b1);
  return {b1, b2};
}

namespace {

Vec3 predict_with(const Vec3& n, const Vec3& m, const Mat2& l, const Vec3& x) {
  std::array<Vec3, 2> b = plane_frame(n);
  std::array<Vec3, 2> c = plane_frame(m);
  Vec2 w = l.apply(Vec2{dot(x, b[0]), dot(x, b[1])});
  double z2 = 1.0 - (w.x * w.x + w.y * w.y);
  double z = z2 > 0.0 ? std::sqrt(z2) : 0.0;
  return w.x * c[0] + w.y * c[1] + z * m;
}

struct FitData {
  std::vector<Vec3> dom, img;
};

void fit_residuals(const FitData& data, const std::vector<double>& p, std::vector<double>& r) {
  Vec3 n{p[0], p[1], p[2]}, m{p[3], p[4], p[5]};
  double nn = norm(n), nm = norm(m);
  if (nn < 1e-8 || nm < 1e-8) {
    for (double& v : r) v = 1e3;
    return;
  }
  n = (1.0 / nn) * n;
  m = (1.0 / nm) * m;
  Mat2 l{p[6], p[7], p[8], p[9]};
  for (std::size_t i = 0; i < data.dom.size(); ++i) {
    Vec3 pred = predict_with(n, m, l, data.dom[i]);
    Vec3 diff = pred - data.img[i];
    r[3 * i] = diff.x;
    r[3 * i + 1] = diff.y;
    r[3 * i + 2] = diff.z;
  }
}

// Least-squares L for fixed axes; the map is linear between the tangent frames.
Mat2 axis_least_squares(const FitData& data, const Vec3& n, const Vec3& m) {
  std::array<Vec3, 2> b = plane_frame(n);
  std::array<Vec3, 2> c = plane_frame(m);
  double uu = 0.0, uv = 0.0, vv = 0.0;
  double wu[4] = {};
  for (std::size_t i = 0; i < data.dom.size(); ++i) {
    Vec2 u{dot(data.dom[i], b[0]), dot(data.dom[i], b[1])};
    Vec2 w{dot(data.img[i], c[0]), dot(data.img[i], c[1])};
    uu += u.x * u.x;
    uv += u.x * u.y;
    vv += u.y * u.y;
    wu[0] += w.x * u.x;
    wu[1] += w.x * u.y;
    wu[2] += w.y * u.x;
    wu[3] += w.y * u.y;
  }
  double det = uu * vv - uv * uv;
  if (std::fabs(det) < 1e-12) return {0.5, 0.0, 0.0, 0.5};
  double i00 = vv / det, i01 = -uv / det, i11 = uu / det;
  return {wu[0] * i00 + wu[1] * i01, wu[0] * i01 + wu[1] * i11,
          wu[2] * i00 + wu[3] * i01, wu[2] * i01 + wu[3] * i11};
}

double model_sse(const FitData& data, const Vec3& n, const Vec3& m, const Mat2& l) {
  double s = 0.0;
  for (std::size_t i = 0; i < data.dom.size(); ++i) {
    Vec3 d = predict_with(n, m, l, data.dom[i]) - data.img[i];
    s += dot(d, d);
  }
  return s;
}

Vec3 fibonacci_dir(int k, int count) {
  double golden = M_PI * (3.0 - std::sqrt(5.0));
  double z = 1.0 - (2.0 * k + 1.0) / count;
  double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  double t = golden * k;
  return {r * std::cos(t), r * std::sin(t), z};
}

double spherical_rms(const FitData& data, const Vec3& n, const Vec3& m, const Mat2& l) {
  double s = 0.0;
  for (std::size_t i = 0; i < data.dom.size(); ++i) {
    Vec3 pred = predict_with(n, m, l, data.dom[i]);
    double npred = norm(pred);
    if (npred < 1e-12) return 1e3;
    double d = sphere_distance((1.0 / npred) * pred, data.img[i]);
    s += d * d;
  }
  return std::sqrt(s / data.dom.size());
}

// Unconstrained affine prefit y ~ A x + t; gives the plane normal (least
// significant right singular direction of A), the image center, and L seeds.
void affine_prefit(const FitData& data, Vec3& n0, Vec3& m0, Mat2& l0) {
  Mat4 mm;
  double rhs[3][4] = {};
  for (std::size_t k = 0; k < data.dom.size(); ++k) {
    double xr[4] = {data.dom[k].x, data.dom[k].y, data.dom[k].z, 1.0};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) mm(i, j) += xr[i] * xr[j];
      rhs[0][i] += data.img[k].x * xr[i];
      rhs[1][i] += data.img[k].y * xr[i];
      rhs[2][i] += data.img[k].z * xr[i];
    }
  }
  double a[3][3];
  Vec3 t{};
  try {
    Mat4 inv = mm.inverse();
    for (int row = 0; row < 3; ++row) {
      double sol[4] = {};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) sol[i] += inv(i, j) * rhs[row][j];
      a[row][0] = sol[0];
      a[row][1] = sol[1];
      a[row][2] = sol[2];
      (row == 0 ? t.x : row == 1 ? t.y : t.z) = sol[3];
    }
  } catch (const Error&) {
    n0 = Vec3{0.0, 0.0, 1.0};
    m0 = Vec3{0.0, 0.0, 1.0};
    l0 = Mat2{0.5, 0.0, 0.0, 0.5};
    return;
  }

  // Normal of the domain plane: direction A flattens the most.
  std::array<std::array<double, 3>, 3> ata{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        ata[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += a[k][i] * a[k][j];
  SymEig<3> eig = sym_eig3(ata);
  n0 = Vec3{eig.vectors[2][0], eig.vectors[2][1], eig.vectors[2][2]};

  if (norm(t) > 1e-8) {
    m0 = normalized(t);
  } else {
    Vec3 mean{};
    for (const Vec3& y : data.img) mean = mean + y;
    m0 = norm(mean) > 1e-8 ? normalized(mean) : Vec3{0.0, 0.0, 1.0};
  }

  std::array<Vec3, 2> b = plane_frame(n0);
  std::array<Vec3, 2> c = plane_frame(m0);
  auto ab = [&](const Vec3& ci, const Vec3& bj) {
    Vec3 abj{a[0][0] * bj.x + a[0][1] * bj.y + a[0][2] * bj.z,
             a[1][0] * bj.x + a[1][1] * bj.y + a[1][2] * bj.z,
             a[2][0] * bj.x + a[2][1] * bj.y + a[2][2] * bj.z};
    return dot(ci, abj);
  };
  l0 = Mat2{ab(c[0], b[0]), ab(c[0], b[1]), ab(c[1], b[0]), ab(c[1], b[1])};
}

}  // namespace

GageDecomposition gage_decompose(const std::vector<SurfacePoint>& pts) {
  return gage_decompose(pts, graph_domain(pts));
}

GageDecomposition gage_decompose(const std::vector<SurfacePoint>& pts, DomainFactor domain) {
  if (pts.size() < 20) throw InvalidParams("need at least 20 surface points");

  FitData data;
  data.dom.reserve(pts.size());
  data.img.reserve(pts.size());
  for (const SurfacePoint& p : pts) {
    data.dom.push_back(factor_point(p, domain));
    data.img.push_back(factor_point(p, other_factor(domain)));
  }

  Vec3 n0, m0;
  Mat2 l0;
  affine_prefit(data, n0, m0, l0);

  // Refinement starts: the affine prefit plus the best axis pairs from a
  // coarse scan over both spheres with the closed-form L per pair. The scan
  // is what saves thin, nearly rank-1 image clouds where the prefit normal
  // is meaningless.
  struct Start {
    Vec3 n, m;
    Mat2 l;
    double sse;
  };
  std::vector<Start> starts;
  starts.push_back({n0, m0, l0, 0.0});

  std::vector<Start> scan;
  const int kDirs = 48;
  scan.reserve(static_cast<std::size_t>(kDirs / 2 * kDirs));
  for (int i = 0; i < kDirs / 2; ++i) {  // n and -n describe the same plane
    Vec3 n = fibonacci_dir(i, kDirs);
    for (int k = 0; k < kDirs; ++k) {
      Vec3 m = fibonacci_dir(k, kDirs);
      Mat2 l = axis_least_squares(data, n, m);
      scan.push_back({n, m, l, model_sse(data, n, m, l)});
    }
  }
  std::sort(scan.begin(), scan.end(),
            [](const Start& a, const Start& b) { return a.sse < b.sse; });
  for (std::size_t i = 0; i < scan.size() && i < 4; ++i) starts.push_back(scan[i]);

  const int nr = static_cast<int>(3 * data.dom.size());
  double best_rms = std::numeric_limits<double>::infinity();
  std::vector<double> best_params;
  for (const Start& s : starts) {
    std::vector<double> p{s.n.x, s.n.y, s.n.z, s.m.x, s.m.y, s.m.z,
                          s.l.a, s.l.b, s.l.c, s.l.d};
    LevMarResult res = levenberg_marquardt(
        [&](const std::vector<double>& q, std::vector<double>& r) { fit_residuals(data, q, r); },
        std::move(p), nr);
    Vec3 nf = normalized(Vec3{res.params[0], res.params[1], res.params[2]});
    Vec3 mf = normalized(Vec3{res.params[3], res.params[4], res.params[5]});
    Mat2 lf{res.params[6], res.params[7], res.params[8], res.params[9]};
    double rms = spherical_rms(data, nf, mf, lf);
    if (rms < best_rms) {
      best_rms = rms;
      best_params = {nf.x, nf.y, nf.z, mf.x, mf.y, mf.z, lf.a, lf.b, lf.c, lf.d};
    }
    if (best_rms < 1e-8) break;
  }

  if (best_rms >= 1e-6)
    throw FitFailed("decomposition fit residual above tolerance");

  GageDecomposition g;
  g.domain = domain;
  g.plane_normal = Vec3{best_params[0], best_params[1], best_params[2]};
  g.image_normal = Vec3{best_params[3], best_params[4], best_params[5]};
  g.l = Mat2{best_params[6], best_params[7], best_params[8], best_params[9]};
  g.fit_residual = best_rms;
  g.l_singular_values = singular_values(g.l);
  g.rank = (g.l_singular_values[0] > 1e-8 ? 1 : 0) + (g.l_singular_values[1] > 1e-8 ? 1 : 0);
  g.plane_degenerate = g.rank == 0;
  return g;
}

Vec3 gage_predict(const GageDecomposition& g, const Vec3& domain_point) {
  Vec3 pred = predict_with(g.plane_normal, g.image_normal, g.l, domain_point);
  double n = norm(pred);
  return n > 1e-12 ? (1.0 / n) * pred : g.image_normal;
}

double gage_rms(const GageDecomposition& g, const std::vector<SurfacePoint>& pts) {
  if (pts.empty()) throw InvalidParams("empty sample");
  double s = 0.0;
  for (const SurfacePoint& p : pts) {
    Vec3 pred = gage_predict(g, factor_point(p, g.domain));
    double d = sphere_distance(pred, factor_point(p, other_factor(g.domain)));
    s += d * d;
  }
  return std::sqrt(s / pts.size());
}

int rank_stratum(const PhiMap& f) {
  GreatCircleFibration fib = GreatCircleFibration::special(f);
  std::vector<SurfacePoint> pts = base_surface(fib, 400, 0xC0FFEEULL);
  return gage_decompose(pts).rank;
}

}  // namespace gcfib
