#include "gcfib/levmar.hpp"

#include <cmath>

#include "gcfib/errors.hpp"

namespace gcfib {

namespace {

// Solve a (dense, symmetric positive-ish) n x n system in place by Gaussian
// elimination with partial pivoting. Returns false on a vanishing pivot.
bool solve_dense(std::vector<double>& a, std::vector<double>& b, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[static_cast<std::size_t>(r * n + col)]) >
          std::fabs(a[static_cast<std::size_t>(pivot * n + col)]))
        pivot = r;
    double pv = a[static_cast<std::size_t>(pivot * n + col)];
    if (std::fabs(pv) < 1e-300) return false;
    if (pivot != col) {
      for (int c = col; c < n; ++c)
        std::swap(a[static_cast<std::size_t>(pivot * n + c)], a[static_cast<std::size_t>(col * n + c)]);
      std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
    }
    for (int r = col + 1; r < n; ++r) {
      double f = a[static_cast<std::size_t>(r * n + col)] / a[static_cast<std::size_t>(col * n + col)];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c)
        a[static_cast<std::size_t>(r * n + c)] -= f * a[static_cast<std::size_t>(col * n + c)];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    double s = b[static_cast<std::size_t>(col)];
    for (int c = col + 1; c < n; ++c)
      s -= a[static_cast<std::size_t>(col * n + c)] * b[static_cast<std::size_t>(c)];
    b[static_cast<std::size_t>(col)] = s / a[static_cast<std::size_t>(col * n + col)];
  }
  return true;
}

double half_sq(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return 0.5 * s;
}

}  // namespace

LevMarResult levenberg_marquardt(const ResidualFn& residuals, std::vector<double> initial,
                                 int residual_count, const LevMarOptions& opts) {
  const int np = static_cast<int>(initial.size());
  const int nr = residual_count;
  if (np < 1 || nr < np) throw InvalidParams("underdetermined least-squares problem");

  std::vector<double> p = std::move(initial);
  std::vector<double> r(static_cast<std::size_t>(nr)), r2(static_cast<std::size_t>(nr));
  std::vector<double> jac(static_cast<std::size_t>(nr * np));

  residuals(p, r);
  double cost = half_sq(r);
  double damping = opts.initial_damping;
  LevMarResult out;
  out.converged = false;

  int iter = 0;
  bool done = false;
  for (; iter < opts.max_iters && !done; ++iter) {
    // Central-difference Jacobian.
    std::vector<double> pj = p;
    for (int j = 0; j < np; ++j) {
      double h = 1e-7 * (1.0 + std::fabs(p[static_cast<std::size_t>(j)]));
      pj[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)] + h;
      residuals(pj, r2);
      std::vector<double> hi = r2;
      pj[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)] - h;
      residuals(pj, r2);
      pj[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)];
      for (int i = 0; i < nr; ++i)
        jac[static_cast<std::size_t>(i * np + j)] =
            (hi[static_cast<std::size_t>(i)] - r2[static_cast<std::size_t>(i)]) / (2.0 * h);
    }

    // Normal equations pieces.
    std::vector<double> jtj(static_cast<std::size_t>(np * np), 0.0);
    std::vector<double> jtr(static_cast<std::size_t>(np), 0.0);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < np; ++j) {
        double jij = jac[static_cast<std::size_t>(i * np + j)];
        jtr[static_cast<std::size_t>(j)] += jij * r[static_cast<std::size_t>(i)];
        for (int k = j; k < np; ++k)
          jtj[static_cast<std::size_t>(j * np + k)] += jij * jac[static_cast<std::size_t>(i * np + k)];
      }
    for (int j = 0; j < np; ++j)
      for (int k = 0; k < j; ++k)
        jtj[static_cast<std::size_t>(j * np + k)] = jtj[static_cast<std::size_t>(k * np + j)];

    double gmax = 0.0;
    for (double g : jtr) gmax = std::max(gmax, std::fabs(g));
    if (gmax < opts.grad_tol) {
      out.converged = true;
      break;
    }

    bool stepped = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      std::vector<double> lhs = jtj;
      for (int j = 0; j < np; ++j) {
        double d = jtj[static_cast<std::size_t>(j * np + j)];
        lhs[static_cast<std::size_t>(j * np + j)] = d + damping * std::max(d, 1e-12);
      }
      std::vector<double> step(static_cast<std::size_t>(np));
      for (int j = 0; j < np; ++j) step[static_cast<std::size_t>(j)] = -jtr[static_cast<std::size_t>(j)];
      if (!solve_dense(lhs, step, np)) {
        damping *= 10.0;
        continue;
      }
      std::vector<double> pn = p;
      double step_norm = 0.0, p_norm = 0.0;
      for (int j = 0; j < np; ++j) {
        pn[static_cast<std::size_t>(j)] += step[static_cast<std::size_t>(j)];
        step_norm += step[static_cast<std::size_t>(j)] * step[static_cast<std::size_t>(j)];
        p_norm += p[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(j)];
      }
      residuals(pn, r2);
      double cost2 = half_sq(r2);
      if (cost2 < cost) {
        p = std::move(pn);
        r = r2;
        cost = cost2;
        damping = std::max(damping / 3.0, 1e-12);
        stepped = true;
        if (step_norm < opts.step_tol * opts.step_tol * (1.0 + p_norm)) {
          out.converged = true;
          done = true;
        }
        break;
      }
      damping *= 4.0;
    }
    if (!stepped) {
      out.converged = true;  // no descent direction left at any damping
      break;
    }
  }

  out.params = std::move(p);
  out.cost = cost;
  out.iters = iter;
  return out;
}

}  // namespace gcfib
