#include "gulps/lm.hpp"

#include <algorithm>
#include <cmath>

namespace gulps {

namespace {

double sum_squares(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

double max_abs(const std::vector<double>& r) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

// Solves the SPD system a·x = b in place by Cholesky; false if a is not
// numerically positive definite.
bool cholesky_solve(std::vector<double> a, std::vector<double>& b, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double s = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) s -= a[j * n + k] * a[j * n + k];
    if (!(s > 0.0)) return false;
    const double l = std::sqrt(s);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double t = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) t -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = t / l;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double t = b[i];
    for (std::size_t k = 0; k < i; ++k) t -= a[i * n + k] * b[k];
    b[i] = t / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double t = b[i];
    for (std::size_t k = i + 1; k < n; ++k) t -= a[k * n + i] * b[k];
    b[i] = t / a[i * n + i];
  }
  return true;
}

}  // namespace

LmResult lm_minimize(const ResidualFn& f, std::vector<double> x0, const LmOptions& opts) {
  const std::size_t n = x0.size();
  LmResult res;
  res.x = std::move(x0);
  std::vector<double> jac;
  f(res.x, res.residual, &jac);
  const std::size_t p = res.residual.size();
  double cost = sum_squares(res.residual);
  double lambda = opts.lambda0;

  std::vector<double> jtj(n * n);
  std::vector<double> step(n);
  std::vector<double> trial(n);
  std::vector<double> trial_r;
  bool fresh_jacobian = true;

  for (res.iterations = 0; res.iterations < opts.max_iter; ++res.iterations) {
    if (max_abs(res.residual) <= opts.tol || !std::isfinite(cost)) break;
    if (fresh_jacobian) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k < p; ++k) s += jac[k * n + i] * jac[k * n + j];
          jtj[i * n + j] = jtj[j * n + i] = s;
        }
      fresh_jacobian = false;
    }
    std::vector<double> damped = jtj;
    for (std::size_t i = 0; i < n; ++i) damped[i * n + i] += lambda;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k) s += jac[k * n + i] * res.residual[k];
      step[i] = -s;
    }
    if (!cholesky_solve(std::move(damped), step, n)) {
      lambda *= 10.0;
      if (lambda > 1e16) break;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) trial[i] = res.x[i] + step[i];
    f(trial, trial_r, nullptr);
    const double trial_cost = sum_squares(trial_r);
    if (std::isfinite(trial_cost) && trial_cost < cost) {
      res.x = trial;
      cost = trial_cost;
      f(res.x, res.residual, &jac);
      fresh_jacobian = true;
      lambda = std::max(lambda / 10.0, 1e-15);
    } else {
      lambda *= 10.0;
      if (lambda > 1e16) break;  // the step has shrunk to nothing
    }
  }
  res.residual_inf = max_abs(res.residual);
  res.converged = res.residual_inf <= opts.tol;
  return res;
}

std::vector<double> central_difference_jacobian(const ResidualFn& f, const std::vector<double>& x,
                                                double h) {
  std::vector<double> r0;
  f(x, r0, nullptr);
  const std::size_t p = r0.size();
  const std::size_t n = x.size();
  std::vector<double> jac(p * n);
  std::vector<double> xp = x;
  std::vector<double> rp;
  std::vector<double> rm;
  for (std::size_t j = 0; j < n; ++j) {
    xp[j] = x[j] + h;
    f(xp, rp, nullptr);
    xp[j] = x[j] - h;
    f(xp, rm, nullptr);
    xp[j] = x[j];
    for (std::size_t i = 0; i < p; ++i) jac[i * n + j] = (rp[i] - rm[i]) / (2.0 * h);
  }
  return jac;
}

}  // namespace gulps
