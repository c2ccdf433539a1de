#pragma once

#include <chrono>
#include <cmath>
#include <vector>

#include "mib/assembly.hpp"

namespace mib {

struct SolveReport {
  int64_t iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
  bool breakdown = false;
  double seconds = 0.0;
};

// Diagonal (Jacobi) scaling. Returned vector applies as division by D.
inline std::vector<double> jacobi_preconditioner(const SparseSystem& sys) {
  std::vector<double> diag(size_t(sys.dim), 0.0);
  for (int64_t r = 0; r < sys.dim; ++r)
    for (int64_t t = sys.row_ptr[size_t(r)]; t < sys.row_ptr[size_t(r) + 1]; ++t)
      if (sys.cols[size_t(t)] == r) diag[size_t(r)] = sys.vals[size_t(t)];
  for (double d : diag)
    if (d == 0.0) throw ZeroDiagonal("jacobi_preconditioner: zero diagonal entry");
  return diag;
}

namespace detail {
inline double dot_serial(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
}  // namespace detail

// Preconditioned BiCGStab with zero initial guess and shadow residual equal to
// the initial residual. Fully deterministic: serial fixed-order reductions.
// On breakdown or iteration cap the best solution so far is returned.
inline std::pair<std::vector<double>, SolveReport> bicgstab(
    const SparseSystem& sys, const std::vector<double>& diag, double rel_tol,
    int64_t max_iterations) {
  auto t0 = std::chrono::steady_clock::now();
  size_t n = size_t(sys.dim);
  std::vector<double> x(n, 0.0);
  std::vector<double> r = sys.rhs;  // r = b - A*0
  std::vector<double> rhat = r;
  std::vector<double> p(n, 0.0), v(n, 0.0), phat(n, 0.0), shat(n, 0.0), t(n, 0.0),
      s(n, 0.0);

  double bnorm = std::sqrt(detail::dot_serial(sys.rhs, sys.rhs));
  SolveReport rep;
  auto finish = [&](bool conv, bool broke, double resid) {
    rep.converged = conv;
    rep.breakdown = broke;
    rep.rel_residual = bnorm > 0.0 ? resid / bnorm : resid;
    rep.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::make_pair(x, rep);
  };
  if (bnorm == 0.0) return finish(true, false, 0.0);

  double rho_old = 1.0, alpha = 1.0, omega = 1.0;
  double rnorm = bnorm;
  const double tiny = 1e-300;

  for (int64_t it = 1; it <= max_iterations; ++it) {
    rep.iterations = it;
    double rho = detail::dot_serial(rhat, r);
    if (std::fabs(rho) < tiny) return finish(false, true, rnorm);
    if (it == 1) {
      p = r;
    } else {
      double beta = (rho / rho_old) * (alpha / omega);
      for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    }
    for (size_t i = 0; i < n; ++i) phat[i] = p[i] / diag[i];
    sys.multiply(phat, v);
    double rhat_v = detail::dot_serial(rhat, v);
    if (std::fabs(rhat_v) < tiny) return finish(false, true, rnorm);
    alpha = rho / rhat_v;
    for (size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    double snorm = std::sqrt(detail::dot_serial(s, s));
    if (snorm <= rel_tol * bnorm) {
      for (size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
      r = s;
      return finish(true, false, snorm);
    }
    for (size_t i = 0; i < n; ++i) shat[i] = s[i] / diag[i];
    sys.multiply(shat, t);
    double tt = detail::dot_serial(t, t);
    if (tt < tiny) return finish(false, true, snorm);
    omega = detail::dot_serial(t, s) / tt;
    if (std::fabs(omega) < tiny) return finish(false, true, snorm);
    for (size_t i = 0; i < n; ++i) x[i] += alpha * phat[i] + omega * shat[i];
    for (size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
    rnorm = std::sqrt(detail::dot_serial(r, r));
    if (rnorm <= rel_tol * bnorm) return finish(true, false, rnorm);
    rho_old = rho;
  }
  return finish(false, false, rnorm);
}

}  // namespace mib
