#pragma once

#include <cmath>
#include <vector>

#include "mib/core.hpp"

namespace mib {

// Row-major dense matrix for the small local systems (6x6, 9x9).
struct DenseMatrix {
  int n = 0;
  std::vector<double> a;

  explicit DenseMatrix(int size = 0) : n(size), a(size_t(size) * size, 0.0) {}
  double& operator()(int r, int c) { return a[size_t(r) * n + c]; }
  double operator()(int r, int c) const { return a[size_t(r) * n + c]; }

  double norm1() const {
    double best = 0.0;
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int r = 0; r < n; ++r) s += std::fabs((*this)(r, c));
      best = std::max(best, s);
    }
    return best;
  }
};

// Partial-pivoting LU. Returns false on exact singularity.
struct DenseLU {
  DenseMatrix lu;
  std::vector<int> piv;
  bool ok = false;

  explicit DenseLU(const DenseMatrix& m) : lu(m), piv(m.n) {
    int n = m.n;
    for (int i = 0; i < n; ++i) piv[i] = i;
    ok = true;
    for (int col = 0; col < n; ++col) {
      int p = col;
      double best = std::fabs(lu(col, col));
      for (int r = col + 1; r < n; ++r) {
        double v = std::fabs(lu(r, col));
        if (v > best) {
          best = v;
          p = r;
        }
      }
      if (best == 0.0) {
        ok = false;
        return;
      }
      if (p != col) {
        for (int c = 0; c < n; ++c) std::swap(lu(p, c), lu(col, c));
        std::swap(piv[p], piv[col]);
      }
      for (int r = col + 1; r < n; ++r) {
        double f = lu(r, col) / lu(col, col);
        lu(r, col) = f;
        for (int c = col + 1; c < n; ++c) lu(r, c) -= f * lu(col, c);
      }
    }
  }

  std::vector<double> solve(const std::vector<double>& b) const {
    int n = lu.n;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[size_t(piv[i])];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
      x[i] /= lu(i, i);
    }
    return x;
  }

  DenseMatrix inverse() const {
    int n = lu.n;
    DenseMatrix inv(n);
    std::vector<double> e(n, 0.0);
    for (int c = 0; c < n; ++c) {
      e.assign(n, 0.0);
      e[c] = 1.0;
      auto col = solve(e);
      for (int r = 0; r < n; ++r) inv(r, c) = col[r];
    }
    return inv;
  }
};

// 1-norm condition estimate via the explicit inverse; infinity when singular.
inline double condition_1(const DenseMatrix& m) {
  DenseLU lu(m);
  if (!lu.ok) return std::numeric_limits<double>::infinity();
  return m.norm1() * lu.inverse().norm1();
}

}  // namespace mib
