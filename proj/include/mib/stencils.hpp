#pragma once

#include <vector>

#include "mib/core.hpp"

namespace mib {

// Lagrange interpolation (order 0) or first-derivative (order 1) weights at
// eval_point over pairwise-distinct nodes: f^(order)(eval) ~ sum w_i f(x_i),
// exact on polynomials up to degree nodes.size() - 1.
inline std::vector<double> lagrange_weights(const std::vector<double>& nodes,
                                            double eval_point, int order) {
  size_t n = nodes.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (nodes[i] == nodes[j])
        throw DuplicateNodes("lagrange_weights: nodes must be pairwise distinct");

  std::vector<double> w(n, 0.0);
  if (order == 0) {
    for (size_t i = 0; i < n; ++i) {
      double v = 1.0;
      for (size_t j = 0; j < n; ++j)
        if (j != i) v *= (eval_point - nodes[j]) / (nodes[i] - nodes[j]);
      w[i] = v;
    }
    return w;
  }
  // L_i'(x) = sum_{k != i} 1/(x_i - x_k) prod_{j != i,k} (x - x_j)/(x_i - x_j)
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      double term = 1.0 / (nodes[i] - nodes[k]);
      for (size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        term *= (eval_point - nodes[j]) / (nodes[i] - nodes[j]);
      }
      acc += term;
    }
    w[i] = acc;
  }
  return w;
}

}  // namespace mib
