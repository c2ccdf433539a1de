#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mib/core.hpp"

namespace mib {

// Linear functional over grid unknowns: sum of w * u(node, component) plus a
// constant accumulated from jump data. Keys are 3*node_lin + component, the
// same indexing the assembled system uses.
struct Functional {
  std::vector<std::pair<int64_t, double>> terms;
  double constant = 0.0;

  void add(int64_t key, double w) {
    if (w != 0.0) terms.emplace_back(key, w);
  }

  void axpy(double a, const Functional& f) {
    if (a == 0.0) return;
    constant += a * f.constant;
    for (auto& [k, w] : f.terms) terms.emplace_back(k, a * w);
  }

  void compress() {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t out = 0;
    for (size_t i = 0; i < terms.size();) {
      int64_t k = terms[i].first;
      double w = 0.0;
      while (i < terms.size() && terms[i].first == k) w += terms[i++].second;
      if (w != 0.0) terms[out++] = {k, w};
    }
    terms.resize(out);
  }

  double weight_sum() const {
    double s = 0.0;
    for (auto& [k, w] : terms) s += w;
    return s;
  }

  // Evaluate against a full nodal vector (3N entries).
  double evaluate(const std::vector<double>& u) const {
    double s = constant;
    for (auto& [k, w] : terms) s += w * u[size_t(k)];
    return s;
  }
};

}  // namespace mib
