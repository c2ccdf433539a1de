#include <gtest/gtest.h>

#include <random>

#include "mib/stencils.hpp"

using namespace mib;

TEST(LagrangeWeights, InterpolationAtHalfStep) {
  double h = 0.37;
  auto w = lagrange_weights({0.0, h, 2.0 * h}, 0.5 * h, 0);
  EXPECT_NEAR(w[0], 3.0 / 8.0, 1e-14);
  EXPECT_NEAR(w[1], 3.0 / 4.0, 1e-14);
  EXPECT_NEAR(w[2], -1.0 / 8.0, 1e-14);
}

TEST(LagrangeWeights, DerivativeAtLeftEnd) {
  double h = 0.61;
  auto w = lagrange_weights({0.0, h, 2.0 * h}, 0.0, 1);
  EXPECT_NEAR(w[0], -3.0 / (2.0 * h), 1e-12);
  EXPECT_NEAR(w[1], 2.0 / h, 1e-12);
  EXPECT_NEAR(w[2], -1.0 / (2.0 * h), 1e-12);
}

TEST(LagrangeWeights, DuplicateNodesRejected) {
  EXPECT_THROW(lagrange_weights({0.0, 1.0, 1.0}, 0.5, 0), DuplicateNodes);
}

// Partition of unity and polynomial exactness, both orders.
TEST(LagrangeWeights, ExactOnPolynomials) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + trial % 3;  // 2..4 nodes
    std::vector<double> nodes(static_cast<size_t>(n), 0.0);
    bool distinct = true;
    for (auto& x : nodes) x = d(rng);
    for (int i = 0; i < n && distinct; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::fabs(nodes[size_t(i)] - nodes[size_t(j)]) < 1e-3) distinct = false;
    if (!distinct) continue;
    double at = d(rng);

    auto w0 = lagrange_weights(nodes, at, 0);
    auto w1 = lagrange_weights(nodes, at, 1);
    double s0 = 0.0, s1 = 0.0;
    for (int i = 0; i < n; ++i) {
      s0 += w0[size_t(i)];
      s1 += w1[size_t(i)];
    }
    EXPECT_NEAR(s0, 1.0, 1e-10);
    EXPECT_NEAR(s1, 0.0, 1e-9);

    for (int deg = 0; deg < n; ++deg) {
      double v0 = 0.0, v1 = 0.0;
      for (int i = 0; i < n; ++i) {
        v0 += w0[size_t(i)] * std::pow(nodes[size_t(i)], deg);
        v1 += w1[size_t(i)] * std::pow(nodes[size_t(i)], deg);
      }
      EXPECT_NEAR(v0, std::pow(at, deg), 1e-9);
      double dexp = deg == 0 ? 0.0 : deg * std::pow(at, deg - 1);
      EXPECT_NEAR(v1, dexp, 1e-8);
    }
  }
}
