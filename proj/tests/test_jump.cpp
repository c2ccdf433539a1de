#include <gtest/gtest.h>

#include <random>

#include "mib/jump.hpp"
#include "mib/materials.hpp"
#include "mib/problems.hpp"

using namespace mib;

namespace {

// Quadratic displacement field with analytic gradient: u_c = a_c . x + x^T Q_c x.
struct PolyField {
  std::array<Vec3, 3> lin;
  std::array<std::array<double, 6>, 3> quad;  // xx yy zz xy xz yz

  static PolyField random(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    PolyField f;
    for (int c = 0; c < 3; ++c) {
      f.lin[c] = {d(rng), d(rng), d(rng)};
      for (auto& q : f.quad[c]) q = d(rng);
    }
    return f;
  }

  Vec3 grad(int c, const Vec3& p) const {
    const auto& q = quad[size_t(c)];
    return {lin[size_t(c)].x + 2 * q[0] * p.x + q[3] * p.y + q[4] * p.z,
            lin[size_t(c)].y + 2 * q[1] * p.y + q[3] * p.x + q[5] * p.z,
            lin[size_t(c)].z + 2 * q[2] * p.z + q[4] * p.x + q[5] * p.y};
  }
};

Vec3 stress_dot_n(double lambda, double mu, const std::array<Vec3, 3>& g,
                  const Vec3& n) {
  double div = g[0].x + g[1].y + g[2].z;
  Vec3 t;
  for (int r = 0; r < 3; ++r) {
    double s = lambda * div * n[r];
    for (int d = 0; d < 3; ++d) s += mu * (g[size_t(r)][d] + g[size_t(d)][r]) * n[d];
    t[r] = s;
  }
  return t;
}

// 18-vector of one-sided interfacial derivatives in the column order of C.
std::array<double, 18> derivative_vector(const std::array<Vec3, 3>& gp,
                                         const std::array<Vec3, 3>& gm) {
  std::array<double, 18> a{};
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d) {
      a[size_t(6 * c + 2 * d)] = gp[size_t(c)][d];
      a[size_t(6 * c + 2 * d + 1)] = gm[size_t(c)][d];
    }
  return a;
}

// Jacobi eigensolver for small symmetric matrices (test oracle only).
void jacobi_eigen(std::vector<std::vector<double>>& A,
                  std::vector<std::vector<double>>& V) {
  size_t n = A.size();
  V.assign(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) V[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) off += A[p][q] * A[p][q];
    if (off < 1e-30) break;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) {
        if (std::fabs(A[p][q]) < 1e-300) continue;
        double theta = (A[q][q] - A[p][p]) / (2.0 * A[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (size_t k = 0; k < n; ++k) {
          double akp = A[k][p], akq = A[k][q];
          A[k][p] = c * akp - s * akq;
          A[k][q] = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          double apk = A[p][k], aqk = A[q][k];
          A[p][k] = c * apk - s * aqk;
          A[q][k] = s * apk + c * aqk;
        }
        for (size_t k = 0; k < n; ++k) {
          double vkp = V[k][p], vkq = V[k][q];
          V[k][p] = c * vkp - s * vkq;
          V[k][q] = s * vkp + c * vkq;
        }
      }
  }
}

JumpMatrix random_jump_matrix(std::mt19937& rng, LocalFrame* frame_out = nullptr) {
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  std::uniform_real_distribution<double> mud(0.5, 3.0);
  std::uniform_real_distribution<double> nud(0.0, 0.45);
  LocalFrame fr = transformation_matrix(ang(rng), std::fabs(ang(rng)) / 2.0);
  double mup = mud(rng), mum = mud(rng);
  double nup = nud(rng), num = nud(rng);
  double lp = 2 * mup * nup / (1 - 2 * nup), lm = 2 * mum * num / (1 - 2 * num);
  if (frame_out) *frame_out = fr;
  return assemble_C(fr, lp + 2 * mup, lm + 2 * mum, lp, lm, mup, mum);
}

}  // namespace

TEST(TransformationMatrix, PrintedCases) {
  LocalFrame f = transformation_matrix(0.0, M_PI / 2.0);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      EXPECT_NEAR(f.P[r][c], r == c ? 1.0 : 0.0, 1e-15);

  LocalFrame g = transformation_matrix(M_PI / 2.0, M_PI / 2.0);
  double expect[3][3] = {{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(g.P[r][c], expect[r][c], 1e-15);
}

TEST(TransformationMatrix, OrthogonalWithUnitDeterminant) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> d(-4.0, 4.0);
  for (int trial = 0; trial < 1000; ++trial) {
    LocalFrame f = transformation_matrix(d(rng), d(rng));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += f.P[r][k] * f.P[c][k];
        EXPECT_NEAR(s, r == c ? 1.0 : 0.0, 1e-12);
      }
    const auto& P = f.P;
    double det = P[0][0] * (P[1][1] * P[2][2] - P[1][2] * P[2][1]) -
                 P[0][1] * (P[1][0] * P[2][2] - P[1][2] * P[2][0]) +
                 P[0][2] * (P[1][0] * P[2][1] - P[1][1] * P[2][0]);
    EXPECT_NEAR(det, 1.0, 1e-12);
  }
}

TEST(AssembleC, IdentityFrameBlocks) {
  LocalFrame f = transformation_matrix(0.0, M_PI / 2.0);
  double Mp = 3.0, Mm = 5.0, lp = 1.0, lm = 2.0, mup = 1.5, mum = 2.5;
  JumpMatrix J = assemble_C(f, Mp, Mm, lp, lm, mup, mum);
  // C_{1,1} row 1 = (M+, -M-, 0, 0, 0, 0)
  EXPECT_DOUBLE_EQ(J.C[0][0], Mp);
  EXPECT_DOUBLE_EQ(J.C[0][1], -Mm);
  for (int c = 2; c < 6; ++c) EXPECT_NEAR(J.C[0][c], 0.0, 1e-15 * Mm);
  // C_{2,1} row 1 = (0, 0, 1, -1, 0, 0)
  EXPECT_DOUBLE_EQ(J.C[3][0], 0.0);
  EXPECT_DOUBLE_EQ(J.C[3][2], 1.0);
  EXPECT_DOUBLE_EQ(J.C[3][3], -1.0);
  // The u3+ dz / u3- dz pair of the first traction row carries lambda with the
  // same +/- sign pattern as every other column pair.
  EXPECT_DOUBLE_EQ(J.C[0][16], lp);
  EXPECT_DOUBLE_EQ(J.C[0][17], -lm);
}

// Independent route: C times the 18 one-sided derivatives must reproduce the
// nine jump quantities computed from the stress formulas and tangential
// projections, for analytic polynomial fields.
TEST(AssembleC, MatchesAnalyticJumps) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::uniform_real_distribution<double> mud(0.5, 4.0);
  std::uniform_real_distribution<double> nud(0.0, 0.45);
  for (int trial = 0; trial < 50; ++trial) {
    PolyField up = PolyField::random(rng), um = PolyField::random(rng);
    Vec3 p{d(rng), d(rng), d(rng)};
    double theta = 3.0 * d(rng), phi = 1.5 * std::fabs(d(rng));
    LocalFrame fr = transformation_matrix(theta, phi);
    double mup = mud(rng), mum = mud(rng), nup = nud(rng), num = nud(rng);
    double lp = 2 * mup * nup / (1 - 2 * nup), lm = 2 * mum * num / (1 - 2 * num);
    JumpMatrix J = assemble_C(fr, lp + 2 * mup, lm + 2 * mum, lp, lm, mup, mum);

    std::array<Vec3, 3> gp{up.grad(0, p), up.grad(1, p), up.grad(2, p)};
    std::array<Vec3, 3> gm{um.grad(0, p), um.grad(1, p), um.grad(2, p)};
    auto alpha = derivative_vector(gp, gm);

    Vec3 T = stress_dot_n(lp, mup, gp, fr.normal()) -
             stress_dot_n(lm, mum, gm, fr.normal());
    double expected[9];
    for (int r = 0; r < 3; ++r) expected[r] = T[r];
    for (int c = 0; c < 3; ++c) {
      expected[3 + c] = dot(fr.eta(), gp[size_t(c)] - gm[size_t(c)]);
      expected[6 + c] = dot(fr.zeta(), gp[size_t(c)] - gm[size_t(c)]);
    }
    for (int r = 0; r < 9; ++r) {
      double got = 0.0;
      for (int col = 0; col < 18; ++col) got += J.C[r][col] * alpha[size_t(col)];
      EXPECT_NEAR(got, expected[r], 1e-12 * std::max(1.0, std::fabs(expected[r])));
    }
  }
}

TEST(AssembleC, MatchedMaterialsSmoothFieldGivesZeroJumps) {
  std::mt19937 rng(9);
  PolyField u = PolyField::random(rng);
  Vec3 p{0.3, -0.2, 0.5};
  LocalFrame fr = transformation_matrix(0.7, 1.1);
  double mu = 2.0, nu = 0.3, l = 2 * mu * nu / (1 - 2 * nu);
  JumpMatrix J = assemble_C(fr, l + 2 * mu, l + 2 * mu, l, l, mu, mu);
  std::array<Vec3, 3> g{u.grad(0, p), u.grad(1, p), u.grad(2, p)};
  auto alpha = derivative_vector(g, g);
  for (int r = 0; r < 9; ++r) {
    double got = 0.0;
    for (int col = 0; col < 18; ++col) got += J.C[r][col] * alpha[size_t(col)];
    EXPECT_NEAR(got, 0.0, 1e-12);
  }
}

// Nullity invariant over 1000 random samples: the six designated entries of
// every combined row vanish to 1e-10 relative.
TEST(Elimination, NullityInvariant) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> set(0, 5);
  int tested = 0;
  while (tested < 1000) {
    JumpMatrix J = random_jump_matrix(rng);
    int l = set(rng), m = set(rng);
    if (l == m) continue;
    auto er = try_elimination_coefficients(J, l, m);
    if (!er) continue;
    ++tested;
    double row_max = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 18; ++c)
        row_max = std::max(row_max, std::fabs(er->rows[r][c]));
    for (int r = 0; r < 3; ++r)
      for (int c : {er->l, er->m, er->l + 6, er->m + 6, er->l + 12, er->m + 12})
        EXPECT_LE(std::fabs(er->rows[r][size_t(c)]), 1e-10 * row_max);
  }
}

// Brute-force oracle: each combined row must be collinear with the null-space
// combination of the seven contributing rows restricted to the six eliminated
// columns, found independently by an eigen decomposition.
TEST(Elimination, MatchesNullSpaceOracle) {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> set(0, 5);
  int tested = 0;
  while (tested < 200) {
    JumpMatrix J = random_jump_matrix(rng);
    int l = set(rng), m = set(rng);
    if (l == m || (l / 2 == 2 && m / 2 == 2)) continue;  // skip the special pair
    auto er = try_elimination_coefficients(J, l, m);
    if (!er) continue;

    int cols[6] = {er->l, er->m, er->l + 6, er->m + 6, er->l + 12, er->m + 12};
    for (int r = 0; r < 3; ++r) {
      int rows_idx[7] = {r, 3, 6, 4, 7, 5, 8};
      // G[i][j] = contributing row i at eliminated column j.
      double G[7][6];
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 6; ++j) G[i][j] = J.C[rows_idx[i]][cols[j]];
      std::vector<std::vector<double>> GG(7, std::vector<double>(7, 0.0));
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
          for (int k = 0; k < 6; ++k) GG[i][j] += G[i][k] * G[j][k];
      std::vector<std::vector<double>> V;
      jacobi_eigen(GG, V);
      // Smallest eigenvalue / second smallest.
      int mn = 0, mn2 = -1;
      for (int i = 1; i < 7; ++i)
        if (GG[i][i] < GG[mn][mn]) mn = i;
      for (int i = 0; i < 7; ++i)
        if (i != mn && (mn2 < 0 || GG[i][i] < GG[mn2][mn2])) mn2 = i;
      if (GG[mn2][mn2] < 1e-8) continue;  // degenerate null space; skip sample
      std::vector<double> null_vec(7);
      for (int i = 0; i < 7; ++i) null_vec[size_t(i)] = V[size_t(i)][size_t(mn)];

      const double* k = er->coef[r];
      double nf = 0.0, nn = 0.0, dp = 0.0;
      for (int i = 0; i < 7; ++i) {
        nf += k[i] * k[i];
        nn += null_vec[size_t(i)] * null_vec[size_t(i)];
        dp += k[i] * null_vec[size_t(i)];
      }
      if (nf < 1e-20) continue;
      EXPECT_GE(std::fabs(dp) / std::sqrt(nf * nn), 1.0 - 1e-8);
    }
    ++tested;
  }
}

TEST(Elimination, IdentityFramePair15Degenerates) {
  LocalFrame fr = transformation_matrix(0.0, M_PI / 2.0);
  JumpMatrix J = assemble_C(fr, 3.0, 5.0, 1.0, 2.0, 1.5, 2.5);
  // Eliminating x+ and z+ with the normal along x: a1 = 0.
  EXPECT_FALSE(try_elimination_coefficients(J, 0, 4).has_value());
  EXPECT_THROW(elimination_coefficients(J, 0, 4), DegenerateElimination);
}

TEST(Elimination, SpecialZPairUsesEtaRows) {
  std::mt19937 rng(31);
  JumpMatrix J = random_jump_matrix(rng);
  auto er = try_elimination_coefficients(J, 4, 5);
  ASSERT_TRUE(er.has_value());
  EXPECT_TRUE(er->special_z_pair);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 18; ++c) EXPECT_DOUBLE_EQ(er->rows[r][c], J.C[3 + r][c]);
  // z-derivative columns vanish structurally.
  for (int r = 0; r < 3; ++r)
    for (int c : {4, 5, 10, 11, 16, 17}) EXPECT_DOUBLE_EQ(er->rows[r][c], 0.0);
}

// Combined rows evaluated on analytic fields satisfy the combined conditions.
TEST(Elimination, CombinedConditionsHoldOnAnalyticFields) {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::uniform_real_distribution<double> mud(0.5, 4.0);
  std::uniform_real_distribution<double> nud(0.0, 0.45);
  std::uniform_int_distribution<int> set(0, 5);
  int tested = 0;
  while (tested < 100) {
    PolyField up = PolyField::random(rng), um = PolyField::random(rng);
    Vec3 p{d(rng), d(rng), d(rng)};
    LocalFrame fr = transformation_matrix(3.0 * d(rng), 1.5 * std::fabs(d(rng)));
    double mup = mud(rng), mum = mud(rng), nup = nud(rng), num = nud(rng);
    double lp = 2 * mup * nup / (1 - 2 * nup), lm = 2 * mum * num / (1 - 2 * num);
    JumpMatrix J = assemble_C(fr, lp + 2 * mup, lm + 2 * mum, lp, lm, mup, mum);
    int l = set(rng), m = set(rng);
    if (l == m) continue;
    auto er = try_elimination_coefficients(J, l, m);
    if (!er) continue;
    ++tested;

    std::array<Vec3, 3> gp{up.grad(0, p), up.grad(1, p), up.grad(2, p)};
    std::array<Vec3, 3> gm{um.grad(0, p), um.grad(1, p), um.grad(2, p)};
    auto alpha = derivative_vector(gp, gm);
    Vec3 T = stress_dot_n(lp, mup, gp, fr.normal()) -
             stress_dot_n(lm, mum, gm, fr.normal());
    Vec3 etaj, zetaj;
    for (int c = 0; c < 3; ++c) {
      etaj[c] = dot(fr.eta(), gp[size_t(c)] - gm[size_t(c)]);
      zetaj[c] = dot(fr.zeta(), gp[size_t(c)] - gm[size_t(c)]);
    }
    for (int r = 0; r < 3; ++r) {
      double lhs = er->rhs(r, T, etaj, zetaj);
      double rhs = 0.0;
      for (int col = 0; col < 18; ++col) rhs += er->rows[r][col] * alpha[size_t(col)];
      double scale = std::max(1.0, std::fabs(lhs));
      EXPECT_NEAR(lhs, rhs, 1e-10 * scale);
    }
  }
}

TEST(SelectEliminationPair, PaperWorkedChoice) {
  SetAvailability av;
  for (int s = 0; s < 6; ++s) {
    av.available[s] = true;
    av.score[s] = 9;
  }
  // y-meshline, everything available: eliminate x+ and z+.
  auto pair = select_elimination_pair(1, av);
  EXPECT_EQ(pair.first, 0);
  EXPECT_EQ(pair.second, 4);
}

TEST(SelectEliminationPair, UnavailableSetIsEliminated) {
  SetAvailability av;
  for (int s = 0; s < 6; ++s) {
    av.available[s] = true;
    av.score[s] = 9;
  }
  av.available[1] = false;  // x- unavailable on a y-meshline
  auto pair = select_elimination_pair(1, av);
  EXPECT_TRUE(pair.first == 1 || pair.second == 1);
}

TEST(SelectEliminationPair, NoViablePair) {
  SetAvailability av;  // only the meshline sets evaluable
  av.available[2] = av.available[3] = true;
  EXPECT_THROW(select_elimination_pair(1, av), NoViablePair);
}
