#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "mib/core.hpp"

namespace mib {

// Interface-adapted frame: xi along the outward normal, eta in the xy plane.
// Rows of P are the xi, eta, zeta directions expressed in (x, y, z).
struct LocalFrame {
  double theta = 0.0, phi = 0.0;
  double P[3][3] = {};

  Vec3 row(int r) const { return {P[r][0], P[r][1], P[r][2]}; }
  Vec3 normal() const { return row(0); }
  Vec3 eta() const { return row(1); }
  Vec3 zeta() const { return row(2); }
};

inline LocalFrame transformation_matrix(double theta, double phi) {
  LocalFrame f;
  f.theta = theta;
  f.phi = phi;
  double st = std::sin(theta), ct = std::cos(theta);
  double sp = std::sin(phi), cp = std::cos(phi);
  f.P[0][0] = sp * ct;
  f.P[0][1] = sp * st;
  f.P[0][2] = cp;
  f.P[1][0] = -st;
  f.P[1][1] = ct;
  f.P[1][2] = 0.0;
  f.P[2][0] = -cp * ct;
  f.P[2][1] = -cp * st;
  f.P[2][2] = sp;
  return f;
}

// Jump data at one intersection point: displacement jump b = [u], traction
// jump T = [stress . n], and tangential derivative jumps along eta and zeta.
// Jumps are oriented plus-minus throughout: [q] = q+ - q-.
struct JumpData {
  Vec3 b;
  Vec3 traction;
  Vec3 eta_jump;
  Vec3 zeta_jump;
};

// The 9x18 relation between the nine jump quantities
//   (T1, T2, T3, [u1_eta], [u2_eta], [u3_eta], [u1_zeta], [u2_zeta], [u3_zeta])
// and the 18 one-sided interfacial derivatives, ordered
//   (du1+/dx, du1-/dx, du1+/dy, du1-/dy, du1+/dz, du1-/dz, du2+/dx, ... du3-/dz).
// Column pattern: odd positions carry + limits, even carry - limits negated.
struct JumpMatrix {
  double C[9][18] = {};
  double M_plus = 0.0, M_minus = 0.0;
  double lambda_plus = 0.0, lambda_minus = 0.0;
  double mu_plus = 0.0, mu_minus = 0.0;

  double max_abs() const {
    double v = 0.0;
    for (auto& row : C)
      for (double e : row) v = std::max(v, std::fabs(e));
    return v;
  }
};

// Column index of derivative set s (0..5 = x+, x-, y+, y-, z+, z-) of
// component c (0..2).
inline int jump_col(int component, int set) { return 6 * component + set; }
inline int set_axis(int set) { return set / 2; }
inline bool set_is_plus(int set) { return (set % 2) == 0; }

inline JumpMatrix assemble_C(const LocalFrame& fr, double M_plus, double M_minus,
                             double lambda_plus, double lambda_minus,
                             double mu_plus, double mu_minus) {
  JumpMatrix J;
  J.M_plus = M_plus;
  J.M_minus = M_minus;
  J.lambda_plus = lambda_plus;
  J.lambda_minus = lambda_minus;
  J.mu_plus = mu_plus;
  J.mu_minus = mu_minus;
  const auto& P = fr.P;
  auto put = [&](int r, int c, double plus, double minus) {
    J.C[r][c] = plus;
    J.C[r][c + 1] = -minus;
  };

  // Traction rows. The stress coefficient of the normal-aligned derivative is
  // the p-wave modulus M = lambda + 2 mu.
  // Block C_{1,1}: u1 derivative columns.
  put(0, 0, M_plus * P[0][0], M_minus * P[0][0]);
  put(0, 2, mu_plus * P[0][1], mu_minus * P[0][1]);
  put(0, 4, mu_plus * P[0][2], mu_minus * P[0][2]);
  put(1, 0, lambda_plus * P[0][1], lambda_minus * P[0][1]);
  put(1, 2, mu_plus * P[0][0], mu_minus * P[0][0]);
  put(2, 0, lambda_plus * P[0][2], lambda_minus * P[0][2]);
  put(2, 4, mu_plus * P[0][0], mu_minus * P[0][0]);
  // Block C_{1,2}: u2 derivative columns.
  put(0, 6, mu_plus * P[0][1], mu_minus * P[0][1]);
  put(0, 8, lambda_plus * P[0][0], lambda_minus * P[0][0]);
  put(1, 6, mu_plus * P[0][0], mu_minus * P[0][0]);
  put(1, 8, M_plus * P[0][1], M_minus * P[0][1]);
  put(1, 10, mu_plus * P[0][2], mu_minus * P[0][2]);
  put(2, 8, lambda_plus * P[0][2], lambda_minus * P[0][2]);
  put(2, 10, mu_plus * P[0][1], mu_minus * P[0][1]);
  // Block C_{1,3}: u3 derivative columns.
  put(0, 12, mu_plus * P[0][2], mu_minus * P[0][2]);
  put(0, 16, lambda_plus * P[0][0], lambda_minus * P[0][0]);
  put(1, 14, mu_plus * P[0][2], mu_minus * P[0][2]);
  put(1, 16, lambda_plus * P[0][1], lambda_minus * P[0][1]);
  put(2, 12, mu_plus * P[0][0], mu_minus * P[0][0]);
  put(2, 14, mu_plus * P[0][1], mu_minus * P[0][1]);
  put(2, 16, M_plus * P[0][2], M_minus * P[0][2]);

  // Tangential-derivative rows depend only on P. Eta rows have no z-derivative
  // entries since P(2,3) = 0.
  for (int c = 0; c < 3; ++c) {
    put(3 + c, 6 * c + 0, P[1][0], P[1][0]);
    put(3 + c, 6 * c + 2, P[1][1], P[1][1]);
    put(6 + c, 6 * c + 0, P[2][0], P[2][0]);
    put(6 + c, 6 * c + 2, P[2][1], P[2][1]);
    put(6 + c, 6 * c + 4, P[2][2], P[2][2]);
  }
  return J;
}

// Six combined interface conditions at one intersection. Rows 0-2 are the
// value jumps [u_c] = b_c (handled by the local solver directly); rows 3-5 are
// stored here: combined_row . (18 derivatives) = coef . (T_r and the six
// tangential jumps), with the designated columns l, m (and +6, +12 copies)
// eliminated.
struct EliminationResult {
  int l = 0, m = 0;  // eliminated sets, 0-based
  bool special_z_pair = false;
  // Per combined row r: multipliers of (T_r, [u1_eta], [u1_zeta], [u2_eta],
  // [u2_zeta], [u3_eta], [u3_zeta]).
  double coef[3][7] = {};
  double rows[3][18] = {};

  double rhs(int r, const Vec3& traction, const Vec3& eta_jump,
             const Vec3& zeta_jump) const {
    const double* k = coef[r];
    return k[0] * traction[r] + k[1] * eta_jump[0] + k[2] * zeta_jump[0] +
           k[3] * eta_jump[1] + k[4] * zeta_jump[1] + k[5] * eta_jump[2] +
           k[6] * zeta_jump[2];
  }
};

inline std::optional<EliminationResult> try_elimination_coefficients(
    const JumpMatrix& J, int l, int m) {
  if (l == m || l < 0 || m < 0 || l > 5 || m > 5) return std::nullopt;
  EliminationResult R;
  R.l = l;
  R.m = m;
  const auto& C = J.C;

  if ((l == 4 && m == 5) || (l == 5 && m == 4)) {
    // Both z-sets drop out of the eta rows for free, so use the tangential
    // conditions along eta directly.
    R.special_z_pair = true;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 18; ++c) R.rows[r][c] = C[3 + r][c];
      R.coef[r][1 + 2 * r] = 1.0;  // [u_{r+1}_eta]
    }
    return R;
  }

  double a = C[3][l] * C[6][m] - C[6][l] * C[3][m];
  double scale = J.max_abs();
  if (std::fabs(a) <= 1e-10 * scale * scale) return std::nullopt;

  for (int r = 0; r < 3; ++r) {
    double b = C[6][l] * C[r][m] - C[r][l] * C[6][m];
    double c = C[r][l] * C[3][m] - C[3][l] * C[r][m];
    double d = C[7][l + 6] * C[r][m + 6] - C[r][l + 6] * C[7][m + 6];
    double e = C[r][l + 6] * C[4][m + 6] - C[4][l + 6] * C[r][m + 6];
    double f = C[8][l + 12] * C[r][m + 12] - C[r][l + 12] * C[8][m + 12];
    double g = C[r][l + 12] * C[5][m + 12] - C[5][l + 12] * C[r][m + 12];
    R.coef[r][0] = a;
    R.coef[r][1] = b;
    R.coef[r][2] = c;
    R.coef[r][3] = d;
    R.coef[r][4] = e;
    R.coef[r][5] = f;
    R.coef[r][6] = g;
    for (int col = 0; col < 18; ++col)
      R.rows[r][col] = a * C[r][col] + b * C[3][col] + c * C[6][col] +
                       d * C[4][col] + e * C[7][col] + f * C[5][col] +
                       g * C[8][col];
  }

  double row_max = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int col = 0; col < 18; ++col)
      row_max = std::max(row_max, std::fabs(R.rows[r][col]));
  if (row_max < 1e-10 * scale * scale * scale) return std::nullopt;
  return R;
}

struct DegenerateElimination : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoViablePair : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline EliminationResult elimination_coefficients(const JumpMatrix& J, int l, int m) {
  auto r = try_elimination_coefficients(J, l, m);
  if (!r) throw DegenerateElimination("elimination_coefficients: degenerate pair");
  return *r;
}

// Availability of the six derivative sets at one intersection: whether a
// one-sided 3x3 auxiliary stencil exists in-phase, and how many real in-phase
// nodes the best candidate carries.
struct SetAvailability {
  bool available[6] = {};
  int score[6] = {};
};

// Candidate (l, m) pairs to eliminate, best first. Never touches the meshline
// direction's two sets; prefers eliminating the sets with the fewest available
// in-phase auxiliary nodes, then the + side, then the smaller direction.
// Empty result = NoViablePair (fewer than two of the four are evaluable).
inline std::vector<std::pair<int, int>> ranked_elimination_pairs(
    int meshline_axis, const SetAvailability& av) {
  std::vector<int> sets;
  for (int s = 0; s < 6; ++s)
    if (set_axis(s) != meshline_axis) sets.push_back(s);

  struct Cand {
    int l, m;
    int key_sum, key_plus;
  };
  std::vector<Cand> cands;
  for (size_t i = 0; i < sets.size(); ++i)
    for (size_t j = i + 1; j < sets.size(); ++j) {
      int l = sets[i], m = sets[j];
      bool kept_ok = true;
      for (int s : sets)
        if (s != l && s != m && !av.available[s]) kept_ok = false;
      if (!kept_ok) continue;
      int sum = (av.available[l] ? av.score[l] : -1) +
                (av.available[m] ? av.score[m] : -1);
      int plus = int(set_is_plus(l)) + int(set_is_plus(m));
      cands.push_back({l, m, sum, plus});
    }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.key_sum != b.key_sum) return a.key_sum < b.key_sum;
    if (a.key_plus != b.key_plus) return a.key_plus > b.key_plus;
    if (a.l != b.l) return a.l < b.l;
    return a.m < b.m;
  });
  std::vector<std::pair<int, int>> out;
  for (auto& c : cands) out.emplace_back(c.l, c.m);
  return out;
}

inline std::pair<int, int> select_elimination_pair(int meshline_axis,
                                                   const SetAvailability& av) {
  auto pairs = ranked_elimination_pairs(meshline_axis, av);
  if (pairs.empty())
    throw NoViablePair("select_elimination_pair: fewer than two evaluable sets");
  return pairs.front();
}

}  // namespace mib
