#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mib/jump.hpp"
#include "mib/materials.hpp"
#include "mib/shapes.hpp"

namespace mib {

// Scalar field value with first and second derivatives.
struct D2 {
  double v = 0.0;
  Vec3 g;
  double xx = 0.0, yy = 0.0, zz = 0.0, xy = 0.0, xz = 0.0, yz = 0.0;

  double second(int a, int b) const {
    if (a > b) std::swap(a, b);
    if (a == b) return a == 0 ? xx : (a == 1 ? yy : zz);
    if (a == 0) return b == 1 ? xy : xz;
    return yz;
  }

  D2 operator+(const D2& o) const {
    D2 r;
    r.v = v + o.v;
    r.g = g + o.g;
    r.xx = xx + o.xx;
    r.yy = yy + o.yy;
    r.zz = zz + o.zz;
    r.xy = xy + o.xy;
    r.xz = xz + o.xz;
    r.yz = yz + o.yz;
    return r;
  }
};

using ScalarField = std::function<D2(const Vec3&)>;

namespace fields {

inline D2 cos3(const Vec3& p) {
  double cx = std::cos(p.x), cy = std::cos(p.y), cz = std::cos(p.z);
  double sx = std::sin(p.x), sy = std::sin(p.y), sz = std::sin(p.z);
  D2 r;
  r.v = cx * cy * cz;
  r.g = {-sx * cy * cz, -cx * sy * cz, -cx * cy * sz};
  r.xx = r.yy = r.zz = -r.v;
  r.xy = sx * sy * cz;
  r.xz = sx * cy * sz;
  r.yz = cx * sy * sz;
  return r;
}

// x^2 + y^2 + z^2 - c
inline ScalarField quad(double c) {
  return [c](const Vec3& p) {
    D2 r;
    r.v = dot(p, p) - c;
    r.g = p * 2.0;
    r.xx = r.yy = r.zz = 2.0;
    return r;
  };
}

// x^2/4 + y^2/9 + z^2 - 1
inline D2 ellipsoid_quad(const Vec3& p) {
  D2 r;
  r.v = p.x * p.x / 4.0 + p.y * p.y / 9.0 + p.z * p.z - 1.0;
  r.g = {p.x / 2.0, 2.0 * p.y / 9.0, 2.0 * p.z};
  r.xx = 0.5;
  r.yy = 2.0 / 9.0;
  r.zz = 2.0;
  return r;
}

inline D2 xy(const Vec3& p) {
  D2 r;
  r.v = p.x * p.y;
  r.g = {p.y, p.x, 0.0};
  r.xy = 1.0;
  return r;
}

inline D2 yz(const Vec3& p) {
  D2 r;
  r.v = p.y * p.z;
  r.g = {0.0, p.z, p.y};
  r.yz = 1.0;
  return r;
}

inline D2 xyz(const Vec3& p) {
  D2 r;
  r.v = p.x * p.y * p.z;
  r.g = {p.y * p.z, p.x * p.z, p.x * p.y};
  r.xy = p.z;
  r.xz = p.y;
  r.yz = p.x;
  return r;
}

inline ScalarField constant(double c) {
  return [c](const Vec3&) {
    D2 r;
    r.v = c;
    return r;
  };
}

inline ScalarField sum(ScalarField a, ScalarField b) {
  return [a = std::move(a), b = std::move(b)](const Vec3& p) { return a(p) + b(p); };
}

}  // namespace fields

// Exact governing-equation left-hand side for one component; the body force is
// F_eq = -lhs.
inline double elasticity_lhs(const MaterialPoint& m, const std::array<D2, 3>& u,
                             int eq) {
  double lhs = m.M * u[size_t(eq)].second(eq, eq);
  for (int d = 0; d < 3; ++d) {
    if (d == eq) continue;
    lhs += m.mu * u[size_t(eq)].second(d, d);
    lhs += (m.lambda + m.mu) * u[size_t(d)].second(eq, d);
  }
  double div = u[0].g[0] + u[1].g[1] + u[2].g[2];
  lhs += m.grad_lambda[eq] * div + 2.0 * m.grad_mu[eq] * u[size_t(eq)].g[eq];
  for (int d = 0; d < 3; ++d) {
    if (d == eq) continue;
    lhs += m.grad_mu[d] * (u[size_t(eq)].g[d] + u[size_t(d)].g[eq]);
  }
  return lhs;
}

inline Vec3 traction(const MaterialPoint& m, const std::array<D2, 3>& u,
                     const Vec3& n) {
  double div = u[0].g[0] + u[1].g[1] + u[2].g[2];
  Vec3 t;
  for (int r = 0; r < 3; ++r) {
    double s = m.lambda * div * n[r];
    for (int d = 0; d < 3; ++d)
      s += m.mu * (u[size_t(r)].g[d] + u[size_t(d)].g[r]) * n[d];
    t[r] = s;
  }
  return t;
}

// One catalog entry: domain, interface, materials, exact two-phase solution
// with analytic derivatives, and the grids used in the convergence studies.
// Phase convention: Omega+ = {phi > 0} is the unbounded side for every shape;
// the labeled +/- materials and solutions attach to those sides.
struct ManufacturedProblem {
  int example = 0;
  int case_id = 1;
  std::string name;
  Vec3 lo, hi;
  InterfaceShape shape;
  MaterialField materials;
  std::array<ScalarField, 3> u_plus, u_minus;
  std::vector<int> grids;          // cataloged node counts per direction
  std::vector<double> grid_sizes;  // cataloged grid sizes (examples 6, 10-12)
  bool by_grid_size = false;

  const std::array<ScalarField, 3>& side(Phase p) const {
    return p == Phase::Plus ? u_plus : u_minus;
  }

  std::array<D2, 3> eval(const Vec3& x, Phase p) const {
    const auto& u = side(p);
    return {u[0](x), u[1](x), u[2](x)};
  }

  double exact(const Vec3& x, int comp, Phase p) const {
    return side(p)[size_t(comp)](x).v;
  }

  double forcing(const Vec3& x, int eq, Phase p) const {
    MaterialPoint m = materials.evaluate(x, p);
    auto u = eval(x, p);
    return -elasticity_lhs(m, u, eq);
  }

  JumpData jump_data(const Vec3& x, const LocalFrame& fr) const {
    auto up = eval(x, Phase::Plus);
    auto um = eval(x, Phase::Minus);
    JumpData jd;
    for (int c = 0; c < 3; ++c) jd.b[c] = up[size_t(c)].v - um[size_t(c)].v;
    MaterialPoint mp = materials.evaluate(x, Phase::Plus);
    MaterialPoint mm = materials.evaluate(x, Phase::Minus);
    Vec3 n = fr.normal();
    jd.traction = traction(mp, up, n) - traction(mm, um, n);
    for (int c = 0; c < 3; ++c) {
      Vec3 dg = up[size_t(c)].g - um[size_t(c)].g;
      jd.eta_jump[c] = dot(fr.eta(), dg);
      jd.zeta_jump[c] = dot(fr.zeta(), dg);
    }
    return jd;
  }
};

namespace detail_catalog {

// Weak-discontinuity solution family of the smooth-interface studies: the +
// side adds the interface quadric so [u] vanishes on the zero set.
inline void continuous_solution(ManufacturedProblem& p, ScalarField quad) {
  using namespace fields;
  ScalarField c3 = [](const Vec3& x) { return cos3(x); };
  ScalarField fxy = [](const Vec3& x) { return xy(x); };
  ScalarField fyz = [](const Vec3& x) { return yz(x); };
  p.u_minus = {c3, sum(fxy, c3), sum(fyz, c3)};
  p.u_plus = {sum(quad, c3), sum(quad, sum(fxy, c3)), sum(quad, sum(fyz, c3))};
}

// Strong-discontinuity family (examples 4-6, 8-9): plus side is the bare
// polynomial x^2+y^2+z^2-4 (+ xy, + yz), minus side keeps the trig field.
inline void discontinuous_solution(ManufacturedProblem& p) {
  using namespace fields;
  ScalarField c3 = [](const Vec3& x) { return cos3(x); };
  ScalarField fxy = [](const Vec3& x) { return xy(x); };
  ScalarField fyz = [](const Vec3& x) { return yz(x); };
  ScalarField q4 = quad(4.0);
  p.u_plus = {q4, sum(q4, fxy), sum(q4, fyz)};
  p.u_minus = {c3, sum(fxy, c3), sum(fyz, c3)};
}

// Nonsmooth-interface family (examples 10-12): smooth + side, constant - side.
inline void singular_solution(ManufacturedProblem& p) {
  using namespace fields;
  ScalarField c3 = [](const Vec3& x) { return cos3(x); };
  p.u_plus = {sum(c3, [](const Vec3& x) { return xyz(x); }),
              sum(c3, quad(0.0)), c3};
  p.u_minus = {constant(3.0), constant(3.0), constant(3.0)};
}

inline MaterialField constant_materials(double mu_p, double nu_p, double mu_m,
                                        double nu_m) {
  MaterialField m;
  m.plus = PhaseMaterial::constant(mu_p, nu_p);
  m.minus = PhaseMaterial::constant(mu_m, nu_m);
  return m;
}

inline void sphere_case_materials(ManufacturedProblem& p, int case_id) {
  switch (case_id) {
    case 1:
      p.materials = constant_materials(1.5e6, 0.20, 2.0e6, 0.24);
      break;
    case 2:
      p.materials = constant_materials(1.5e6, 0.00024, 2.0e6, 0.24);
      break;
    case 3:
      p.materials = constant_materials(2.0e3, 0.20, 2.0e6, 0.24);
      break;
    default:
      throw UnknownCase("case must be 1, 2 or 3");
  }
}

}  // namespace detail_catalog

inline std::vector<std::pair<int, int>> catalog_cases() {
  std::vector<std::pair<int, int>> v;
  for (int e : {1, 2, 3})
    for (int c : {1, 2, 3}) v.emplace_back(e, c);
  for (int e = 4; e <= 12; ++e) v.emplace_back(e, 1);
  return v;
}

inline ManufacturedProblem manufactured_case(int example, int case_id = 1) {
  using namespace detail_catalog;
  ManufacturedProblem p;
  p.example = example;
  p.case_id = case_id;
  bool multi_case = example >= 1 && example <= 3;
  if ((multi_case && (case_id < 1 || case_id > 3)) || (!multi_case && case_id != 1))
    throw UnknownCase("manufactured_case: unknown (example, case)");

  switch (example) {
    case 1:
      p.name = "sphere";
      p.lo = {-3, -3, -3};
      p.hi = {3, 3, 3};
      p.shape = shapes::sphere(2.0);
      sphere_case_materials(p, case_id);
      continuous_solution(p, fields::quad(4.0));
      p.grids = {10, 20, 40};
      break;
    case 2:
      p.name = "hemisphere";
      p.lo = {-3, -3, -3};
      p.hi = {3, 3, 3};
      p.shape = shapes::hemisphere(2.0);
      sphere_case_materials(p, case_id);
      continuous_solution(p, fields::quad(4.0));
      p.grids = {10, 20, 40};
      break;
    case 3:
      p.name = "ellipsoid";
      p.lo = {-3, -4, -2};
      p.hi = {3, 4, 2};
      p.shape = shapes::ellipsoid();
      sphere_case_materials(p, case_id);
      continuous_solution(p, [](const Vec3& x) { return fields::ellipsoid_quad(x); });
      p.grids = {10, 20, 40};
      break;
    case 4:
      p.name = "cylinder";
      p.lo = {-2, -2, -2};
      p.hi = {2, 2, 4.4};
      p.shape = shapes::cylinder(M_PI / 2.0, 0.0, M_PI);
      p.materials = constant_materials(1.5e6, 0.20, 2.0e6, 0.24);
      discontinuous_solution(p);
      p.grids = {20, 40};
      break;
    case 5:
      p.name = "torus";
      p.lo = {-10, -10, -5};
      p.hi = {10, 10, 5};
      p.shape = shapes::torus(4.0, 2.0);
      p.materials = constant_materials(1.5e6, 0.20, 2.0e6, 0.24);
      discontinuous_solution(p);
      p.grids = {20, 40};
      break;
    case 6:
      p.name = "flower_prism";
      p.lo = {-5, -5, -2};
      p.hi = {5, 5, 2};
      p.shape = shapes::flower_prism();
      p.materials = constant_materials(1.5e6, 0.20, 2.0e6, 0.24);
      discontinuous_solution(p);
      p.grid_sizes = {0.5, 0.25};
      p.by_grid_size = true;
      break;
    case 7: {
      p.name = "sphere_variable_mu";
      p.lo = {-3, -3, -3};
      p.hi = {3, 3, 3};
      p.shape = shapes::sphere(2.0);
      p.materials.plus = PhaseMaterial::variable(
          0.20, [](const Vec3& x) { return 1.5e6 + (x.x + x.y + x.z); },
          [](const Vec3&) { return Vec3{1.0, 1.0, 1.0}; });
      p.materials.minus = PhaseMaterial::variable(
          0.24, [](const Vec3& x) { return 2.0e6 + x.x * x.y * x.z; },
          [](const Vec3& x) { return Vec3{x.y * x.z, x.x * x.z, x.x * x.y}; });
      continuous_solution(p, fields::quad(4.0));
      p.grids = {10, 20, 40};
      break;
    }
    case 8: {
      p.name = "cylinder_variable_mu";
      p.lo = {-2, -2, -2};
      p.hi = {2, 2, 4.4};
      p.shape = shapes::cylinder(M_PI / 2.0, 0.0, M_PI);
      p.materials.plus = PhaseMaterial::variable(
          0.20, [](const Vec3& x) { return 1.5e6 + 2000.0 * (x.x + x.y + x.z); },
          [](const Vec3&) { return Vec3{2000.0, 2000.0, 2000.0}; });
      p.materials.minus = PhaseMaterial::variable(
          0.24, [](const Vec3& x) { return 2.0e6 + 1500.0 * x.x * x.y * x.z; },
          [](const Vec3& x) {
            return Vec3{1500.0 * x.y * x.z, 1500.0 * x.x * x.z, 1500.0 * x.x * x.y};
          });
      discontinuous_solution(p);
      p.grids = {10, 20, 40};
      break;
    }
    case 9: {
      p.name = "cylinder_variable_mu_quadratic";
      p.lo = {-2, -2, -2};
      p.hi = {2, 2, 4.4};
      p.shape = shapes::cylinder(M_PI / 2.0, 0.0, M_PI);
      p.materials.plus = PhaseMaterial::variable(
          0.20,
          [](const Vec3& x) { return 1.5e6 + 2000.0 * dot(x, x); },
          [](const Vec3& x) { return x * 4000.0; });
      p.materials.minus = PhaseMaterial::variable(
          0.24,
          [](const Vec3& x) {
            return 2.0e6 + 1500.0 * x.x * x.x * x.y * x.y * x.z * x.z;
          },
          [](const Vec3& x) {
            double xx = x.x * x.x, yy = x.y * x.y, zz = x.z * x.z;
            return Vec3{3000.0 * x.x * yy * zz, 3000.0 * xx * x.y * zz,
                        3000.0 * xx * yy * x.z};
          });
      discontinuous_solution(p);
      p.grids = {20, 40};
      break;
    }
    case 10:
      p.name = "apple";
      p.lo = {-5, -5, -8};
      p.hi = {4.6, 4.6, 4};
      p.shape = shapes::apple();
      p.materials = constant_materials(2.0e6, 0.24, 1.5e6, 0.20);
      singular_solution(p);
      p.grid_sizes = {0.6, 0.3};
      p.by_grid_size = true;
      break;
    case 11:
      p.name = "acorn";
      p.lo = {-5, -5, -5};
      p.hi = {4.6, 4.6, 4.6};
      p.shape = shapes::acorn();
      p.materials = constant_materials(2.0e6, 0.24, 1.5e6, 0.20);
      singular_solution(p);
      p.grid_sizes = {0.48, 0.24};
      p.by_grid_size = true;
      break;
    case 12:
      p.name = "pentagon_star_prism";
      p.lo = {-1.3, -1.3, -1.3};
      p.hi = {1.1, 1.1, 1.1};
      p.shape = shapes::pentagon_star_prism();
      p.materials = constant_materials(2.0e6, 0.24, 1.5e6, 0.20);
      singular_solution(p);
      p.grid_sizes = {0.12, 0.06};
      p.by_grid_size = true;
      break;
    default:
      throw UnknownCase("manufactured_case: example must be 1..12");
  }
  return p;
}

inline Index3 counts_for_grid_size(const ManufacturedProblem& p, double h) {
  Index3 n;
  for (int d = 0; d < 3; ++d)
    n[d] = int(std::lround((p.hi[d] - p.lo[d]) / h)) + 1;
  return n;
}

}  // namespace mib
