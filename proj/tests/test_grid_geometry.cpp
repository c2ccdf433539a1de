#include <gtest/gtest.h>

#include "mib/grid.hpp"
#include "mib/intersections.hpp"
#include "mib/shapes.hpp"

using namespace mib;

TEST(BuildGrid, SpacingFromBounds) {
  Grid g = build_grid({-3, -3, -3}, {3, 3, 3}, {10, 10, 10});
  EXPECT_DOUBLE_EQ(g.h.x, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(g.h.y, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(g.h.z, 2.0 / 3.0);
  // Node coordinates reproduce exactly.
  EXPECT_DOUBLE_EQ(g.node(0, 0, 0).x, -3.0);
  EXPECT_DOUBLE_EQ(g.node(9, 9, 9).z, -3.0 + 9 * (2.0 / 3.0));
}

TEST(BuildGrid, RejectsTooFewNodes) {
  EXPECT_THROW(build_grid({-3, -3, -3}, {3, 3, 3}, {3, 10, 10}), InvalidGrid);
}

TEST(BuildGrid, RejectsInvertedBounds) {
  EXPECT_THROW(build_grid({0, 0, 0}, {1, 1, -1}, {5, 5, 5}), InvalidGrid);
}

TEST(BuildGrid, AnisotropicSpacing) {
  Grid g = build_grid({-2, -2, -2}, {2, 2, 4.4}, {40, 40, 40});
  EXPECT_NEAR(g.h.z, 6.4 / 39.0, 1e-15);
  EXPECT_NEAR(g.h.x, 4.0 / 39.0, 1e-15);
}

TEST(ClassifyNodes, SphereSigns) {
  Grid g = build_grid({-3, -3, -3}, {3, 3, 3}, {10, 10, 10});
  auto shape = shapes::sphere(2.0);
  PhaseMap pm = classify_nodes(g, shape);
  // (0,0,0) is not a node on this grid; use the nearest lattice point inside.
  Grid g2 = build_grid({-3, -3, -3}, {3, 3, 3}, {13, 13, 13});
  PhaseMap pm2 = classify_nodes(g2, shape);
  EXPECT_EQ(pm2.at(g2.lin(6, 6, 6)), Phase::Minus);  // origin, phi = -4
  EXPECT_EQ(pm2.at(g2.lin(12, 12, 12)), Phase::Plus);  // (3,3,3)
  (void)pm;
}

TEST(ClassifyNodes, SinglePointSphereIsCrossIrregularEverywhere) {
  // Tiny sphere centered on a node: one enclosed node, cross-irregular in all
  // planes, surrounded by the opposite phase.
  Grid g = build_grid({-1, -1, -1}, {1, 1, 1}, {9, 9, 9});
  double h = g.h.x;
  InterfaceShape s;
  s.id = "tiny";
  s.phi = [h](const Vec3& p) { return dot(p, p) - (0.5 * h) * (0.5 * h); };
  s.grad = [](const Vec3& p) { return p * 2.0; };
  PhaseMap pm = classify_nodes(g, s);
  int64_t center = g.lin(4, 4, 4);
  EXPECT_EQ(pm.at(center), Phase::Minus);
  int64_t minus_count = 0;
  for (int64_t l = 0; l < g.num_nodes(); ++l)
    if (pm.at(l) == Phase::Minus) ++minus_count;
  EXPECT_EQ(minus_count, 1);
  for (Plane p : {Plane::XY, Plane::XZ, Plane::YZ})
    EXPECT_TRUE(pm.cross_irregular(center, p));
  for (int d = 0; d < 3; ++d) EXPECT_TRUE(pm.central_irregular(center, d));
}

TEST(FindIntersections, SphereOnAxis) {
  Grid g = build_grid({-3, -3, -3}, {3, 3, 3}, {13, 13, 13});
  auto shape = shapes::sphere(2.0);
  PhaseMap pm = classify_nodes(g, shape);
  IntersectionSet is = find_intersections(g, shape, pm);
  // y-meshline through (0, ., 0): crossings at y = +-2.
  int found = 0;
  for (const auto& isec : is.all) {
    if (isec.axis != 1) continue;
    if (isec.lower[0] == 6 && isec.lower[2] == 6) {
      ++found;
      EXPECT_NEAR(std::fabs(isec.position.y), 2.0, 1e-9);
      EXPECT_NEAR(std::fabs(shape.phi(isec.position)), 0.0, 1e-10);
    }
  }
  EXPECT_EQ(found, 2);
}

TEST(FindIntersections, NormalAnglesAtSpherePoint) {
  auto shape = shapes::sphere(2.0);
  auto [theta, phi] = normal_angles(shape, {0.0, 2.0, 0.0});
  EXPECT_NEAR(theta, M_PI / 2.0, 1e-12);
  EXPECT_NEAR(phi, M_PI / 2.0, 1e-12);
}

TEST(FindIntersections, TorusXLine) {
  // x-meshline through y=0, z=0 crosses the torus tube at +-2 and +-6.
  Grid g = build_grid({-10, -10, -5}, {10, 10, 5}, {21, 21, 11});
  auto shape = shapes::torus(4.0, 2.0);
  PhaseMap pm = classify_nodes(g, shape);
  IntersectionSet is = find_intersections(g, shape, pm);
  std::vector<double> roots;
  for (const auto& isec : is.all)
    if (isec.axis == 0 && isec.lower[1] == 10 && isec.lower[2] == 5)
      roots.push_back(isec.position.x);
  std::sort(roots.begin(), roots.end());
  ASSERT_EQ(roots.size(), 4u);
  EXPECT_NEAR(roots[0], -6.0, 1e-9);
  EXPECT_NEAR(roots[1], -2.0, 1e-9);
  EXPECT_NEAR(roots[2], 2.0, 1e-9);
  EXPECT_NEAR(roots[3], 6.0, 1e-9);
}

TEST(NormalAngles, ParametrizationCases) {
  InterfaceShape s;
  s.phi = [](const Vec3&) { return 0.0; };
  Vec3 fixed;
  s.grad = [&fixed](const Vec3&) { return fixed; };

  fixed = {0, 0, 1};
  auto [t0, p0] = normal_angles(s, {});
  EXPECT_NEAR(t0, 0.0, 1e-12);
  EXPECT_NEAR(p0, 0.0, 1e-12);

  fixed = {1, 0, 0};
  auto [t1, p1] = normal_angles(s, {});
  EXPECT_NEAR(t1, 0.0, 1e-12);
  EXPECT_NEAR(p1, M_PI / 2.0, 1e-12);

  double inv = 1.0 / std::sqrt(3.0);
  fixed = {inv, inv, inv};
  auto [t2, p2] = normal_angles(s, {});
  EXPECT_NEAR(t2, M_PI / 4.0, 1e-12);
  EXPECT_NEAR(p2, std::acos(inv), 1e-12);

  fixed = {1e-9, 0, 0};
  EXPECT_THROW(normal_angles(s, {}), DegenerateNormal);
}

// Reconstruction property: n(theta, phi) matches the normalized gradient at
// every recorded intersection.
TEST(Invariants, NormalReconstruction) {
  Grid g = build_grid({-3, -3, -3}, {3, 3, 3}, {17, 17, 17});
  auto shape = shapes::ellipsoid();
  Grid ge = build_grid({-3, -4, -2}, {3, 4, 2}, {17, 17, 17});
  PhaseMap pm = classify_nodes(ge, shape);
  IntersectionSet is = find_intersections(ge, shape, pm);
  ASSERT_GT(is.all.size(), 0u);
  for (const auto& isec : is.all) {
    ASSERT_FALSE(isec.degenerate);
    Vec3 grad = shape.grad(isec.position);
    Vec3 n = grad / norm(grad);
    double sp = std::sin(isec.phi_angle), cp = std::cos(isec.phi_angle);
    double st = std::sin(isec.theta), ct = std::cos(isec.theta);
    Vec3 rec{sp * ct, sp * st, cp};
    EXPECT_GE(dot(rec, n), 1.0 - 1e-10);
  }
  (void)g;
}

// Parity property: phase tags alternate exactly at recorded intersections
// along every meshline.
TEST(Invariants, PhaseParityAlongLines) {
  Grid g = build_grid({-3, -3, -3}, {3, 3, 3}, {12, 12, 12});
  auto shape = shapes::sphere(2.0);
  PhaseMap pm = classify_nodes(g, shape);
  IntersectionSet is = find_intersections(g, shape, pm);
  for (int axis = 0; axis < 3; ++axis) {
    int o1 = (axis + 1) % 3, o2 = (axis + 2) % 3;
    for (int b = 0; b < g.n[o2]; ++b)
      for (int a = 0; a < g.n[o1]; ++a)
        for (int m = 0; m + 1 < g.n[axis]; ++m) {
          Index3 lo{};
          lo[axis] = m;
          lo[o1] = a;
          lo[o2] = b;
          Index3 hi = lo;
          hi[axis] = m + 1;
          bool flip = pm.at(g.lin(lo)) != pm.at(g.lin(hi));
          bool has = is.find(g, axis, lo) >= 0;
          EXPECT_EQ(flip, has);
        }
  }
}

// Refinement property: halving h keeps every transversal intersection (a finer
// intersection exists within h of each coarse one).
TEST(Invariants, RefinementKeepsIntersections) {
  auto shape = shapes::sphere(2.0);
  Grid gc = build_grid({-3, -3, -3}, {3, 3, 3}, {11, 11, 11});
  Grid gf = build_grid({-3, -3, -3}, {3, 3, 3}, {21, 21, 21});
  PhaseMap pc = classify_nodes(gc, shape);
  PhaseMap pf = classify_nodes(gf, shape);
  auto ic = find_intersections(gc, shape, pc);
  auto iff = find_intersections(gf, shape, pf);
  for (const auto& c : ic.all) {
    double best = 1e9;
    for (const auto& f : iff.all)
      best = std::min(best, norm(c.position - f.position));
    EXPECT_LE(best, gc.h.x);
  }
}

TEST(Shapes, PiecewiseGradientsPointOutward) {
  // At piece-interior interface points the gradient matches the active piece.
  auto cyl = shapes::cylinder(M_PI / 2.0, 0.0, M_PI);
  Vec3 side{M_PI / 2.0, 0.0, 1.0};
  Vec3 gs = cyl.grad(side);
  EXPECT_NEAR(gs.x, 1.0, 1e-12);
  EXPECT_NEAR(gs.z, 0.0, 1e-12);
  Vec3 cap{0.3, 0.2, M_PI};
  Vec3 gc = cyl.grad(cap);
  EXPECT_NEAR(gc.z, 1.0, 1e-12);

  auto hemi = shapes::hemisphere(2.0);
  Vec3 disk{0.5, 0.5, 0.0};
  Vec3 gd = hemi.grad(disk);
  EXPECT_NEAR(gd.z, -1.0, 1e-12);
  EXPECT_LT(hemi.phi({0.5, 0.5, 0.5}), 0.0);
  EXPECT_GT(hemi.phi({0.5, 0.5, -0.5}), 0.0);
}

TEST(Shapes, AcornAndStarEnclose) {
  auto ac = shapes::acorn();
  EXPECT_LT(ac.phi({0, 0, -1.0}), 0.0);
  EXPECT_LT(ac.phi({0, 0, 0.5}), 0.0);
  EXPECT_GT(ac.phi({0, 0, 1.0}), 0.0);  // above the tip at z = 6/7
  EXPECT_GT(ac.phi({3, 0, 0}), 0.0);
  EXPECT_NEAR(ac.singular_distance({0, 0, 6.0 / 7.0}), 0.0, 1e-12);

  auto star = shapes::pentagon_star_prism();
  EXPECT_LT(star.phi({0, 0, 0}), 0.0);
  EXPECT_GT(star.phi({1.0, 1.0, 0}), 0.0);
  EXPECT_GT(star.phi({0, 0, 1.0}), 0.0);  // beyond the z cap
  // Tooth tip at radius R = 6/7 along theta_r.
  double tr = M_PI / 7.0, R = 6.0 / 7.0;
  Vec3 tip{R * std::cos(tr), R * std::sin(tr), 0.0};
  EXPECT_NEAR(star.phi(tip), 0.0, 1e-9);
  EXPECT_NEAR(star.singular_distance(tip), 0.0, 1e-9);

  auto apple = shapes::apple();
  EXPECT_LT(apple.phi({0, 0, -1.9}), 0.0);
  EXPECT_GT(apple.phi({0, 0, 2.0}), 0.0);
  EXPECT_NEAR(apple.singular_distance({0, 0, 0}), 0.0, 1e-12);
}
