#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "mib/grid.hpp"
#include "mib/shapes.hpp"

namespace mib {

inline std::function<Vec3(const Vec3&)> make_fd_gradient(
    std::function<double(const Vec3&)> phi, double h) {
  double step = 1e-6 * h;
  return [phi, step](const Vec3& p) -> Vec3 {
    Vec3 g;
    for (int d = 0; d < 3; ++d) {
      Vec3 a = p, b = p;
      a[d] -= step;
      b[d] += step;
      g[d] = (phi(b) - phi(a)) / (2.0 * step);
    }
    return g;
  };
}

// Azimuth/zenith pair such that n = (sin(phi)cos(theta), sin(phi)sin(theta), cos(phi))
// equals the normalized outward gradient of the implicit function.
inline std::pair<double, double> normal_angles(const InterfaceShape& shape,
                                               const Vec3& point) {
  Vec3 g = shape.grad(point);
  double len = norm(g);
  if (len < 1e-8)
    throw DegenerateNormal("normal_angles: |grad phi| < 1e-8 at interface point");
  Vec3 nrm = g / len;
  double phi_angle = std::acos(std::clamp(nrm.z, -1.0, 1.0));
  double theta = std::atan2(nrm.y, nrm.x);
  if (std::hypot(nrm.x, nrm.y) < 1e-15) theta = 0.0;
  return {theta, phi_angle};
}

struct Intersection {
  Vec3 position;
  int axis = 0;       // meshline direction
  Index3 lower{};     // bracketing node with the smaller index along axis
  double theta = 0.0;
  double phi_angle = 0.0;
  bool degenerate = false;  // |grad phi| < 1e-8 at the root
  Phase lower_phase = Phase::Minus;
};

struct IntersectionSet {
  std::vector<Intersection> all;
  // axis*num_nodes + lin(lower) -> index into all
  std::unordered_map<int64_t, int> by_segment;

  int find(const Grid& g, int axis, const Index3& lower) const {
    auto it = by_segment.find(axis * g.num_nodes() + g.lin(lower));
    return it == by_segment.end() ? -1 : it->second;
  }
};

inline PhaseMap classify_nodes(const Grid& g, const InterfaceShape& shape) {
  PhaseMap pm;
  pm.n = g.n;
  pm.phase.assign(size_t(g.num_nodes()), 0);
  pm.central_bits.assign(size_t(g.num_nodes()), 0);
  pm.cross_bits.assign(size_t(g.num_nodes()), 0);

  double href = std::max({g.h[0], g.h[1], g.h[2]});
  double tie = 1e-12 * href;
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        double v = shape.phi(g.node(i, j, k));
        // Nodes within the tie band count as Omega- (deterministic tie-break).
        Phase ph = (v > tie) ? Phase::Plus : Phase::Minus;
        pm.phase[size_t(g.lin(i, j, k))] = uint8_t(ph);
      }

  auto tag = [&](int64_t l) { return pm.phase[size_t(l)]; };
  for (int k = 0; k < g.n[2]; ++k)
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i) {
        Index3 id{i, j, k};
        int64_t l = g.lin(id);
        uint8_t cb = 0;
        for (int d = 0; d < 3; ++d) {
          for (int s : {-1, 1}) {
            Index3 nb = id;
            nb[d] += s;
            if (g.in_bounds(nb) && tag(g.lin(nb)) != tag(l)) cb |= uint8_t(1 << d);
          }
        }
        pm.central_bits[size_t(l)] = cb;
        uint8_t xb = 0;
        for (Plane p : {Plane::XY, Plane::XZ, Plane::YZ}) {
          auto [a, b] = plane_axes(p);
          for (int sa : {-1, 1})
            for (int sb : {-1, 1}) {
              Index3 nb = id;
              nb[a] += sa;
              nb[b] += sb;
              if (g.in_bounds(nb) && tag(g.lin(nb)) != tag(l)) xb |= uint8_t(1 << int(p));
            }
        }
        pm.cross_bits[size_t(l)] = xb;
      }
  return pm;
}

// One intersection per phase change between adjacent nodes on every mesh line.
// Roots are located by bracketed bisection (200-iteration cap); normals come
// from the normalized implicit gradient. Degenerate normals are recorded, not
// thrown; the owning fictitious-value computation falls back to disassociation.
inline IntersectionSet find_intersections(const Grid& g, const InterfaceShape& shape,
                                          const PhaseMap& pm) {
  IntersectionSet out;
  double href = std::max({g.h[0], g.h[1], g.h[2]});
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
          Phase pl = pm.at(g.lin(lo)), ph = pm.at(g.lin(hi));
          if (pl == ph) continue;

          Vec3 pa = g.node(lo), pb = g.node(hi);
          double fa = shape.phi(pa), fb = shape.phi(pb);
          // Tags follow the perturbation rule, so force endpoint signs to match
          // the tags before bisecting.
          double sa = (pl == Phase::Plus) ? 1.0 : -1.0;
          double sb = (ph == Phase::Plus) ? 1.0 : -1.0;
          if (fa * sa <= 0.0) fa = sa * 1e-300;
          if (fb * sb <= 0.0) fb = sb * 1e-300;

          double ta = pa[axis], tb = pb[axis];
          Vec3 root = pa;
          for (int it = 0; it < 200; ++it) {
            double tm = 0.5 * (ta + tb);
            root[axis] = tm;
            double fm = shape.phi(root);
            if (fm == 0.0) break;
            if ((fm > 0.0) == (fa > 0.0)) {
              ta = tm;
              fa = fm;
            } else {
              tb = tm;
              fb = fm;
            }
            if (tb - ta < 1e-16 * href) break;
          }
          double t = 0.5 * (ta + tb);
          // Strictly between the bracketing nodes.
          double eps = 1e-14 * g.h[axis];
          t = std::clamp(t, pa[axis] + eps, pb[axis] - eps);
          root[axis] = t;

          Intersection isec;
          isec.position = root;
          isec.axis = axis;
          isec.lower = lo;
          isec.lower_phase = pl;
          try {
            auto [theta, phi_angle] = normal_angles(shape, root);
            isec.theta = theta;
            isec.phi_angle = phi_angle;
          } catch (const DegenerateNormal&) {
            isec.degenerate = true;
          }
          out.by_segment[axis * g.num_nodes() + g.lin(lo)] = int(out.all.size());
          out.all.push_back(isec);
        }
  }
  return out;
}

}  // namespace mib
