#pragma once

#include <cstdint>
#include <vector>

#include "mib/core.hpp"

namespace mib {

// Uniform Cartesian node lattice. Node (i,j,k) sits at lo + (i*hx, j*hy, k*hz);
// spacing h_d = (hi_d - lo_d) / (n_d - 1).
struct Grid {
  Vec3 lo, hi;
  Index3 n{0, 0, 0};
  Vec3 h;

  int64_t num_nodes() const { return int64_t(n[0]) * n[1] * n[2]; }

  // Node-major linear index, x fastest.
  int64_t lin(int i, int j, int k) const {
    return (int64_t(k) * n[1] + j) * n[0] + i;
  }
  int64_t lin(const Index3& id) const { return lin(id[0], id[1], id[2]); }

  Index3 unlin(int64_t l) const {
    int i = int(l % n[0]);
    int j = int((l / n[0]) % n[1]);
    int k = int(l / (int64_t(n[0]) * n[1]));
    return {i, j, k};
  }

  double coord(int axis, int idx) const { return lo[axis] + h[axis] * idx; }

  Vec3 node(int i, int j, int k) const {
    return {coord(0, i), coord(1, j), coord(2, k)};
  }
  Vec3 node(const Index3& id) const { return node(id[0], id[1], id[2]); }

  bool in_bounds(const Index3& id) const {
    return id[0] >= 0 && id[0] < n[0] && id[1] >= 0 && id[1] < n[1] &&
           id[2] >= 0 && id[2] < n[2];
  }
  bool on_boundary(const Index3& id) const {
    return id[0] == 0 || id[0] == n[0] - 1 || id[1] == 0 || id[1] == n[1] - 1 ||
           id[2] == 0 || id[2] == n[2] - 1;
  }
};

inline Grid build_grid(const Vec3& lo, const Vec3& hi, const Index3& counts) {
  for (int d = 0; d < 3; ++d) {
    if (counts[d] < 4)
      throw InvalidGrid("build_grid: need at least 4 nodes per direction");
    if (!(hi[d] > lo[d]))
      throw InvalidGrid("build_grid: bounds_max must exceed bounds_min");
  }
  Grid g;
  g.lo = lo;
  g.hi = hi;
  g.n = counts;
  for (int d = 0; d < 3; ++d) g.h[d] = (hi[d] - lo[d]) / (counts[d] - 1);
  return g;
}

// Per-node phase tags plus irregularity flags.
//
// A node is central-irregular in direction d when an axis neighbor along d has
// the opposite phase (a fictitious value will live here for that direction).
// It is cross-irregular in a plane when one of the four diagonal neighbors in
// that plane has the opposite phase.
struct PhaseMap {
  Index3 n{0, 0, 0};
  std::vector<uint8_t> phase;          // Phase per node
  std::vector<uint8_t> central_bits;   // bit d set => central-irregular in d
  std::vector<uint8_t> cross_bits;     // bit p set => cross-irregular in plane p

  Phase at(int64_t l) const { return Phase(phase[size_t(l)]); }
  bool central_irregular(int64_t l, int axis) const {
    return (central_bits[size_t(l)] >> axis) & 1;
  }
  bool central_irregular_any(int64_t l) const { return central_bits[size_t(l)] != 0; }
  bool cross_irregular(int64_t l, Plane p) const {
    return (cross_bits[size_t(l)] >> int(p)) & 1;
  }
};

}  // namespace mib
