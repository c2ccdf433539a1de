#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mib {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double operator[](int d) const { return d == 0 ? x : (d == 1 ? y : z); }
  double& operator[](int d) { return d == 0 ? x : (d == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

using Index3 = std::array<int, 3>;

enum class Phase : uint8_t { Minus = 0, Plus = 1 };

inline Phase opposite(Phase p) { return p == Phase::Plus ? Phase::Minus : Phase::Plus; }

// Planes for cross-derivative contexts, identified by the two axes involved.
enum class Plane : uint8_t { XY = 0, XZ = 1, YZ = 2 };

inline std::pair<int, int> plane_axes(Plane p) {
  switch (p) {
    case Plane::XY: return {0, 1};
    case Plane::XZ: return {0, 2};
    default: return {1, 2};
  }
}

inline Plane plane_of(int axis_a, int axis_b) {
  int lo = std::min(axis_a, axis_b), hi = std::max(axis_a, axis_b);
  if (lo == 0 && hi == 1) return Plane::XY;
  if (lo == 0 && hi == 2) return Plane::XZ;
  return Plane::YZ;
}

struct InvalidGrid : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidModulus : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateNormal : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DuplicateNodes : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingFictitious : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnresolvableFictitious : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownCase : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonpositiveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroDiagonal : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mib
