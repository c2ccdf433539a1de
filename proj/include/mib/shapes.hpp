#pragma once

#include <functional>
#include <limits>
#include <string>

#include "mib/core.hpp"

namespace mib {

// Implicit two-phase interface. Sign convention everywhere: phi > 0 <=> Omega+,
// phi < 0 <=> Omega-. For all catalog shapes Omega- is the enclosed region.
//
// Piecewise shapes are min/max compositions of smooth pieces; the gradient is
// taken from the active piece (first piece wins exact ties).
struct InterfaceShape {
  std::string id;
  bool smooth = true;
  std::function<double(const Vec3&)> phi;
  std::function<Vec3(const Vec3&)> grad;
  // Distance to the geometric singular set (edges, tips, cusps); +inf when the
  // shape is smooth. Used to locate error maxima relative to singularities.
  std::function<double(const Vec3&)> singular_distance =
      [](const Vec3&) { return std::numeric_limits<double>::infinity(); };
};

namespace shapes {

inline InterfaceShape sphere(double radius = 2.0) {
  InterfaceShape s;
  s.id = "sphere";
  double r2 = radius * radius;
  s.phi = [r2](const Vec3& p) { return dot(p, p) - r2; };
  s.grad = [](const Vec3& p) { return p * 2.0; };
  return s;
}

// Solid hemisphere x^2+y^2+z^2 < r^2, z > 0; interface includes the flat disk.
inline InterfaceShape hemisphere(double radius = 2.0) {
  InterfaceShape s;
  s.id = "hemisphere";
  s.smooth = false;
  double r2 = radius * radius;
  s.phi = [r2](const Vec3& p) { return std::max(dot(p, p) - r2, -p.z); };
  s.grad = [r2](const Vec3& p) -> Vec3 {
    if (dot(p, p) - r2 >= -p.z) return p * 2.0;
    return {0.0, 0.0, -1.0};
  };
  s.singular_distance = [radius](const Vec3& p) {
    double rho = std::hypot(p.x, p.y);
    return std::hypot(rho - radius, p.z);  // rim circle z=0, rho=radius
  };
  return s;
}

inline InterfaceShape ellipsoid() {
  InterfaceShape s;
  s.id = "ellipsoid";
  s.phi = [](const Vec3& p) {
    return p.x * p.x / 4.0 + p.y * p.y / 9.0 + p.z * p.z - 1.0;
  };
  s.grad = [](const Vec3& p) -> Vec3 {
    return {p.x / 2.0, 2.0 * p.y / 9.0, 2.0 * p.z};
  };
  return s;
}

// Capped cylinder x^2+y^2 < radius^2, z0 < z < z1.
inline InterfaceShape cylinder(double radius, double z0, double z1) {
  InterfaceShape s;
  s.id = "cylinder";
  s.smooth = false;
  s.phi = [=](const Vec3& p) {
    double lateral = std::hypot(p.x, p.y) - radius;
    return std::max({lateral, p.z - z1, z0 - p.z});
  };
  s.grad = [=](const Vec3& p) -> Vec3 {
    double rho = std::hypot(p.x, p.y);
    double lateral = rho - radius;
    double top = p.z - z1, bottom = z0 - p.z;
    if (lateral >= top && lateral >= bottom) {
      if (rho < 1e-14) return {0.0, 0.0, 0.0};
      return {p.x / rho, p.y / rho, 0.0};
    }
    if (top >= bottom) return {0.0, 0.0, 1.0};
    return {0.0, 0.0, -1.0};
  };
  s.singular_distance = [=](const Vec3& p) {
    double rho = std::hypot(p.x, p.y);
    return std::min(std::hypot(rho - radius, p.z - z1),
                    std::hypot(rho - radius, p.z - z0));
  };
  return s;
}

inline InterfaceShape torus(double R = 4.0, double r = 2.0) {
  InterfaceShape s;
  s.id = "torus";
  s.phi = [=](const Vec3& p) {
    double rho = std::hypot(p.x, p.y);
    double a = R - rho;
    return a * a + p.z * p.z - r * r;
  };
  s.grad = [=](const Vec3& p) -> Vec3 {
    double rho = std::hypot(p.x, p.y);
    if (rho < 1e-14) return {0.0, 0.0, 2.0 * p.z};
    double a = R - rho;
    return {2.0 * a * (-p.x / rho), 2.0 * a * (-p.y / rho), 2.0 * p.z};
  };
  return s;
}

// Flower-like prism: rho = 5/2 + (5/7) sin(5 theta), |z| <= 2/3.
inline InterfaceShape flower_prism() {
  InterfaceShape s;
  s.id = "flower_prism";
  s.smooth = false;
  const double zcap = 2.0 / 3.0;
  auto side = [](const Vec3& p) {
    double rho = std::hypot(p.x, p.y);
    double th = std::atan2(p.y, p.x);
    return rho - 2.5 - (5.0 / 7.0) * std::sin(5.0 * th);
  };
  s.phi = [=](const Vec3& p) {
    return std::max({side(p), p.z - zcap, -p.z - zcap});
  };
  s.grad = [=](const Vec3& p) -> Vec3 {
    double lateral = side(p);
    double top = p.z - zcap, bottom = -p.z - zcap;
    if (lateral >= top && lateral >= bottom) {
      double rho = std::hypot(p.x, p.y);
      if (rho < 1e-14) return {0.0, 0.0, 0.0};
      double th = std::atan2(p.y, p.x);
      double c = (25.0 / 7.0) * std::cos(5.0 * th);
      // d(theta)/dx = -y/rho^2, d(theta)/dy = x/rho^2
      return {p.x / rho + c * p.y / (rho * rho), p.y / rho - c * p.x / (rho * rho), 0.0};
    }
    if (top >= bottom) return {0.0, 0.0, 1.0};
    return {0.0, 0.0, -1.0};
  };
  s.singular_distance = [=](const Vec3& p) {
    double lateral = side(p);
    return std::min(std::hypot(lateral, p.z - zcap), std::hypot(lateral, p.z + zcap));
  };
  return s;
}

// Apple: rho_sph = 1.9 (1 - cos(zenith)); written as rho^2 - 1.9 rho + 1.9 z,
// which carries the same sign for rho > 0. Cusp at the origin.
inline InterfaceShape apple() {
  InterfaceShape s;
  s.id = "apple";
  s.smooth = false;
  s.phi = [](const Vec3& p) {
    double rho = norm(p);
    return dot(p, p) - 1.9 * rho + 1.9 * p.z;
  };
  s.grad = [](const Vec3& p) -> Vec3 {
    double rho = norm(p);
    if (rho < 1e-14) return {0.0, 0.0, 0.0};
    return {2.0 * p.x - 1.9 * p.x / rho, 2.0 * p.y - 1.9 * p.y / rho,
            2.0 * p.z - 1.9 * p.z / rho + 1.9};
  };
  s.singular_distance = [](const Vec3& p) { return norm(p); };
  return s;
}

// Oak acorn: spherical body x^2+y^2+(z-g)^2 = R^2 for z <= 0 capped by the cone
// sqrt(x^2+y^2) = d (q - z) for 0 < z <= q, tip at (0, 0, q).
inline InterfaceShape acorn() {
  InterfaceShape s;
  s.id = "acorn";
  s.smooth = false;
  const double q = 6.0 / 7.0, g = 0.5, R = 15.0 / 7.0;
  const double d = std::sqrt((R * R - g * g) / (q * q));
  const double cone_n = std::sqrt(1.0 + d * d);
  const double r0 = std::sqrt(R * R - g * g);  // junction ring radius at z = 0
  auto sphere_piece = [=](const Vec3& p) {
    return std::sqrt(p.x * p.x + p.y * p.y + (p.z - g) * (p.z - g)) - R;
  };
  auto cone_piece = [=](const Vec3& p) {
    return (std::hypot(p.x, p.y) + d * p.z - d * q) / cone_n;
  };
  s.phi = [=](const Vec3& p) {
    double lower = std::max(sphere_piece(p), p.z);
    double upper = std::max(cone_piece(p), -p.z);
    return std::min(lower, upper);
  };
  s.grad = [=](const Vec3& p) -> Vec3 {
    double sp = sphere_piece(p), cp = cone_piece(p);
    double lower = std::max(sp, p.z);
    double upper = std::max(cp, -p.z);
    if (lower <= upper) {
      if (sp >= p.z) {
        double len = std::sqrt(p.x * p.x + p.y * p.y + (p.z - g) * (p.z - g));
        if (len < 1e-14) return {0.0, 0.0, 0.0};
        return {p.x / len, p.y / len, (p.z - g) / len};
      }
      return {0.0, 0.0, 1.0};
    }
    if (cp >= -p.z) {
      double rho = std::hypot(p.x, p.y);
      if (rho < 1e-14) return {0.0, 0.0, d / cone_n};
      return {p.x / (rho * cone_n), p.y / (rho * cone_n), d / cone_n};
    }
    return {0.0, 0.0, -1.0};
  };
  s.singular_distance = [=](const Vec3& p) {
    double rho = std::hypot(p.x, p.y);
    double tip = std::sqrt(rho * rho + (p.z - q) * (p.z - q));
    double ring = std::hypot(rho - r0, p.z);
    return std::min(tip, ring);
  };
  return s;
}

// Pentagon star prism. Boundary radius R sin(t/2)/sin(t/2 + a) at folded
// angular offset a in [0, pi/5] from the nearest tooth center, t = pi/5,
// tooth centers at theta_r + 2 pi k / 5, theta_r = pi/7, R = 6/7; |z| <= sqrt(3)/2.
inline InterfaceShape pentagon_star_prism() {
  InterfaceShape s;
  s.id = "pentagon_star_prism";
  s.smooth = false;
  const double theta_t = M_PI / 5.0, theta_r = M_PI / 7.0, R = 6.0 / 7.0;
  const double zcap = std::sqrt(3.0) / 2.0;
  const double sector = 2.0 * M_PI / 5.0;
  // Signed fold: offset to the nearest tooth center in [-pi/5, pi/5].
  auto fold = [=](double theta) {
    double t = std::remainder(theta - theta_r, sector);
    return t;
  };
  auto boundary_r = [=](double a) {
    return R * std::sin(theta_t / 2.0) / std::sin(theta_t / 2.0 + std::fabs(a));
  };
  auto side = [=](const Vec3& p) {
    double rho = std::hypot(p.x, p.y);
    double a = fold(std::atan2(p.y, p.x));
    return rho - boundary_r(a);
  };
  s.phi = [=](const Vec3& p) {
    return std::max({side(p), p.z - zcap, -p.z - zcap});
  };
  s.grad = [=](const Vec3& p) -> Vec3 {
    double lateral = side(p);
    double top = p.z - zcap, bottom = -p.z - zcap;
    if (lateral >= top && lateral >= bottom) {
      double rho = std::hypot(p.x, p.y);
      if (rho < 1e-14) return {0.0, 0.0, 0.0};
      double a = fold(std::atan2(p.y, p.x));
      double sgn = a >= 0.0 ? 1.0 : -1.0;
      double sb = std::sin(theta_t / 2.0 + std::fabs(a));
      double dr_da = -R * std::sin(theta_t / 2.0) * std::cos(theta_t / 2.0 + std::fabs(a)) /
                     (sb * sb) * sgn;
      // d a / d(x,y) follows theta: (-y, x)/rho^2
      return {p.x / rho + dr_da * p.y / (rho * rho), p.y / rho - dr_da * p.x / (rho * rho), 0.0};
    }
    if (top >= bottom) return {0.0, 0.0, 1.0};
    return {0.0, 0.0, -1.0};
  };
  s.singular_distance = [=](const Vec3& p) {
    double rho = std::hypot(p.x, p.y);
    double theta = std::atan2(p.y, p.x);
    double best = std::numeric_limits<double>::infinity();
    double zover = std::max(0.0, std::fabs(p.z) - zcap);
    // Vertical edges at tooth tips (a=0, r=R) and notches (a=pi/5).
    for (int k = 0; k < 5; ++k) {
      double th_tip = theta_r + k * sector;
      double th_notch = th_tip + sector / 2.0;
      double r_notch = boundary_r(sector / 2.0);
      double dt = std::remainder(theta - th_tip, 2.0 * M_PI);
      double dn = std::remainder(theta - th_notch, 2.0 * M_PI);
      double d_tip2 = rho * rho + R * R - 2.0 * rho * R * std::cos(dt);
      double d_notch2 = rho * rho + r_notch * r_notch - 2.0 * rho * r_notch * std::cos(dn);
      best = std::min(best, std::sqrt(d_tip2 + zover * zover));
      best = std::min(best, std::sqrt(d_notch2 + zover * zover));
    }
    // Cap rims.
    double lateral = side(p);
    best = std::min(best, std::hypot(lateral, p.z - zcap));
    best = std::min(best, std::hypot(lateral, p.z + zcap));
    return best;
  };
  return s;
}

}  // namespace shapes
}  // namespace mib
