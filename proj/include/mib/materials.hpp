#pragma once

#include <functional>

#include "mib/core.hpp"

namespace mib {

inline std::pair<double, double> lame_from_E_nu(double E, double nu) {
  if (!(E > 0.0)) throw InvalidModulus("lame_from_E_nu: E must be positive");
  if (!(nu >= 0.0 && nu < 0.5))
    throw InvalidModulus("lame_from_E_nu: need 0 <= nu < 0.5");
  double mu = E / (2.0 * (1.0 + nu));
  double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  return {lambda, mu};
}

// P-wave modulus M = 2 mu (1 - nu) / (1 - 2 nu) = lambda + 2 mu.
inline double pwave_modulus(double mu, double nu) {
  if (!(mu > 0.0)) throw InvalidModulus("pwave_modulus: mu must be positive");
  if (!(nu >= 0.0 && nu < 0.5))
    throw InvalidModulus("pwave_modulus: need 0 <= nu < 0.5");
  return 2.0 * mu * (1.0 - nu) / (1.0 - 2.0 * nu);
}

// One phase's elastic moduli. nu is constant per phase; mu may vary in space,
// and lambda = 2 mu nu / (1 - 2 nu) inherits mu's gradient scaled by
// 2 nu / (1 - 2 nu).
struct PhaseMaterial {
  double nu = 0.0;
  std::function<double(const Vec3&)> mu_fn;
  std::function<Vec3(const Vec3&)> mu_grad_fn;

  static PhaseMaterial constant(double mu, double nu) {
    if (!(mu > 0.0)) throw InvalidModulus("PhaseMaterial: mu must be positive");
    if (!(nu >= 0.0 && nu < 0.5))
      throw InvalidModulus("PhaseMaterial: need 0 <= nu < 0.5");
    PhaseMaterial m;
    m.nu = nu;
    m.mu_fn = [mu](const Vec3&) { return mu; };
    m.mu_grad_fn = [](const Vec3&) { return Vec3{}; };
    return m;
  }

  static PhaseMaterial variable(double nu, std::function<double(const Vec3&)> mu,
                                std::function<Vec3(const Vec3&)> grad) {
    if (!(nu >= 0.0 && nu < 0.5))
      throw InvalidModulus("PhaseMaterial: need 0 <= nu < 0.5");
    PhaseMaterial m;
    m.nu = nu;
    m.mu_fn = std::move(mu);
    m.mu_grad_fn = std::move(grad);
    return m;
  }

  double lambda_factor() const { return 2.0 * nu / (1.0 - 2.0 * nu); }
};

struct MaterialPoint {
  double lambda = 0.0, mu = 0.0, M = 0.0;
  Vec3 grad_lambda, grad_mu;
};

struct MaterialField {
  PhaseMaterial plus, minus;

  const PhaseMaterial& phase(Phase p) const {
    return p == Phase::Plus ? plus : minus;
  }

  // One-sided limit of the requested phase, regardless of which side of the
  // interface the point geometrically lies on.
  MaterialPoint evaluate(const Vec3& x, Phase p) const {
    const PhaseMaterial& m = phase(p);
    MaterialPoint out;
    out.mu = m.mu_fn(x);
    out.grad_mu = m.mu_grad_fn(x);
    double f = m.lambda_factor();
    out.lambda = f * out.mu;
    out.grad_lambda = out.grad_mu * f;
    out.M = out.lambda + 2.0 * out.mu;
    return out;
  }
};

}  // namespace mib
