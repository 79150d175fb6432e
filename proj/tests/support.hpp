#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "stroh/boundary.hpp"
#include "stroh/materials.hpp"
#include "stroh/qmp.hpp"

namespace stroh::support {

inline std::string data_path(const std::string& name) { return std::string(STROH_TEST_DATA) + "/" + name; }

inline double rel(const CMat3& a, const CMat3& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

inline Vec3 random_unit(std::mt19937& rng) {
  std::normal_distribution<double> n;
  Vec3 v(n(rng), n(rng), n(rng));
  return v.normalized();
}

inline CVec3 random_cvec(std::mt19937& rng) {
  std::normal_distribution<double> n;
  CVec3 v;
  for (int i = 0; i < 3; ++i) v(i) = cplx(n(rng), n(rng));
  return v;
}

inline Mat3 random_rotation(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  return rotation_about(random_unit(rng), u(rng));
}

inline Material poisson() { return make_isotropic(1.0, 1.0, 1.0, "poisson"); }

// Small perturbation of the Poisson solid with a random axis.
inline Material random_ti(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-0.08, 0.08);
  TransverseIsotropyParams p{1.0, 1.0, u(rng), u(rng), u(rng)};
  return make_transversely_isotropic(p, random_unit(rng), 1.0, "ti");
}

inline Material random_isotropic(std::mt19937& rng) {
  std::uniform_real_distribution<double> l(0.2, 3.0);
  std::uniform_real_distribution<double> m(0.5, 2.0);
  std::uniform_real_distribution<double> r(0.5, 2.0);
  return make_isotropic(l(rng), m(rng), r(rng));
}

inline BoundaryFrame random_frame(std::mt19937& rng, double tau) {
  const Vec3 nu = random_unit(rng);
  Vec3 eta = random_unit(rng);
  eta -= eta.dot(nu) * nu;
  std::uniform_real_distribution<double> len(0.5, 2.0);
  return {nu, len(rng) * eta.normalized(), tau};
}

// A frame whose label is `want` and stays so under a 3% change of tau,
// keeping samples away from glancing neighbourhoods.
inline std::optional<BoundaryFrame> frame_in_region(const Material& m, Region want, std::mt19937& rng,
                                                    int attempts = 400) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < attempts; ++k) {
    BoundaryFrame f = random_frame(rng, 1.0);
    const double c = f.eta().norm() * std::sqrt(m.stiffness.max_abs() / m.density);
    double lo = 0.05;
    double hi = 3.0;
    if (want == Region::elliptic) hi = 1.0;
    if (want == Region::hyperbolic) lo = 0.8;
    const double tau = (u(rng) < 0.5 ? -1.0 : 1.0) * c * (lo + (hi - lo) * u(rng));
    f = f.with_tau(tau);
    bool ok = true;
    for (double t : {1.0, 0.97, 1.03}) {
      if (classify_boundary(m, f.with_tau(t * tau)).label != want) {
        ok = false;
        break;
      }
    }
    if (ok) return f;
  }
  return std::nullopt;
}

// Relative root of the classical secular function for the Rayleigh speed
// ratio x = c_R / c_s.
inline double rayleigh_secular_oracle(double cs_over_cp) {
  const double k2 = cs_over_cp * cs_over_cp;
  auto g = [&](double x) {
    const double x2 = x * x;
    return (2.0 - x2) * (2.0 - x2) - 4.0 * std::sqrt(1.0 - x2) * std::sqrt(1.0 - x2 * k2);
  };
  double lo = 0.5;
  double hi = 0.999999;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(lo) * g(mid) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace stroh::support
