#pragma once

#include <optional>
#include <vector>

#include "stroh/impedance.hpp"

namespace stroh {

struct RegionClass {
  Region label = Region::glancing;
  int dim_c_plus = 0;
  std::optional<int> dim_c_minus;         // interfaces only
  std::optional<int> dim_c_intersection;  // interfaces only
};

// Labels from dim E_c of the outgoing root: 0 hyperbolic, 3 elliptic, else mixed.
RegionClass classify_boundary(const Material& m, const BoundaryFrame& frame, const Tolerances& tol = {});

// The minus medium sees the conormal -nu. Labels use dim(E_c+ cap E_c-), computed
// from principal angles with cos > 1 - 1e-8.
RegionClass classify_interface(const Material& plus, const Material& minus, const BoundaryFrame& frame,
                               const Tolerances& tol = {});

// Outgoing impedance of an isotropic medium assembled from its SH, SV and P columns.
Impedance iso_impedance_closed_form(double lambda, double mu, double density, const BoundaryFrame& frame);

// Largest tau with spectrum free of real points, for the unit tangential direction.
double tau_limit(const Material& m, const Vec3& normal, const Vec3& unit_eta, const Tolerances& tol = {});
double tau_limit(const Material& plus, const Material& minus, const Vec3& normal, const Vec3& unit_eta,
                 const Tolerances& tol = {});

struct SurfaceWave {
  double tau = 0.0;       // root, for |eta| = 1
  double speed = 0.0;     // tau / |eta|
  double slowness = 0.0;  // |eta| / tau
  CVec3 polarization;     // null vector of z (or z+ + z-) at the root
  double tau_eta = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double det_z = 0.0;       // |det| / |z|^3
  double lambda_min = 0.0;  // smallest eigenvalue at the root, relative to |z|
};

// Bisection on the smallest eigenvalue of z(eta, tau) over the elliptic interval.
// Throws NoSurfaceWave if it stays positive and GlancingLimit if the upper end
// cannot be evaluated.
SurfaceWave rayleigh_speed(const Material& m, const Vec3& normal, const Vec3& unit_eta, const Tolerances& tol = {});
SurfaceWave stoneley_speed(const Material& plus, const Material& minus, const Vec3& normal, const Vec3& unit_eta,
                           const Tolerances& tol = {});

// Smallest eigenvalue of the Hermitian part of z (boundary) or z+ + z- (interface).
double impedance_lambda_min(const Material& m, const BoundaryFrame& frame, const Tolerances& tol = {});
double impedance_lambda_min(const Material& plus, const Material& minus, const BoundaryFrame& frame,
                            const Tolerances& tol = {});

struct MarginSample {
  BoundaryFrame frame;
  Region label;
  double margin;  // sigma_min / sigma_max; NaN when not evaluated
};

struct MarginReport {
  double margin = 0.0;  // minimum over included samples
  int included = 0;
  std::vector<MarginSample> samples;
};

struct MarginOptions {
  bool include_elliptic = false;
  int threads = 1;
};

MarginReport ellipticity_margin(const Material& m, const std::vector<BoundaryFrame>& frames,
                                const MarginOptions& opt = {}, const Tolerances& tol = {});
MarginReport ellipticity_margin(const Material& plus, const Material& minus, const std::vector<BoundaryFrame>& frames,
                                const MarginOptions& opt = {}, const Tolerances& tol = {});

}  // namespace stroh
