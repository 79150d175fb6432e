#pragma once

#include <array>
#include <optional>
#include <vector>

#include "stroh/materials.hpp"

namespace stroh {

// l^{ik} = C^{ijkm} xi_j xi_m.
Mat3 acoustic_tensor(const StiffnessTensor& c, const Vec3& xi);

struct ChristoffelModes {
  Vec3 direction = Vec3::Zero();
  // Phase speeds, descending.
  std::array<double, 3> speeds{};
  // Orthonormal polarizations, column k belongs to speeds[k].
  Mat3 polarizations = Mat3::Identity();
  // Orthogonal projectors onto the distinct eigenspaces, fastest first. They sum to I.
  std::vector<Mat3> projectors;
  // Modes grouped by eigenspace, matching `projectors`.
  std::vector<std::vector<int>> groups;
  bool degenerate = false;
};

// Eigenvalues closer than this (relative to the largest) are one eigenspace.
inline constexpr double kDegenerateGap = 1e-8;

ChristoffelModes christoffel_modes(const Material& m, const Vec3& unit_direction);

// Quasi-uniform unit vectors on the sphere (golden-angle spiral).
std::vector<Vec3> fibonacci_sphere(int n);

struct GapSample {
  Vec3 direction;
  std::array<double, 3> speeds{};
  double gap = 0.0;
};

struct GapScan {
  double min_gap = 0.0;
  std::vector<GapSample> samples;
};

struct AxisExclusion {
  Vec3 axis;
  double half_angle_deg;
};

// Minimum over sampled directions of (l_k - l_{k+1}) / l_max. Heuristic check
// of real principal type: a finite sample, not a proof. Directions inside the
// exclusion cone around +-axis are skipped.
GapScan eigen_gap_scan(const Material& m, int n_directions,
                       std::optional<AxisExclusion> exclude = std::nullopt, int threads = 1);

}  // namespace stroh
