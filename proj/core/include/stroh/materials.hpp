#pragma once

#include <array>
#include <optional>
#include <string>

#include "stroh/types.hpp"

namespace stroh {

// Rank-4 stiffness tensor C^{ijkm} in three dimensions with the minor and
// major symmetries C^{ijkm} = C^{jikm} = C^{kmij}.
class StiffnessTensor {
 public:
  using Entries = std::array<double, 81>;

  StiffnessTensor();

  // Symmetrizes the entries. Throws AsymmetricStiffness if the input deviates
  // from symmetry by more than 1e-8 relative to its largest entry.
  static StiffnessTensor from_entries(const Entries& entries);

  // Engineering Voigt matrix, pairs (11,22,33,23,13,12) -> 0..5. Throws
  // AsymmetricVoigtMatrix if the matrix is not symmetric within 1e-12 relative.
  static StiffnessTensor from_voigt(const Mat6& voigt);

  static constexpr int index(int i, int j, int k, int m) { return ((i * 3 + j) * 3 + k) * 3 + m; }

  double operator()(int i, int j, int k, int m) const { return c_[index(i, j, k, m)]; }
  const Entries& entries() const { return c_; }

  Mat6 to_voigt() const;
  // Mandel form: shear rows and columns scaled by sqrt(2), so that its
  // eigenvalues are those of C acting on symmetric 2-tensors.
  Mat6 to_mandel() const;

  double max_abs() const;
  StiffnessTensor scaled(double factor) const;

  friend StiffnessTensor operator+(const StiffnessTensor& a, const StiffnessTensor& b);
  friend StiffnessTensor operator-(const StiffnessTensor& a, const StiffnessTensor& b);

 private:
  Entries c_{};
};

// Largest absolute entry difference.
double max_abs_difference(const StiffnessTensor& a, const StiffnessTensor& b);

struct Material {
  Material(std::string name, StiffnessTensor stiffness, double density);

  std::string name;
  StiffnessTensor stiffness;
  double density;
};

Material make_isotropic(double lambda, double mu, double density, std::string name = "isotropic");

struct TransverseIsotropyParams {
  double lambda = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

StiffnessTensor transversely_isotropic_stiffness(const TransverseIsotropyParams& p, const Vec3& axis);

Material make_transversely_isotropic(const TransverseIsotropyParams& p, const Vec3& axis,
                                     double density,
                                     std::string name = "transversely_isotropic");

// C'^{ijkm} = O_ia O_jb O_kc O_md C^{abcd}. A transversely isotropic tensor
// with axis J maps to the one with axis O J.
StiffnessTensor rotate_stiffness(const StiffnessTensor& c, const Mat3& rotation);

// Rotation by `angle` about unit `axis` (Rodrigues).
Mat3 rotation_about(const Vec3& axis, double angle);

// C = H + (dA + Ad) + (dB-terms) + lambda dd + mu (dd + dd), with A, B traceless
// symmetric and H totally symmetric and traceless.
struct HarmonicDecomposition {
  double lambda = 0.0;
  double mu = 0.0;
  Mat3 a = Mat3::Zero();
  Mat3 b = Mat3::Zero();
  StiffnessTensor h;
};

HarmonicDecomposition decompose_harmonic(const StiffnessTensor& c);
StiffnessTensor reassemble(const HarmonicDecomposition& d);

struct ConvexityReport {
  bool strongly_convex = false;
  double min_eigenvalue = 0.0;
  std::array<double, 6> eigenvalues{};
};

// Positive definiteness of eps -> (C eps | eps) on symmetric 2-tensors, tested
// on the Mandel matrix.
ConvexityReport check_strong_convexity(const StiffnessTensor& c);

struct Nondimensionalized {
  Material material;
  double modulus_scale;
  double density_scale;
};

// Divides C by a reference modulus (default max |C|) and the density by a
// reference density (default the density itself). Speeds scale by
// sqrt(modulus_scale / density_scale).
Nondimensionalized nondimensionalize(const Material& m,
                                     std::optional<double> modulus_scale = std::nullopt,
                                     std::optional<double> density_scale = std::nullopt);

}  // namespace stroh
