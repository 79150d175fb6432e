#include "stroh/materials.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "stroh/error.hpp"

namespace stroh {

namespace {

constexpr std::array<std::pair<int, int>, 6> kVoigtPairs{
    {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};

constexpr int voigt_index(int i, int j) {
  if (i == j) return i;
  const int a = std::min(i, j);
  const int b = std::max(i, j);
  if (a == 1 && b == 2) return 3;
  if (a == 0 && b == 2) return 4;
  return 5;
}

double delta(int i, int j) { return i == j ? 1.0 : 0.0; }

template <typename F>
StiffnessTensor::Entries fill(F&& f) {
  StiffnessTensor::Entries e{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m) e[StiffnessTensor::index(i, j, k, m)] = f(i, j, k, m);
  return e;
}

}  // namespace

StiffnessTensor::StiffnessTensor() = default;

StiffnessTensor StiffnessTensor::from_entries(const Entries& entries) {
  double scale = 0.0;
  for (double v : entries) scale = std::max(scale, std::abs(v));
  double asym = 0.0;
  StiffnessTensor out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m) {
          const std::array<double, 8> images{
              entries[index(i, j, k, m)], entries[index(j, i, k, m)],
              entries[index(i, j, m, k)], entries[index(j, i, m, k)],
              entries[index(k, m, i, j)], entries[index(m, k, i, j)],
              entries[index(k, m, j, i)], entries[index(m, k, j, i)]};
          double sum = 0.0;
          for (double v : images) {
            sum += v;
            asym = std::max(asym, std::abs(v - images[0]));
          }
          out.c_[index(i, j, k, m)] = sum / 8.0;
        }
  if (asym > 1e-8 * scale) {
    throw Error(ErrorKind::AsymmetricStiffness,
                "stiffness entries violate C^{ijkm}=C^{jikm}=C^{kmij} by " + std::to_string(asym));
  }
  // Averaging the eight images in a fixed order can leave last-bit differences;
  // copy one representative to every image so the symmetries hold exactly.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m) {
          const int vi = voigt_index(i, j);
          const int vk = voigt_index(k, m);
          const auto [a, b] = kVoigtPairs[std::min(vi, vk)];
          const auto [c, d] = kVoigtPairs[std::max(vi, vk)];
          out.c_[index(i, j, k, m)] = out.c_[index(a, b, c, d)];
        }
  return out;
}

StiffnessTensor StiffnessTensor::from_voigt(const Mat6& voigt) {
  const double scale = voigt.cwiseAbs().maxCoeff();
  const double asym = (voigt - voigt.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw Error(ErrorKind::AsymmetricVoigtMatrix,
                "Voigt matrix is not symmetric (max |M - M^T| = " + std::to_string(asym) + ")");
  }
  const Mat6 sym = 0.5 * (voigt + voigt.transpose());
  StiffnessTensor out;
  out.c_ = fill([&](int i, int j, int k, int m) { return sym(voigt_index(i, j), voigt_index(k, m)); });
  return out;
}

Mat6 StiffnessTensor::to_voigt() const {
  Mat6 v;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      const auto [i, j] = kVoigtPairs[p];
      const auto [k, m] = kVoigtPairs[q];
      v(p, q) = (*this)(i, j, k, m);
    }
  return v;
}

Mat6 StiffnessTensor::to_mandel() const {
  Mat6 v = to_voigt();
  const double r2 = std::sqrt(2.0);
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      if (p >= 3) v(p, q) *= r2;
      if (q >= 3) v(p, q) *= r2;
    }
  return v;
}

double StiffnessTensor::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

StiffnessTensor StiffnessTensor::scaled(double factor) const {
  StiffnessTensor out = *this;
  for (double& v : out.c_) v *= factor;
  return out;
}

StiffnessTensor operator+(const StiffnessTensor& a, const StiffnessTensor& b) {
  StiffnessTensor out = a;
  for (std::size_t n = 0; n < out.c_.size(); ++n) out.c_[n] += b.c_[n];
  return out;
}

StiffnessTensor operator-(const StiffnessTensor& a, const StiffnessTensor& b) {
  StiffnessTensor out = a;
  for (std::size_t n = 0; n < out.c_.size(); ++n) out.c_[n] -= b.c_[n];
  return out;
}

double max_abs_difference(const StiffnessTensor& a, const StiffnessTensor& b) {
  return (a - b).max_abs();
}

Material::Material(std::string name_, StiffnessTensor stiffness_, double density_)
    : name(std::move(name_)), stiffness(std::move(stiffness_)), density(density_) {
  if (!(density > 0.0) || !std::isfinite(density)) {
    throw Error(ErrorKind::NonPositiveDensity, "density must be positive, got " + std::to_string(density));
  }
}

Material make_isotropic(double lambda, double mu, double density, std::string name) {
  auto e = fill([&](int i, int j, int k, int m) {
    return lambda * delta(i, j) * delta(k, m) + mu * (delta(i, k) * delta(j, m) + delta(i, m) * delta(j, k));
  });
  return Material(std::move(name), StiffnessTensor::from_entries(e), density);
}

StiffnessTensor transversely_isotropic_stiffness(const TransverseIsotropyParams& p, const Vec3& axis) {
  if (std::abs(axis.norm() - 1.0) > 1e-12) {
    throw Error(ErrorKind::NonUnitAxis, "symmetry axis must be a unit vector, |J| = " + std::to_string(axis.norm()));
  }
  const Vec3& J = axis;
  auto e = fill([&](int i, int j, int k, int m) {
    return p.lambda * delta(i, j) * delta(k, m) +
           p.mu * (delta(i, k) * delta(j, m) + delta(i, m) * delta(j, k)) +
           p.alpha * (delta(i, j) * J(k) * J(m) + delta(k, m) * J(i) * J(j)) +
           p.beta * (delta(i, k) * J(j) * J(m) + delta(j, m) * J(i) * J(k) +
                     delta(i, m) * J(j) * J(k) + delta(j, k) * J(i) * J(m)) +
           p.gamma * J(i) * J(j) * J(k) * J(m);
  });
  return StiffnessTensor::from_entries(e);
}

Material make_transversely_isotropic(const TransverseIsotropyParams& p, const Vec3& axis,
                                     double density, std::string name) {
  if (!(density > 0.0)) {
    throw Error(ErrorKind::NonPositiveDensity, "density must be positive, got " + std::to_string(density));
  }
  return Material(std::move(name), transversely_isotropic_stiffness(p, axis), density);
}

StiffnessTensor rotate_stiffness(const StiffnessTensor& c, const Mat3& o) {
  const double orth = (o.transpose() * o - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (orth > 1e-10 || std::abs(o.determinant() - 1.0) > 1e-10) {
    throw Error(ErrorKind::NotARotation, "matrix is not a proper rotation");
  }
  // Contract one index at a time: 4 * 3^5 operations instead of 3^8.
  StiffnessTensor::Entries t0 = c.entries();
  StiffnessTensor::Entries t1{};
  for (int slot = 0; slot < 4; ++slot) {
    t1.fill(0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int m = 0; m < 3; ++m) {
            std::array<int, 4> idx{i, j, k, m};
            double sum = 0.0;
            for (int a = 0; a < 3; ++a) {
              std::array<int, 4> src = idx;
              src[slot] = a;
              sum += o(idx[slot], a) * t0[StiffnessTensor::index(src[0], src[1], src[2], src[3])];
            }
            t1[StiffnessTensor::index(i, j, k, m)] = sum;
          }
    t0 = t1;
  }
  return StiffnessTensor::from_entries(t0);
}

Mat3 rotation_about(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

HarmonicDecomposition decompose_harmonic(const StiffnessTensor& c) {
  double full1 = 0.0;  // C^{iikk} = 9 lambda + 6 mu
  double full2 = 0.0;  // C^{ijij} = 3 lambda + 12 mu
  Mat3 partial1 = Mat3::Zero();  // C^{iikm} = 3A + 4B + (3 lambda + 2 mu) delta
  Mat3 partial2 = Mat3::Zero();  // C^{ijim} = 2A + 5B + (lambda + 4 mu) delta
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      full1 += c(i, i, k, k);
      for (int j = 0; j < 3; ++j) {
        partial1(j, k) += c(i, i, j, k);
        partial2(j, k) += c(i, j, i, k);
      }
    }
    for (int j = 0; j < 3; ++j) full2 += c(i, j, i, j);
  }
  HarmonicDecomposition d;
  d.mu = (3.0 * full2 - full1) / 30.0;
  d.lambda = (2.0 * full1 - full2) / 15.0;
  const Mat3 dev1 = partial1 - partial1.trace() / 3.0 * Mat3::Identity();
  const Mat3 dev2 = partial2 - partial2.trace() / 3.0 * Mat3::Identity();
  d.a = (5.0 * dev1 - 4.0 * dev2) / 7.0;
  d.b = (3.0 * dev2 - 2.0 * dev1) / 7.0;
  d.h = StiffnessTensor();
  d.h = c - reassemble(d);
  return d;
}

StiffnessTensor reassemble(const HarmonicDecomposition& d) {
  const Mat3& A = d.a;
  const Mat3& B = d.b;
  StiffnessTensor::Entries e{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m) {
          e[StiffnessTensor::index(i, j, k, m)] =
              d.h(i, j, k, m) + delta(i, j) * A(k, m) + delta(k, m) * A(i, j) +
              delta(i, k) * B(j, m) + delta(j, m) * B(i, k) + delta(i, m) * B(j, k) +
              delta(j, k) * B(i, m) + d.lambda * delta(i, j) * delta(k, m) +
              d.mu * (delta(i, k) * delta(j, m) + delta(i, m) * delta(j, k));
        }
  return StiffnessTensor::from_entries(e);
}

ConvexityReport check_strong_convexity(const StiffnessTensor& c) {
  Eigen::SelfAdjointEigenSolver<Mat6> eig(c.to_mandel(), Eigen::EigenvaluesOnly);
  ConvexityReport r;
  for (int n = 0; n < 6; ++n) r.eigenvalues[n] = eig.eigenvalues()(n);
  r.min_eigenvalue = r.eigenvalues[0];
  r.strongly_convex = r.min_eigenvalue > 1e-12 * std::max(1.0, c.max_abs());
  return r;
}

Nondimensionalized nondimensionalize(const Material& m, std::optional<double> modulus_scale,
                                     std::optional<double> density_scale) {
  const double ms = modulus_scale.value_or(m.stiffness.max_abs());
  const double ds = density_scale.value_or(m.density);
  if (!(ms > 0.0) || !(ds > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "reference modulus and density must be positive");
  }
  return {Material(m.name, m.stiffness.scaled(1.0 / ms), m.density / ds), ms, ds};
}

}  // namespace stroh
