#include "stroh/acoustic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "stroh/error.hpp"
#include "stroh/linalg.hpp"

namespace stroh {

namespace {

// Orthonormal basis of span(columns of `sub`) aligned with e3, then e1, then e2.
Eigen::MatrixXd canonical_basis(const Eigen::MatrixXd& sub) {
  const Eigen::Index k = sub.cols();
  const Mat3 proj = sub * sub.transpose();
  Eigen::MatrixXd out(3, k);
  Eigen::Index found = 0;
  for (int axis : {2, 0, 1}) {
    if (found == k) break;
    Vec3 v = proj.col(axis);
    for (Eigen::Index j = 0; j < found; ++j) v -= out.col(j).dot(v) * out.col(j);
    const double n = v.norm();
    if (n > 1e-6) out.col(found++) = v / n;
  }
  return out;
}

void fix_sign(Eigen::Ref<Vec3> v) {
  Eigen::Index i = 0;
  v.cwiseAbs().maxCoeff(&i);
  if (v(i) < 0.0) v = -v;
}

std::array<double, 3> descending(const Vec3& ascending) {
  return {ascending(2), ascending(1), ascending(0)};
}

double relative_gap(const std::array<double, 3>& l) {
  const double top = std::max(std::abs(l[0]), std::numeric_limits<double>::min());
  return std::min(l[0] - l[1], l[1] - l[2]) / top;
}

}  // namespace

Mat3 acoustic_tensor(const StiffnessTensor& c, const Vec3& xi) {
  Mat3 l = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 3; ++m) l(i, k) += c(i, j, k, m) * xi(j) * xi(m);
  return 0.5 * (l + l.transpose());
}

ChristoffelModes christoffel_modes(const Material& m, const Vec3& unit_direction) {
  if (std::abs(unit_direction.norm() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "propagation direction must be a unit vector");
  }
  const Mat3 l = acoustic_tensor(m.stiffness, unit_direction) / m.density;
  Eigen::SelfAdjointEigenSolver<Mat3> eig(l);
  const Vec3 w = eig.eigenvalues();
  const double scale = std::max(std::abs(w(0)), std::abs(w(2)));
  if (w(0) < -1e-10 * std::max(scale, 1.0)) {
    throw Error(ErrorKind::IndefiniteAcousticTensor,
                "acoustic tensor has negative eigenvalue " + std::to_string(w(0)));
  }

  ChristoffelModes out;
  out.direction = unit_direction;
  Mat3 vecs;
  for (int k = 0; k < 3; ++k) {
    const double lam = std::max(w(2 - k), 0.0);
    out.speeds[k] = std::sqrt(lam);
    vecs.col(k) = eig.eigenvectors().col(2 - k);
  }

  const std::array<double, 3> lam = descending(w);
  const double top = std::max(lam[0], std::numeric_limits<double>::min());
  std::vector<int> current{0};
  for (int k = 1; k <= 3; ++k) {
    if (k < 3 && (lam[k - 1] - lam[k]) <= kDegenerateGap * top) {
      current.push_back(k);
      continue;
    }
    out.groups.push_back(current);
    if (k < 3) current = {k};
  }

  for (const auto& g : out.groups) {
    Eigen::MatrixXd sub(3, static_cast<Eigen::Index>(g.size()));
    for (std::size_t j = 0; j < g.size(); ++j) sub.col(static_cast<Eigen::Index>(j)) = vecs.col(g[j]);
    if (g.size() > 1) {
      out.degenerate = true;
      sub = canonical_basis(sub);
    } else {
      fix_sign(sub.col(0));
    }
    for (std::size_t j = 0; j < g.size(); ++j) out.polarizations.col(g[j]) = sub.col(static_cast<Eigen::Index>(j));
    out.projectors.push_back(sub * sub.transpose());
  }
  return out;
}

std::vector<Vec3> fibonacci_sphere(int n) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(std::max(n, 0)));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

GapScan eigen_gap_scan(const Material& m, int n_directions, std::optional<AxisExclusion> exclude,
                       int threads) {
  if (n_directions < 6) throw Error(ErrorKind::InvalidArgument, "eigen_gap_scan needs at least 6 directions");
  std::vector<Vec3> dirs = fibonacci_sphere(n_directions);
  if (exclude) {
    const Vec3 axis = exclude->axis.normalized();
    const double cmax = std::cos(exclude->half_angle_deg * std::numbers::pi / 180.0);
    std::erase_if(dirs, [&](const Vec3& d) { return std::abs(d.dot(axis)) > cmax; });
  }
  GapScan scan;
  scan.samples.resize(dirs.size());
  linalg::parallel_for(dirs.size(), threads, [&](std::size_t i) {
    const Mat3 l = acoustic_tensor(m.stiffness, dirs[i]) / m.density;
    Eigen::SelfAdjointEigenSolver<Mat3> eig(l, Eigen::EigenvaluesOnly);
    const std::array<double, 3> lam = descending(eig.eigenvalues());
    GapSample& s = scan.samples[i];
    s.direction = dirs[i];
    for (int k = 0; k < 3; ++k) s.speeds[k] = std::sqrt(std::max(lam[k], 0.0));
    s.gap = relative_gap(lam);
  });
  scan.min_gap = std::numeric_limits<double>::infinity();
  for (const auto& s : scan.samples) scan.min_gap = std::min(scan.min_gap, s.gap);
  if (scan.samples.empty()) scan.min_gap = 0.0;
  return scan;
}

}  // namespace stroh
