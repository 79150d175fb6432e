#include "stroh/qmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "stroh/error.hpp"
#include "stroh/linalg.hpp"

namespace stroh {

namespace {

using linalg::spectral_norm;

// M^{ik} = C^{ijkm} a_j b_m
Mat3 contract(const StiffnessTensor& c, const Vec3& a, const Vec3& b) {
  Mat3 out = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 3; ++m) out(i, k) += c(i, j, k, m) * a(j) * b(m);
  return out;
}

std::vector<cplx> schur_eigenvalues(const CMat6& s) {
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(Eigen::MatrixXcd(s), false);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidArgument, "complex Schur decomposition did not converge");
  }
  std::vector<cplx> out(6);
  for (int i = 0; i < 6; ++i) out[i] = schur.matrixT()(i, i);
  return out;
}

// Trapezoidal rule for the contour integral of f over a positively oriented circle.
template <typename F>
CMat3 circle_integral(const F& f, const Circle& c, int n) {
  CMat3 sum = CMat3::Zero();
  const double h = 2.0 * std::numbers::pi / n;
  for (int k = 0; k < n; ++k) {
    const cplx e = std::polar(1.0, h * k);
    const cplx z = c.center + c.radius * e;
    sum += f(z) * (kI * c.radius * e);
  }
  return sum * h;
}

constexpr int kMaxContourNodes = 1 << 16;

}  // namespace

BoundaryFrame::BoundaryFrame(const Vec3& normal, const Vec3& eta, double tau)
    : normal_(normal), eta_(eta), tau_(tau) {
  if (std::abs(normal.norm() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidFrame, "conormal must be a unit vector");
  }
  if (std::abs(eta.dot(normal)) > 1e-12 * std::max(eta.norm(), 1e-300) && eta.norm() > 0.0) {
    throw Error(ErrorKind::InvalidFrame, "eta must be tangential, (eta|nu) != 0");
  }
  if (tau == 0.0 || !std::isfinite(tau) || !eta.allFinite()) {
    throw Error(ErrorKind::InvalidFrame, "tau must be finite and nonzero");
  }
}

std::pair<Vec3, Vec3> tangent_basis(const Vec3& normal) {
  const Vec3 ref = std::abs(normal(0)) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 t1 = (ref - ref.dot(normal) * normal).normalized();
  const Vec3 t2 = normal.cross(t1);
  return {t1, t2};
}

BoundaryFrame frame_from_tangential(const Vec3& normal, double x, double y, double tau) {
  const auto [t1, t2] = tangent_basis(normal);
  Vec3 eta = x * t1 + y * t2;
  eta -= eta.dot(normal) * normal;
  return {normal, eta, tau};
}

double QuadraticMatrixPolynomial::scale() const {
  return spectral_norm(a0) + 2.0 * spectral_norm(a1) + spectral_norm(a2);
}

double QuadraticMatrixPolynomial::scale_at(cplx s) const {
  const double r = std::abs(s);
  return spectral_norm(a0) * r * r + 2.0 * spectral_norm(a1) * r + spectral_norm(a2);
}

void QuadraticMatrixPolynomial::validate() const {
  const double s0 = spectral_norm(a0);
  const double s2 = spectral_norm(a2);
  if ((a0 - a0.adjoint()).norm() > 1e-12 * std::max(s0, 1e-300) ||
      (a2 - a2.adjoint()).norm() > 1e-12 * std::max(s2, 1e-300)) {
    throw Error(ErrorKind::InvalidArgument, "A0 and A2 must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMat3> eig(a0, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues()(0) > 1e-12 * s0)) {
    throw Error(ErrorKind::DegenerateA0, "A0 is not positive definite (material not convex along nu)");
  }
}

QuadraticMatrixPolynomial boundary_polynomial(const Material& m, const BoundaryFrame& f) {
  const Vec3& nu = f.normal();
  const Vec3& eta = f.eta();
  const double rt2 = m.density * f.tau() * f.tau();
  QuadraticMatrixPolynomial a;
  const Mat3 a0 = contract(m.stiffness, nu, nu);
  a.a0 = (0.5 * (a0 + a0.transpose())).cast<cplx>();
  a.a1 = contract(m.stiffness, nu, eta).cast<cplx>();
  const Mat3 a2 = contract(m.stiffness, eta, eta) - rt2 * Mat3::Identity();
  a.a2 = (0.5 * (a2 + a2.transpose())).cast<cplx>();
  a.validate();
  return a;
}

CMat6 StrohMatrix::swap() {
  CMat6 k = CMat6::Zero();
  k.topRightCorner<3, 3>().setIdentity();
  k.bottomLeftCorner<3, 3>().setIdentity();
  return k;
}

CMat3 StrohMatrix::resolvent(cplx z) const {
  const CMat6 m = z * CMat6::Identity() - s;
  return m.partialPivLu().inverse().topRightCorner<3, 3>();
}

StrohMatrix stroh(const QuadraticMatrixPolynomial& a) {
  a.validate();
  const CMat3 inv0 = a.a0.inverse();
  const CMat3 a1s = a.a1.adjoint();
  StrohMatrix out;
  out.s.topLeftCorner<3, 3>() = -inv0 * a.a1;
  out.s.topRightCorner<3, 3>() = inv0;
  out.s.bottomLeftCorner<3, 3>() = -a.a2 + a1s * inv0 * a.a1;
  out.s.bottomRightCorner<3, 3>() = -a1s * inv0;
  return out;
}

int SpectrumClassification::real_count() const {
  int n = 0;
  for (const auto& c : clusters) {
    if (c.real) n += c.algebraic;
  }
  return n;
}

bool SpectrumClassification::selects(const EigenCluster& c, Direction dir, double tau) const {
  if (!c.real) return c.value.imag() > 0.0;
  if (c.glancing) return false;
  // -tau (A'(s)v|v) > 0 on the kernel selects the outgoing half.
  const bool out_type = (tau < 0.0 && c.type == SignType::positive) ||
                        (tau > 0.0 && c.type == SignType::negative);
  const bool in_type = (tau < 0.0 && c.type == SignType::negative) ||
                       (tau > 0.0 && c.type == SignType::positive);
  return dir == Direction::outgoing ? out_type : in_type;
}

int SpectrumClassification::nearest(cplx z) const {
  int best = 0;
  double dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(clusters.size()); ++i) {
    const double d = std::abs(clusters[i].value - z);
    if (d < dist) {
      dist = d;
      best = i;
    }
  }
  return best;
}

SpectrumClassification classify_spectrum(const QuadraticMatrixPolynomial& a, const Tolerances& tol) {
  const StrohMatrix s = stroh(a);
  SpectrumClassification out;
  out.eigenvalues = schur_eigenvalues(s.s);
  for (const cplx& z : out.eigenvalues) out.spectral_radius = std::max(out.spectral_radius, std::abs(z));
  const double unit = 1.0 + out.spectral_radius;

  for (const auto& group : linalg::cluster(out.eigenvalues, tol.cluster * unit)) {
    EigenCluster c;
    cplx mean = 0.0;
    for (int i : group) mean += out.eigenvalues[i];
    mean /= static_cast<double>(group.size());
    c.algebraic = static_cast<int>(group.size());
    c.real = std::abs(mean.imag()) <= tol.grouping * unit;
    c.value = c.real ? cplx(mean.real(), 0.0) : mean;

    const CMat3 av = a.evaluate(c.value);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(av, Eigen::ComputeFullV);
    const int dim = std::min(c.algebraic, 3);
    const double small = tol.cluster * a.scale_at(c.value);
    c.kernel = svd.matrixV().rightCols(dim);
    c.geometric = 0;
    for (int k = 3 - dim; k < 3; ++k) {
      if (svd.singularValues()(k) <= small) ++c.geometric;
    }
    c.defective = c.geometric < c.algebraic;

    if (c.real) {
      const CMat3 d = a.derivative(c.value);
      Eigen::MatrixXcd g = c.kernel.adjoint() * d * c.kernel;
      g = 0.5 * (g + g.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g, Eigen::EigenvaluesOnly);
      c.form = eig.eigenvalues();
      const double thresh = tol.glancing * spectral_norm(d);
      const bool pos = (c.form.array() > thresh).all();
      const bool neg = (c.form.array() < -thresh).all();
      c.type = pos ? SignType::positive : neg ? SignType::negative : SignType::indefinite;
      // An indefinite cluster is a collision of opposite types, i.e. the onset
      // of a complex pair; it cannot be assigned to either half.
      c.glancing = c.defective || (c.form.array().abs() <= thresh).any() || c.type == SignType::indefinite;
      out.glancing = out.glancing || c.glancing;
    }
    out.clusters.push_back(std::move(c));
  }
  return out;
}

SpectralFactorization factorize(const QuadraticMatrixPolynomial& a, Direction dir, double tau,
                                const Tolerances& tol) {
  SpectralFactorization f;
  f.direction = dir;
  f.tau = tau;
  f.spectrum = classify_spectrum(a, tol);
  const SpectrumClassification& spec = f.spectrum;
  if (spec.glancing) throw Error(ErrorKind::GlancingSpectrum, "frame is glancing");

  int count = 0;
  for (const auto& c : spec.clusters) {
    if (spec.selects(c, dir, tau)) count += c.algebraic;
  }
  if (count != 3) {
    throw Error(ErrorKind::SigmaCardinality, "selected half-spectrum has " + std::to_string(count) +
                                                 " eigenvalues, expected 3");
  }

  const StrohMatrix s = stroh(a);
  const auto schur = linalg::ordered_schur(
      s.s, [&](cplx z) { return spec.selects(spec.clusters[spec.nearest(z)], dir, tau); });
  if (schur.selected != 3) {
    throw Error(ErrorKind::SigmaCardinality, "ordered Schur form selected " +
                                                 std::to_string(schur.selected) + " eigenvalues");
  }
  const CMat3 j = schur.unitary.topLeftCorner(3, 3);
  const CMat3 t11 = schur.triangular.topLeftCorner(3, 3);
  f.diagnostics.j_condition = linalg::condition_number(j);
  if (!(f.diagnostics.j_condition <= tol.max_j_condition)) {
    throw Error(ErrorKind::IllConditionedJ,
                "first block of the invariant subspace has condition " + std::to_string(f.diagnostics.j_condition));
  }
  const CMat3 j_inv = j.inverse();
  f.q = j * t11 * j_inv;
  const CMat3 a1h = a.a1 + a.a1.adjoint();
  f.q_sharp = -(a.a0 * f.q + a1h) * a.a0.inverse();

  const double nq = spectral_norm(f.q);
  const double unit = spectral_norm(a.a0) * nq * nq + 2.0 * spectral_norm(a.a1) * nq + spectral_norm(a.a2);
  f.diagnostics.solvency_residual = spectral_norm(a.a0 * f.q * f.q + a1h * f.q + a.a2) / unit;
  f.diagnostics.sharp_residual =
      spectral_norm(f.q_sharp * a.a0 + a.a0 * f.q + a1h) / (spectral_norm(a.a0) * nq + 2.0 * spectral_norm(a.a1));

  for (int i = 0; i < 3; ++i) f.sigma.push_back(t11(i, i));
  Eigen::ComplexEigenSolver<CMat3> sharp(f.q_sharp, false);
  for (int i = 0; i < 3; ++i) f.sigma_sharp.push_back(sharp.eigenvalues()(i));
  f.diagnostics.spectral_gap = std::numeric_limits<double>::infinity();
  for (const cplx& x : f.sigma) {
    for (const cplx& y : f.sigma_sharp) f.diagnostics.spectral_gap = std::min(f.diagnostics.spectral_gap, std::abs(x - y));
  }

  if (f.diagnostics.solvency_residual > 1e-10) {
    throw Error(ErrorKind::FactorizationCheckFailed,
                "solvency residual " + std::to_string(f.diagnostics.solvency_residual));
  }
  if (f.diagnostics.spectral_gap <= tol.cluster * (1.0 + spec.spectral_radius)) {
    throw Error(ErrorKind::FactorizationCheckFailed, "spec(Q) and spec(Q#) are not separated");
  }
  return f;
}

double factorization_residual(const QuadraticMatrixPolynomial& a, const SpectralFactorization& f,
                              const std::vector<cplx>& points) {
  double worst = 0.0;
  for (const cplx& s : points) {
    const CMat3 id = CMat3::Identity();
    const CMat3 prod = (s * id - f.q_sharp) * a.a0 * (s * id - f.q);
    worst = std::max(worst, spectral_norm(a.evaluate(s) - prod) / a.scale_at(s));
  }
  return worst;
}

ContourCheck contour_root_check(const QuadraticMatrixPolynomial& a, const CMat3& q,
                                const std::vector<Circle>& circles, int n_nodes, const Tolerances& tol) {
  if (n_nodes < 4) throw Error(ErrorKind::InvalidArgument, "contour needs at least 4 nodes");
  const std::vector<cplx> eigs = schur_eigenvalues(stroh(a).s);
  Eigen::ComplexEigenSolver<CMat3> qe(q, false);
  double radius_scale = 1.0;
  for (const cplx& z : eigs) radius_scale = std::max(radius_scale, std::abs(z));

  int enclosed = 0;
  for (const Circle& c : circles) {
    if (!(c.radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "circle radius must be positive");
    for (const cplx& z : eigs) {
      const double d = std::abs(z - c.center);
      if (std::abs(d - c.radius) <= c.radius / 10.0) {
        throw Error(ErrorKind::ContourTooClose, "an eigenvalue lies within radius/10 of the contour");
      }
      if (d < c.radius) {
        ++enclosed;
        double to_q = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 3; ++i) to_q = std::min(to_q, std::abs(qe.eigenvalues()(i) - z));
        if (to_q > 1e-6 * radius_scale) {
          throw Error(ErrorKind::ContourTooClose, "circle encloses an eigenvalue outside spec(Q)");
        }
      }
    }
  }

  auto integrate = [&](int n) {
    std::pair<CMat3, CMat3> r{CMat3::Zero(), CMat3::Zero()};
    for (const Circle& c : circles) {
      r.first += circle_integral([&](cplx z) { return CMat3(a.evaluate(z).inverse()); }, c, n);
      r.second += circle_integral([&](cplx z) { return CMat3(z * a.evaluate(z).inverse()); }, c, n);
    }
    return r;
  };

  ContourCheck out;
  int n = n_nodes;
  auto cur = integrate(n);
  if (enclosed > 0) {
    for (;;) {
      const auto next = integrate(2 * n);
      const double size = spectral_norm(next.first) + spectral_norm(next.second);
      const double change = (spectral_norm(next.first - cur.first) + spectral_norm(next.second - cur.second)) /
                            std::max(size, 1e-300);
      cur = next;
      n *= 2;
      out.convergence = change;
      if (change < tol.contour || n >= kMaxContourNodes) break;
    }
  }
  out.nodes = n;
  out.c0_norm = spectral_norm(cur.first);
  out.c1_norm = spectral_norm(cur.second);
  out.empty = enclosed == 0;
  if (!out.empty) {
    const double denom = std::max(out.c1_norm, spectral_norm(q) * out.c0_norm);
    out.residual = spectral_norm(q * cur.first - cur.second) / denom;
  }
  return out;
}

std::vector<Circle> enclosing_circles(const SpectralFactorization& f) {
  const auto& spec = f.spectrum;
  std::vector<Circle> out;
  for (const auto& c : spec.clusters) {
    if (c.real || !spec.selects(c, f.direction, f.tau)) continue;
    double d = std::numeric_limits<double>::infinity();
    for (const auto& o : spec.clusters) {
      if (&o == &c) continue;
      d = std::min(d, std::abs(o.value - c.value));
    }
    if (!std::isfinite(d)) d = 1.0;
    out.push_back({c.value, 0.5 * d});
  }
  return out;
}

CMat3 residue(const QuadraticMatrixPolynomial& a, double s, const Tolerances& tol) {
  const SpectrumClassification spec = classify_spectrum(a, tol);
  const int idx = spec.nearest(cplx(s, 0.0));
  const EigenCluster& c = spec.clusters[idx];
  const double unit = 1.0 + spec.spectral_radius;
  if (!c.real || std::abs(c.value - cplx(s, 0.0)) > tol.cluster * unit) {
    throw Error(ErrorKind::NotAnEigenvalue, "s is not a real eigenvalue of A");
  }
  if (c.defective) throw Error(ErrorKind::DefectiveEigenvalue, "real eigenvalue is defective");
  double d = std::numeric_limits<double>::infinity();
  for (const auto& o : spec.clusters) {
    if (&o != &c) d = std::min(d, std::abs(o.value - c.value));
  }
  const Circle circle{c.value, std::isfinite(d) ? 0.5 * d : 1.0};
  auto f = [&](cplx z) { return CMat3(a.evaluate(z).inverse()); };
  int n = 64;
  CMat3 cur = circle_integral(f, circle, n);
  while (n < kMaxContourNodes) {
    const CMat3 next = circle_integral(f, circle, 2 * n);
    const double change = spectral_norm(next - cur) / std::max(spectral_norm(next), 1e-300);
    cur = next;
    n *= 2;
    if (change < tol.contour) break;
  }
  return cur / (2.0 * std::numbers::pi * kI);
}

}  // namespace stroh
