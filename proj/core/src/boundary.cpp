#include "stroh/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "stroh/acoustic.hpp"
#include "stroh/error.hpp"
#include "stroh/linalg.hpp"

namespace stroh {

namespace {

using linalg::spectral_norm;

// Failures that mean the frame sits on or next to the glancing set.
bool glancing_failure(ErrorKind k) {
  return k == ErrorKind::GlancingSpectrum || k == ErrorKind::SigmaCardinality ||
         k == ErrorKind::IllConditionedJ || k == ErrorKind::FactorizationCheckFailed;
}

Region label_for(int dim_c, bool full) {
  if (dim_c == 0) return Region::hyperbolic;
  if (full) return Region::elliptic;
  return Region::mixed;
}

Eigen::MatrixXcd range_basis(const CMat3& p, int dim) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(p);
  Eigen::MatrixXcd q = qr.householderQ();
  return q.leftCols(dim);
}

double lambda_min(const CMat3& z) {
  const CMat3 h = 0.5 * (z + z.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat3> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

struct Dims {
  int plus = 0;
  int minus = 0;
  int intersection = 0;
};

Dims interface_dims(const Material& plus, const Material& minus, const BoundaryFrame& frame, const Tolerances& tol) {
  const auto ap = boundary_polynomial(plus, frame);
  const auto am = boundary_polynomial(minus, frame.flipped());
  const auto pp = mode_projectors(factorize(ap, Direction::outgoing, frame.tau(), tol));
  const auto pm = mode_projectors(factorize(am, Direction::outgoing, frame.tau(), tol));
  Dims d{pp.dim_c, pm.dim_c, 0};
  if (d.plus == 0 || d.minus == 0) return d;
  const Eigen::MatrixXcd bp = range_basis(pp.pi_c, d.plus);
  const Eigen::MatrixXcd bm = range_basis(pm.pi_c, d.minus);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(bp.adjoint() * bm);
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 1.0 - 1e-8) ++d.intersection;
  }
  return d;
}

double bisect_tau_limit(const std::function<bool(double)>& elliptic, double hi, double rel_tol) {
  double lo = 1e-3 * hi;
  if (!elliptic(lo)) {
    throw Error(ErrorKind::NonEllipticOperator, "frame is not elliptic as tau -> 0");
  }
  while (elliptic(hi)) hi *= 2.0;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (elliptic(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double acoustic_tau_bound(const Material& m, const Vec3& unit_eta) {
  Eigen::SelfAdjointEigenSolver<Mat3> eig(acoustic_tensor(m.stiffness, unit_eta), Eigen::EigenvaluesOnly);
  // rho tau^2 >= l_max(eta) makes A(0) negative semidefinite, so a real root exists.
  return 1.01 * std::sqrt(std::max(eig.eigenvalues()(2), 0.0) / m.density);
}

bool spectrum_free_of_real(const Material& m, const Vec3& normal, const Vec3& unit_eta, double tau,
                           const Tolerances& tol) {
  const auto a = boundary_polynomial(m, BoundaryFrame(normal, unit_eta, tau));
  return classify_spectrum(a, tol).real_count() == 0;
}

SurfaceWave find_root(const std::function<CMat3(double)>& z_of_tau, double tau_eta, const Tolerances& tol) {
  SurfaceWave w;
  w.tau_eta = tau_eta;
  const double lo0 = 1e-3 * tau_eta;
  const double hi0 = tau_eta * (1.0 - tol.limit_offset);
  auto relative_min = [&](double tau) {
    const CMat3 z = z_of_tau(tau);
    return lambda_min(z) / spectral_norm(z);
  };
  if (!(relative_min(lo0) > 0.0)) {
    throw Error(ErrorKind::NonEllipticOperator, "impedance is not positive definite as tau -> 0");
  }
  double at_hi = 0.0;
  try {
    at_hi = relative_min(hi0);
  } catch (const Error& e) {
    if (glancing_failure(e.kind())) {
      throw Error(ErrorKind::GlancingLimit, std::string("cannot evaluate z near tau_eta: ") + e.what());
    }
    throw;
  }
  if (at_hi > 0.0) throw Error(ErrorKind::NoSurfaceWave, "smallest impedance eigenvalue stays positive");

  double lo = lo0;
  double hi = hi0;
  while (hi - lo > tol.bisection * hi) {
    const double mid = 0.5 * (lo + hi);
    (relative_min(mid) > 0.0 ? lo : hi) = mid;
  }
  w.bracket_lo = lo;
  w.bracket_hi = hi;
  w.tau = 0.5 * (lo + hi);
  const CMat3 z = z_of_tau(w.tau);
  const CMat3 h = 0.5 * (z + z.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat3> eig(h);
  const double nz = spectral_norm(z);
  w.polarization = eig.eigenvectors().col(0);
  w.lambda_min = eig.eigenvalues()(0) / nz;
  w.det_z = std::abs(z.determinant()) / (nz * nz * nz);
  return w;
}

}  // namespace

RegionClass classify_boundary(const Material& m, const BoundaryFrame& frame, const Tolerances& tol) {
  RegionClass r;
  try {
    const auto a = boundary_polynomial(m, frame);
    const auto p = mode_projectors(factorize(a, Direction::outgoing, frame.tau(), tol));
    r.dim_c_plus = p.dim_c;
    r.label = label_for(p.dim_c, p.dim_c == 3);
  } catch (const Error& e) {
    if (!glancing_failure(e.kind())) throw;
    r.label = Region::glancing;
  }
  return r;
}

RegionClass classify_interface(const Material& plus, const Material& minus, const BoundaryFrame& frame,
                               const Tolerances& tol) {
  RegionClass r;
  try {
    const Dims d = interface_dims(plus, minus, frame, tol);
    r.dim_c_plus = d.plus;
    r.dim_c_minus = d.minus;
    r.dim_c_intersection = d.intersection;
    r.label = label_for(d.intersection, d.plus == 3 && d.minus == 3);
  } catch (const Error& e) {
    if (!glancing_failure(e.kind())) throw;
    r.label = Region::glancing;
  }
  return r;
}

Impedance iso_impedance_closed_form(double lambda, double mu, double density, const BoundaryFrame& frame) {
  const Vec3& nu = frame.normal();
  const Vec3& eta = frame.eta();
  const double tau = frame.tau();
  const double rt2 = density * tau * tau;
  const double eta2 = eta.squaredNorm();
  const double m2 = lambda + 2.0 * mu;

  // Outgoing branch: real roots take the sign -sign(tau), imaginary ones Im > 0.
  auto root = [&](double s2, const char* which) {
    if (std::abs(s2) <= 1e-12 * (rt2 / mu + eta2)) {
      throw Error(ErrorKind::GlancingSpectrum, std::string(which) + " root vanishes");
    }
    return s2 > 0.0 ? cplx((tau < 0.0 ? 1.0 : -1.0) * std::sqrt(s2), 0.0) : cplx(0.0, std::sqrt(-s2));
  };
  const cplx ss = root(rt2 / mu - eta2, "shear");
  const cplx sp = root(rt2 / m2 - eta2, "pressure");

  Impedance out;
  out.direction = Direction::outgoing;
  out.tau = tau;
  out.frame = frame;
  const CMat3 nn = (nu * nu.transpose()).cast<cplx>();
  if (eta.norm() == 0.0) {
    out.z = -kI * (ss * mu * (CMat3::Identity() - nn) + sp * m2 * nn);
    return out;
  }
  const Vec3 eta_hat = eta / eta.norm();
  const CVec3 zeta = nu.cross(eta_hat).cast<cplx>();
  const CVec3 n = nu.cast<cplx>();
  const CVec3 e = eta.cast<cplx>();
  const cplx s_tilde = -eta2 / ss;

  CMat3 basis;
  CMat3 image;  // i z applied to each basis column
  basis.col(0) = zeta;
  image.col(0) = ss * mu * zeta;
  basis.col(1) = e + s_tilde * n;
  image.col(1) = -mu * eta2 * n + ss * mu * e;
  basis.col(2) = e + sp * n;
  image.col(2) = (rt2 - mu * eta2) * n + sp * mu * e;
  // The columns above belong to the split A1 = (lambda + mu) nu (x) eta. The
  // traction split A1 = lambda nu (x) eta + mu eta (x) nu gives the same A(s)
  // and shifts z by the Hermitian term -i mu (eta (x) nu - nu (x) eta).
  const CMat3 skew = (eta * nu.transpose() - nu * eta.transpose()).cast<cplx>();
  out.z = -kI * (image * basis.inverse() + mu * skew);
  return out;
}

double tau_limit(const Material& m, const Vec3& normal, const Vec3& unit_eta, const Tolerances& tol) {
  if (std::abs(unit_eta.norm() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "tangential direction must be a unit vector");
  }
  return bisect_tau_limit([&](double t) { return spectrum_free_of_real(m, normal, unit_eta, t, tol); },
                          acoustic_tau_bound(m, unit_eta), tol.bisection);
}

double tau_limit(const Material& plus, const Material& minus, const Vec3& normal, const Vec3& unit_eta,
                 const Tolerances& tol) {
  return std::min(tau_limit(plus, normal, unit_eta, tol), tau_limit(minus, -normal, unit_eta, tol));
}

double impedance_lambda_min(const Material& m, const BoundaryFrame& frame, const Tolerances& tol) {
  return lambda_min(compute_impedance(m, frame, Direction::outgoing, tol).z);
}

double impedance_lambda_min(const Material& plus, const Material& minus, const BoundaryFrame& frame,
                            const Tolerances& tol) {
  const CMat3 z = compute_impedance(plus, frame, Direction::outgoing, tol).z +
                  compute_impedance(minus, frame.flipped(), Direction::outgoing, tol).z;
  return lambda_min(z);
}

SurfaceWave rayleigh_speed(const Material& m, const Vec3& normal, const Vec3& unit_eta, const Tolerances& tol) {
  const double te = tau_limit(m, normal, unit_eta, tol);
  SurfaceWave w = find_root(
      [&](double t) { return compute_impedance(m, BoundaryFrame(normal, unit_eta, t), Direction::outgoing, tol).z; },
      te, tol);
  w.speed = w.tau;
  w.slowness = 1.0 / w.tau;
  return w;
}

SurfaceWave stoneley_speed(const Material& plus, const Material& minus, const Vec3& normal, const Vec3& unit_eta,
                           const Tolerances& tol) {
  const double te = tau_limit(plus, minus, normal, unit_eta, tol);
  SurfaceWave w = find_root(
      [&](double t) {
        const BoundaryFrame f(normal, unit_eta, t);
        return CMat3(compute_impedance(plus, f, Direction::outgoing, tol).z +
                     compute_impedance(minus, f.flipped(), Direction::outgoing, tol).z);
      },
      te, tol);
  w.speed = w.tau;
  w.slowness = 1.0 / w.tau;
  return w;
}

namespace {

MarginReport margin_scan(const std::vector<BoundaryFrame>& frames, const MarginOptions& opt,
                         const std::function<RegionClass(const BoundaryFrame&)>& classify,
                         const std::function<CMat3(const BoundaryFrame&)>& impedance) {
  MarginReport rep;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& f : frames) rep.samples.push_back({f, Region::glancing, nan});
  linalg::parallel_for(frames.size(), opt.threads, [&](std::size_t i) {
    MarginSample& s = rep.samples[i];
    s.label = classify(s.frame).label;
    if (s.label == Region::glancing) return;
    if (s.label == Region::elliptic && !opt.include_elliptic) return;
    Eigen::JacobiSVD<CMat3> svd(impedance(s.frame));
    const auto& sv = svd.singularValues();
    s.margin = sv(2) / sv(0);
  });
  rep.margin = std::numeric_limits<double>::infinity();
  for (const auto& s : rep.samples) {
    if (std::isnan(s.margin)) continue;
    ++rep.included;
    rep.margin = std::min(rep.margin, s.margin);
  }
  if (rep.included == 0) rep.margin = nan;
  return rep;
}

}  // namespace

MarginReport ellipticity_margin(const Material& m, const std::vector<BoundaryFrame>& frames,
                                const MarginOptions& opt, const Tolerances& tol) {
  return margin_scan(
      frames, opt, [&](const BoundaryFrame& f) { return classify_boundary(m, f, tol); },
      [&](const BoundaryFrame& f) { return compute_impedance(m, f, Direction::outgoing, tol).z; });
}

MarginReport ellipticity_margin(const Material& plus, const Material& minus, const std::vector<BoundaryFrame>& frames,
                                const MarginOptions& opt, const Tolerances& tol) {
  return margin_scan(
      frames, opt, [&](const BoundaryFrame& f) { return classify_interface(plus, minus, f, tol); },
      [&](const BoundaryFrame& f) {
        return CMat3(compute_impedance(plus, f, Direction::outgoing, tol).z +
                     compute_impedance(minus, f.flipped(), Direction::outgoing, tol).z);
      });
}

}  // namespace stroh
