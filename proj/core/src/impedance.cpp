#include "stroh/impedance.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "stroh/error.hpp"
#include "stroh/linalg.hpp"

namespace stroh {

using linalg::spectral_norm;

Impedance impedance_from_factorization(const QuadraticMatrixPolynomial& a, const SpectralFactorization& f) {
  Impedance z;
  z.z = -kI * (a.a0 * f.q + a.a1);
  z.direction = f.direction;
  z.tau = f.tau;
  return z;
}

Impedance compute_impedance(const Material& m, const BoundaryFrame& frame, Direction dir, const Tolerances& tol) {
  const auto a = boundary_polynomial(m, frame);
  Impedance z = impedance_from_factorization(a, factorize(a, dir, frame.tau(), tol));
  z.frame = frame;
  return z;
}

ModeProjectors mode_projectors(const SpectralFactorization& f) {
  const auto& spec = f.spectrum;
  const Eigen::MatrixXcd q = f.q;
  ModeProjectors p;
  for (int i = 0; i < static_cast<int>(spec.clusters.size()); ++i) {
    const auto& c = spec.clusters[i];
    if (!spec.selects(c, f.direction, f.tau)) continue;
    if (!c.real) {
      p.dim_c += c.algebraic;
      continue;
    }
    RealMode mode;
    mode.s = c.value.real();
    mode.multiplicity = c.algebraic;
    mode.projector = linalg::spectral_projector(q, [&](cplx z) { return spec.nearest(z) == i; });
    p.dim_r += c.algebraic;
    p.modes.push_back(std::move(mode));
  }
  p.pi_c = linalg::spectral_projector(q, [&](cplx z) { return !spec.clusters[spec.nearest(z)].real; });
  return p;
}

double flux_form(const CMat3& z, double tau, const CVec3& u) {
  return -tau * inner(u, CVec3(z * u)).imag();
}

double hermiticity_on_ec(const CMat3& z, const ModeProjectors& p) {
  const double nz = spectral_norm(z);
  if (nz == 0.0) return 0.0;
  return spectral_norm(p.pi_c.adjoint() * (z - z.adjoint()) * p.pi_c) / nz;
}

ModalFlux modal_flux_decomposition(const QuadraticMatrixPolynomial& a, const SpectralFactorization& f,
                                   const CVec3& u) {
  const ModeProjectors p = mode_projectors(f);
  const CMat3 z = -kI * (a.a0 * f.q + a.a1);
  ModalFlux out;
  for (const auto& mode : p.modes) {
    const CVec3 us = mode.projector * u;
    const double flux = 0.5 * inner(CVec3(a.derivative(mode.s) * us), us).real();
    out.s.push_back(mode.s);
    out.flux.push_back(flux);
    out.sum += flux;
  }
  out.im_u_zu = inner(u, CVec3(z * u)).imag();
  const double unit = spectral_norm(z) * u.squaredNorm();
  out.residual = unit > 0.0 ? std::abs(out.im_u_zu - out.sum) / unit : 0.0;
  return out;
}

namespace {

struct BlIntegrals {
  CMat3 i0;
  CMat3 k;  // principal value integral of A(s)^{-1} / s
};

// With s = tan(theta), cos^2(theta) A(tan theta) = A0 sin^2 + (A1 + A1^*) sin cos + A2 cos^2,
// which stays invertible at theta = +-pi/2, so both integrands are smooth.
BlIntegrals bl_integrals(const QuadraticMatrixPolynomial& a, int n) {
  const auto gl = linalg::gauss_legendre(n);
  const CMat3 a1h = a.a1 + a.a1.adjoint();
  const double half = 0.5 * std::numbers::pi;
  BlIntegrals r{CMat3::Zero(), CMat3::Zero()};
  for (int k = 0; k < n; ++k) {
    const double th = half * gl.nodes[k];
    const double w = half * gl.weights[k];
    const double sn = std::sin(th);
    const double cs = std::cos(th);
    const CMat3 b = a.a0 * (sn * sn) + a1h * (sn * cs) + a.a2 * (cs * cs);
    const CMat3 binv = b.inverse();
    r.i0 += w * binv;
    // ds / s = d theta / (sin cos); A^{-1} = cos^2 B^{-1}. Nodes come in +-pairs,
    // so the odd singular part cancels and the sum is the principal value.
    r.k += (w * cs / sn) * binv;
  }
  return r;
}

}  // namespace

BarnettLothe barnett_lothe_impedance(const QuadraticMatrixPolynomial& a, double tau, const Tolerances& tol) {
  const auto spec = classify_spectrum(a, tol);
  if (spec.real_count() > 0) {
    throw Error(ErrorKind::RealSpectrumPresent, "Barnett-Lothe formula needs a spectrum without real points");
  }
  int n = 64;
  BlIntegrals cur = bl_integrals(a, n);
  double change = 0.0;
  for (;;) {
    const BlIntegrals next = bl_integrals(a, 2 * n);
    change = (spectral_norm(next.i0 - cur.i0) + spectral_norm(next.k - cur.k)) /
             (spectral_norm(next.i0) + spectral_norm(next.k));
    cur = next;
    n *= 2;
    if (change < tol.quadrature || n >= (1 << 16)) break;
  }

  BarnettLothe out;
  out.i0 = cur.i0;
  // (s A0 + A1) A^{-1} = 1/s - (A1^* + A2 / s) A^{-1}; the 1/s term has zero principal value.
  out.i1 = -a.a1.adjoint() * cur.i0 - a.a2 * cur.k;
  const CMat3 i0_inv = cur.i0.inverse();
  out.re_z = std::numbers::pi * i0_inv;
  // i Z I0 = i pi + I1
  out.impedance.z = (std::numbers::pi * CMat3::Identity() - kI * out.i1) * i0_inv;
  out.impedance.direction = Direction::outgoing;
  out.impedance.tau = tau;
  out.impedance.region = Region::elliptic;
  out.nodes = n;
  out.convergence = change;
  return out;
}

CMat3 impedance_tau_derivative(const SpectralFactorization& f, const CMat3& a2_dot, const Tolerances& tol) {
  for (const auto& c : f.spectrum.clusters) {
    if (c.real) throw Error(ErrorKind::RealSpectrumPresent, "Lyapunov solve needs an elliptic frame");
  }
  Eigen::ComplexEigenSolver<CMat3> eig(f.q);
  const CMat3 v = eig.eigenvectors();
  const double cond = linalg::condition_number(v);
  if (!(cond <= tol.max_q_condition)) {
    throw Error(ErrorKind::NearDefectiveQ, "eigenvector condition of Q is " + std::to_string(cond));
  }
  const CVec3 q = eig.eigenvalues();
  const CMat3 rhs = v.adjoint() * a2_dot * v;
  CMat3 y;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) y(j, k) = -rhs(j, k) / (kI * (q(k) - std::conj(q(j))));
  const CMat3 v_inv = v.inverse();
  const CMat3 zdot = v_inv.adjoint() * y * v_inv;
  return 0.5 * (zdot + zdot.adjoint());
}

CMat3 impedance_tau_derivative(const Material& m, const BoundaryFrame& frame, const Tolerances& tol) {
  const auto a = boundary_polynomial(m, frame);
  const auto f = factorize(a, Direction::outgoing, frame.tau(), tol);
  return impedance_tau_derivative(f, -m.density * CMat3::Identity(), tol);
}

CMat3 impedance_tau_derivative_fd(const Material& m, const BoundaryFrame& frame, double rel_step,
                                  const Tolerances& tol) {
  const double t2 = frame.tau() * frame.tau();
  const double h = rel_step * t2;
  const double sign = frame.tau() < 0.0 ? -1.0 : 1.0;
  const CMat3 zp = compute_impedance(m, frame.with_tau(sign * std::sqrt(t2 + h)), Direction::outgoing, tol).z;
  const CMat3 zm = compute_impedance(m, frame.with_tau(sign * std::sqrt(t2 - h)), Direction::outgoing, tol).z;
  return (zp - zm) / (2.0 * h);
}

}  // namespace stroh
