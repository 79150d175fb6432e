#include "stroh/scatter.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "stroh/error.hpp"
#include "stroh/linalg.hpp"

namespace stroh {

namespace {

using linalg::spectral_norm;

BoundaryFrame side_frame(const BoundaryFrame& f, Side side) { return side == Side::plus ? f : f.flipped(); }

Side other(Side s) { return s == Side::plus ? Side::minus : Side::plus; }

const EigenCluster* incoming_cluster(const SpectrumClassification& spec, double s, double tau,
                                     const Tolerances& tol) {
  const EigenCluster& c = spec.clusters[spec.nearest(cplx(s, 0.0))];
  if (!c.real || !spec.selects(c, Direction::incoming, tau)) return nullptr;
  if (std::abs(c.value.real() - s) > tol.cluster * (1.0 + spec.spectral_radius)) return nullptr;
  return &c;
}

bool has_incoming(const SpectrumClassification& spec, double tau) {
  for (const auto& c : spec.clusters) {
    if (c.real && spec.selects(c, Direction::incoming, tau)) return true;
  }
  return false;
}

double mode_flux(const QuadraticMatrixPolynomial& a, double s, double tau, const CVec3& v) {
  return -0.5 * tau * inner(CVec3(a.derivative(s) * v), v).real();
}

void require_invertible(const CMat3& m) {
  Eigen::JacobiSVD<CMat3> svd(m);
  const auto& sv = svd.singularValues();
  if (!(sv(2) > 1e-8 * sv(0))) {
    throw Error(ErrorKind::NonEllipticOperator, "boundary impedance is singular at this frame");
  }
}

SideResult side_result(const QuadraticMatrixPolynomial& a, const SpectralFactorization& out, const CVec3& f,
                       Side side) {
  const ModeProjectors p = mode_projectors(out);
  SideResult r;
  r.side = side;
  r.f = f;
  r.z_out = -kI * (a.a0 * out.q + a.a1);
  r.evanescent = p.pi_c * f;
  r.evanescent_flux = flux_form(r.z_out, out.tau, r.evanescent);
  for (const auto& mode : p.modes) {
    ModeAmplitude m;
    m.side = side;
    m.s = mode.s;
    m.multiplicity = mode.multiplicity;
    m.amplitude = mode.projector * f;
    m.flux = mode_flux(a, mode.s, out.tau, m.amplitude);
    r.modes.push_back(m);
  }
  return r;
}

void finish(ScatterResult& r, const QuadraticMatrixPolynomial& a_in) {
  const TraceField& t = r.incident;
  r.incident_flux = -mode_flux(a_in, t.s_in, t.frame.tau(), t.g);
  r.outgoing_flux = 0.0;
  for (const auto& s : r.sides) {
    for (const auto& m : s.modes) r.outgoing_flux += m.flux;
  }
  r.balance_residual = r.incident_flux > 0.0 ? std::abs(r.incident_flux - r.outgoing_flux) / r.incident_flux : 0.0;
}

ScatterResult transmit_from_plus(const Material& plus, const Material& minus, const TraceField& t,
                                 const Tolerances& tol) {
  const BoundaryFrame& frame = t.frame;
  const double tau = frame.tau();
  const auto ap = boundary_polynomial(plus, frame);
  const auto am = boundary_polynomial(minus, frame.flipped());
  const auto fp_out = factorize(ap, Direction::outgoing, tau, tol);
  if (!has_incoming(fp_out.spectrum, tau)) throw Error(ErrorKind::NoIncomingMode, "no propagating incoming mode");
  const auto fp_in = factorize(ap, Direction::incoming, tau, tol);
  const auto fm_out = factorize(am, Direction::outgoing, tau, tol);

  const CMat3 zp_out = impedance_from_factorization(ap, fp_out).z;
  const CMat3 zp_in = impedance_from_factorization(ap, fp_in).z;
  const CMat3 zm_out = impedance_from_factorization(am, fm_out).z;
  const CMat3 sum = zp_out + zm_out;
  require_invertible(sum);

  const CVec3 f_minus = -sum.partialPivLu().solve(CVec3((zp_in - zp_out) * t.g));
  const CVec3 f_plus = f_minus - t.g;

  ScatterResult r{t, 0.0, 0.0, 0.0, {}};
  r.sides.push_back(side_result(ap, fp_out, f_plus, Side::plus));
  r.sides.push_back(side_result(am, fm_out, f_minus, Side::minus));
  finish(r, ap);
  return r;
}

}  // namespace

const SideResult* ScatterResult::side(Side s) const {
  for (const auto& r : sides) {
    if (r.side == s) return &r;
  }
  return nullptr;
}

std::vector<IncomingMode> incoming_modes(const Material& m, const BoundaryFrame& frame, const Tolerances& tol) {
  const auto a = boundary_polynomial(m, frame);
  const auto spec = classify_spectrum(a, tol);
  const double tau = frame.tau();

  std::vector<Vec3> refs;
  const Vec3& nu = frame.normal();
  if (frame.eta().norm() > 0.0) {
    const Vec3 eh = frame.eta().normalized();
    refs.push_back(nu.cross(eh));
    refs.push_back(eh);
  }
  refs.push_back(nu);
  refs.push_back(Vec3::UnitX());
  refs.push_back(Vec3::UnitY());
  refs.push_back(Vec3::UnitZ());

  std::vector<IncomingMode> out;
  for (const auto& c : spec.clusters) {
    if (!c.real || !spec.selects(c, Direction::incoming, tau)) continue;
    const Eigen::MatrixXcd proj = c.kernel * c.kernel.adjoint();
    IncomingMode mode;
    mode.s = c.value.real();
    mode.multiplicity = c.algebraic;
    mode.basis.resize(3, c.algebraic);
    int found = 0;
    for (const Vec3& r : refs) {
      if (found == c.algebraic) break;
      CVec3 v = proj * r.cast<cplx>();
      for (int j = 0; j < found; ++j) v -= inner(v, CVec3(mode.basis.col(j))) * mode.basis.col(j);
      const double n = v.norm();
      if (n <= 1e-6) continue;
      v /= n;
      const double flux = -mode_flux(a, mode.s, tau, v);
      mode.basis.col(found++) = v / std::sqrt(flux);
    }
    out.push_back(std::move(mode));
  }
  return out;
}

TraceField make_trace_field(const Material& m, const BoundaryFrame& frame, double s_in, const CVec3& g, Side side,
                            const Tolerances& tol) {
  const BoundaryFrame f = side_frame(frame, side);
  const auto a = boundary_polynomial(m, f);
  const auto spec = classify_spectrum(a, tol);
  if (!has_incoming(spec, f.tau())) throw Error(ErrorKind::NoIncomingMode, "no propagating incoming mode");
  const EigenCluster* c = incoming_cluster(spec, s_in, f.tau(), tol);
  if (c == nullptr) throw Error(ErrorKind::InvalidArgument, "s_in is not an incoming real eigenvalue");
  const CVec3 rest = g - c->kernel * (c->kernel.adjoint() * g);
  if (rest.norm() > 1e-9 * g.norm()) {
    throw Error(ErrorKind::InvalidArgument, "incoming trace is not in ker A(s_in)");
  }
  return TraceField{g, frame, side, c->value.real()};
}

ScatterResult reflect_free_surface(const Material& m, const TraceField& incident, const Tolerances& tol) {
  const BoundaryFrame& frame = incident.frame;
  const double tau = frame.tau();
  const auto a = boundary_polynomial(m, frame);
  const auto f_out = factorize(a, Direction::outgoing, tau, tol);
  if (!has_incoming(f_out.spectrum, tau)) throw Error(ErrorKind::NoIncomingMode, "no propagating incoming mode");
  const auto f_in = factorize(a, Direction::incoming, tau, tol);
  const CMat3 z_out = impedance_from_factorization(a, f_out).z;
  const CMat3 z_in = impedance_from_factorization(a, f_in).z;
  require_invertible(z_out);
  const CVec3 f = -z_out.partialPivLu().solve(CVec3(z_in * incident.g));

  ScatterResult r{incident, 0.0, 0.0, 0.0, {}};
  r.sides.push_back(side_result(a, f_out, f, Side::plus));
  finish(r, a);
  return r;
}

ScatterResult transmit_interface(const Material& plus, const Material& minus, const TraceField& incident,
                                 const Tolerances& tol) {
  if (incident.side == Side::plus) return transmit_from_plus(plus, minus, incident, tol);
  TraceField swapped = incident;
  swapped.frame = incident.frame.flipped();
  swapped.side = Side::plus;
  ScatterResult r = transmit_from_plus(minus, plus, swapped, tol);
  r.incident = incident;
  for (auto& s : r.sides) {
    s.side = other(s.side);
    for (auto& m : s.modes) m.side = s.side;
  }
  return r;
}

BalanceReport energy_balance(const ScatterResult& r) {
  BalanceReport b;
  b.incident = r.incident_flux;
  for (const auto& s : r.sides) {
    b.max_evanescent_flux = std::max(b.max_evanescent_flux, std::abs(s.evanescent_flux));
    for (const auto& m : s.modes) {
      b.outgoing.push_back(m.flux);
      b.outgoing_total += m.flux;
    }
  }
  b.residual = b.incident > 0.0 ? std::abs(b.incident - b.outgoing_total) / b.incident : 0.0;
  return b;
}

}  // namespace stroh
