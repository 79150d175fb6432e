#pragma once

#include <optional>
#include <vector>

#include "stroh/config.hpp"
#include "stroh/qmp.hpp"

namespace stroh {

struct Impedance {
  CMat3 z;
  Direction direction = Direction::outgoing;
  double tau = 0.0;
  std::optional<BoundaryFrame> frame;
  std::optional<Region> region;
};

// z = -i (A0 Q + A1).
Impedance impedance_from_factorization(const QuadraticMatrixPolynomial& a, const SpectralFactorization& f);

// boundary_polynomial + factorize + impedance_from_factorization.
Impedance compute_impedance(const Material& m, const BoundaryFrame& frame, Direction dir,
                            const Tolerances& tol = {});

struct RealMode {
  double s = 0.0;
  int multiplicity = 0;
  CMat3 projector;  // psi_s, onto ker(Q - s) along the other Q-invariant subspaces
};

struct ModeProjectors {
  std::vector<RealMode> modes;  // ordered by the spectrum's cluster order
  CMat3 pi_c;                   // onto E_c, the non-real part
  int dim_c = 0;
  int dim_r = 0;
};

ModeProjectors mode_projectors(const SpectralFactorization& f);

// -tau Im(u|zu); nonnegative for outgoing z and zero on E_c.
double flux_form(const CMat3& z, double tau, const CVec3& u);
inline double flux_form(const Impedance& z, const CVec3& u) { return flux_form(z.z, z.tau, u); }

// max |P^*(z - z^*)P| / |z| with P the projector onto E_c.
double hermiticity_on_ec(const CMat3& z, const ModeProjectors& p);

struct ModalFlux {
  std::vector<double> s;
  std::vector<double> flux;  // (A'(s) u_s | u_s) / 2 with u_s = psi_s u
  double sum = 0.0;
  double im_u_zu = 0.0;      // Im(u|Zu), equal to sum
  double residual = 0.0;     // |im_u_zu - sum| / (|Z| |u|^2)
};

ModalFlux modal_flux_decomposition(const QuadraticMatrixPolynomial& a, const SpectralFactorization& f,
                                   const CVec3& u);

struct BarnettLothe {
  Impedance impedance;
  CMat3 re_z;       // pi I0^{-1}
  CMat3 i0;         // integral of A(s)^{-1} over the real line
  CMat3 i1;         // principal value integral of (s A0 + A1) A(s)^{-1}
  int nodes = 0;
  double convergence = 0.0;
};

// Elliptic frames only: throws RealSpectrumPresent otherwise.
BarnettLothe barnett_lothe_impedance(const QuadraticMatrixPolynomial& a, double tau, const Tolerances& tol = {});

// dZ/d(tau^2) from i(Zdot Q - Q^* Zdot) = -A2dot, solved in the eigenbasis of Q.
CMat3 impedance_tau_derivative(const SpectralFactorization& f, const CMat3& a2_dot, const Tolerances& tol = {});
CMat3 impedance_tau_derivative(const Material& m, const BoundaryFrame& frame, const Tolerances& tol = {});

// Central difference of the outgoing Z in tau^2 with step rel_step * tau^2.
CMat3 impedance_tau_derivative_fd(const Material& m, const BoundaryFrame& frame, double rel_step = 1e-5,
                                  const Tolerances& tol = {});

}  // namespace stroh
