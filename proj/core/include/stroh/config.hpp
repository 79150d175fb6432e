#pragma once

namespace stroh {

// Numerical thresholds shared by the spectral routines. All are relative.
struct Tolerances {
  // An eigenvalue of the Stroh matrix is real iff |Im s| <= grouping * (1 + spectral radius).
  double grouping = 1e-8;
  // Eigenvalues closer than cluster * (1 + spectral radius) are treated as one eigenvalue.
  double cluster = 1e-6;
  // Sign-type form (A'(s)v|v) below glancing * |A'(s)| marks the frame glancing.
  double glancing = 1e-6;
  // Stopping criterion for node doubling in the Barnett-Lothe quadrature.
  double quadrature = 1e-8;
  // Stopping criterion for node doubling in contour integrals.
  double contour = 1e-10;
  // Relative bisection tolerance for tau_eta, Rayleigh and Stoneley roots.
  double bisection = 1e-10;
  // Offset below tau_eta at which the transsonic end of the elliptic interval is sampled.
  double limit_offset = 1e-6;
  // Largest accepted condition number of the first block of the invariant subspace.
  double max_j_condition = 1e10;
  // Largest accepted eigenvector condition number of Q in the Lyapunov solve.
  double max_q_condition = 1e8;
};

}  // namespace stroh
