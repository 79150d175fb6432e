#pragma once

#include <optional>
#include <vector>

#include "stroh/impedance.hpp"

namespace stroh {

// A real eigenvalue of incoming type with a kernel basis normalized to unit
// incident flux tau (A'(s)v|v) / 2 = 1.
struct IncomingMode {
  double s = 0.0;
  int multiplicity = 0;
  Eigen::MatrixXcd basis;  // 3 x multiplicity
};

// Basis vectors come from Gram-Schmidt of nu x eta^, eta^, nu, e1, e2, e3
// projected onto ker A(s), so degenerate kernels get a reproducible basis.
std::vector<IncomingMode> incoming_modes(const Material& m, const BoundaryFrame& frame, const Tolerances& tol = {});

// Dirichlet trace of an incoming wave carried by `side`.
struct TraceField {
  CVec3 g;
  BoundaryFrame frame;
  Side side = Side::plus;
  double s_in = 0.0;
};

// Validates g in ker A(s_in) (distance <= 1e-9 |g|) with s_in an incoming eigenvalue.
// For side minus, `m` is the minus medium and its polynomial uses -nu.
TraceField make_trace_field(const Material& m, const BoundaryFrame& frame, double s_in, const CVec3& g,
                            Side side = Side::plus, const Tolerances& tol = {});

struct ModeAmplitude {
  Side side = Side::plus;
  double s = 0.0;
  int multiplicity = 0;
  CVec3 amplitude;  // psi_s f
  double flux = 0.0;  // -tau (A'(s) a | a) / 2
};

struct SideResult {
  Side side = Side::plus;
  CVec3 f;           // outgoing trace
  CVec3 evanescent;  // pi_c f
  double evanescent_flux = 0.0;
  std::vector<ModeAmplitude> modes;
  CMat3 z_out;
};

struct ScatterResult {
  TraceField incident;
  double incident_flux = 0.0;
  double outgoing_flux = 0.0;
  double balance_residual = 0.0;
  std::vector<SideResult> sides;  // reflected side first

  const SideResult* side(Side s) const;
};

// Zero traction: z_out f + z_in g = 0.
ScatterResult reflect_free_surface(const Material& m, const TraceField& incident, const Tolerances& tol = {});

// Welded interface: [u] = 0 and [Tu] = 0. The plus medium lies on the side nu
// points into; incidence from the minus side is handled by swapping sides.
ScatterResult transmit_interface(const Material& plus, const Material& minus, const TraceField& incident,
                                 const Tolerances& tol = {});

struct BalanceReport {
  double incident = 0.0;
  std::vector<double> outgoing;
  double outgoing_total = 0.0;
  double residual = 0.0;
  double max_evanescent_flux = 0.0;
};

BalanceReport energy_balance(const ScatterResult& r);

}  // namespace stroh
