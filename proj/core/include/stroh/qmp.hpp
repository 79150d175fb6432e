#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "stroh/config.hpp"
#include "stroh/materials.hpp"
#include "stroh/types.hpp"

namespace stroh {

// A boundary point in the cotangent bundle: unit conormal nu, tangential
// covector eta with (eta|nu) = 0, and nonzero frequency tau.
class BoundaryFrame {
 public:
  BoundaryFrame(const Vec3& normal, const Vec3& eta, double tau);

  const Vec3& normal() const { return normal_; }
  const Vec3& eta() const { return eta_; }
  double tau() const { return tau_; }

  BoundaryFrame with_tau(double tau) const { return {normal_, eta_, tau}; }
  // The frame seen from the other side: nu -> -nu.
  BoundaryFrame flipped() const { return {-normal_, eta_, tau_}; }
  BoundaryFrame scaled(double t) const { return {normal_, t * eta_, t * tau_}; }

 private:
  Vec3 normal_;
  Vec3 eta_;
  double tau_;
};

// Deterministic orthonormal pair spanning the plane orthogonal to `normal`.
// For normal = e3 this is (e1, e2).
std::pair<Vec3, Vec3> tangent_basis(const Vec3& normal);

// Frame with eta = x t1 + y t2 in the tangent basis of `normal`.
BoundaryFrame frame_from_tangential(const Vec3& normal, double x, double y, double tau);

// A(s) = A0 s^2 + (A1 + A1^*) s + A2 with A0 > 0 and A2 Hermitian.
struct QuadraticMatrixPolynomial {
  CMat3 a0;
  CMat3 a1;
  CMat3 a2;

  CMat3 evaluate(cplx s) const { return a0 * (s * s) + (a1 + a1.adjoint()) * s + a2; }
  CMat3 derivative(cplx s) const { return a0 * (2.0 * s) + a1 + a1.adjoint(); }
  // Sum of coefficient norms, the unit in which residuals are reported.
  double scale() const;
  // Norm of A(s) bounded by coefficient norms: |A0||s|^2 + 2|A1||s| + |A2|.
  double scale_at(cplx s) const;
  // Throws DegenerateA0 or InvalidArgument if the structural invariants fail.
  void validate() const;
};

QuadraticMatrixPolynomial boundary_polynomial(const Material& m, const BoundaryFrame& f);

// First-order linearization; its eigenvalues are the roots of det A(s).
struct StrohMatrix {
  CMat6 s;

  // Block swap K with K S Hermitian.
  static CMat6 swap();
  // A(z)^{-1} = J1 (z - S)^{-1} J2^*, J1 = [I 0], J2 = [0 I].
  CMat3 resolvent(cplx z) const;
};

StrohMatrix stroh(const QuadraticMatrixPolynomial& a);

struct EigenCluster {
  cplx value;
  int algebraic = 0;
  int geometric = 0;
  bool real = false;
  SignType type = SignType::none;
  bool glancing = false;
  bool defective = false;
  // Orthonormal basis of ker A(value), `algebraic` columns for real clusters.
  Eigen::MatrixXcd kernel;
  // Eigenvalues of V^* A'(s) V on that basis (real clusters only).
  Eigen::VectorXd form;
};

struct SpectrumClassification {
  std::vector<cplx> eigenvalues;  // all six, as returned by the Schur form
  std::vector<EigenCluster> clusters;
  double spectral_radius = 0.0;
  bool glancing = false;

  int real_count() const;
  // Whether cluster c lies in the outgoing or incoming half for frequency tau.
  bool selects(const EigenCluster& c, Direction dir, double tau) const;
  // Index of the cluster nearest to z.
  int nearest(cplx z) const;
};

SpectrumClassification classify_spectrum(const QuadraticMatrixPolynomial& a, const Tolerances& tol = {});

struct FactorizationDiagnostics {
  double solvency_residual = 0.0;  // |A0 Q^2 + (A1 + A1^*) Q + A2| / scale
  double sharp_residual = 0.0;     // |Q# A0 + A0 Q + A1 + A1^*| / scale
  double spectral_gap = 0.0;       // min distance spec(Q) to spec(Q#)
  double j_condition = 0.0;
};

struct SpectralFactorization {
  CMat3 q;
  CMat3 q_sharp;
  std::vector<cplx> sigma;  // spec(Q) with multiplicity
  std::vector<cplx> sigma_sharp;
  Direction direction = Direction::outgoing;
  double tau = 0.0;
  SpectrumClassification spectrum;
  FactorizationDiagnostics diagnostics;
};

// A(s) = (s - Q#) A0 (s - Q) with spec(Q) the outgoing or incoming half.
SpectralFactorization factorize(const QuadraticMatrixPolynomial& a, Direction dir, double tau,
                                const Tolerances& tol = {});

// max over the given points of |A(s) - (s - Q#) A0 (s - Q)| / scale_at(s).
double factorization_residual(const QuadraticMatrixPolynomial& a, const SpectralFactorization& f,
                              const std::vector<cplx>& points);

struct Circle {
  cplx center;
  double radius;
};

struct ContourCheck {
  double residual = 0.0;
  bool empty = false;  // no eigenvalue enclosed; residual is vacuous
  int nodes = 0;       // per circle, after doubling
  double convergence = 0.0;  // relative change at the last doubling
  double c0_norm = 0.0;
  double c1_norm = 0.0;
};

// Relative residual |Q C0 - C1| of C0 = contour integral of A^{-1}, C1 = of s A^{-1},
// summed over the circles by the trapezoidal rule with node doubling.
ContourCheck contour_root_check(const QuadraticMatrixPolynomial& a, const CMat3& q,
                                const std::vector<Circle>& circles, int n_nodes = 256,
                                const Tolerances& tol = {});

// One circle per non-real cluster of sigma, radius half the distance to the
// nearest other eigenvalue of A.
std::vector<Circle> enclosing_circles(const SpectralFactorization& f);

// Residue of A(z)^{-1} at a semisimple real eigenvalue, by contour quadrature.
CMat3 residue(const QuadraticMatrixPolynomial& a, double s, const Tolerances& tol = {});

}  // namespace stroh
