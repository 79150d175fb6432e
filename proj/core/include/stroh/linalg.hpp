#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "stroh/types.hpp"

// Small dense helpers shared by the spectral modules.
namespace stroh::linalg {

using MatrixXc = Eigen::MatrixXcd;

// Complex Schur form A = U T U^* with the eigenvalues accepted by `select`
// moved to the leading `selected` diagonal positions.
struct OrderedSchur {
  MatrixXc unitary;
  MatrixXc triangular;
  int selected = 0;
};

OrderedSchur ordered_schur(const MatrixXc& a, const std::function<bool(cplx)>& select);

// Exchange diagonal entries k and k+1 of an upper triangular T by a unitary
// rotation, updating the Schur vectors U accordingly.
void swap_schur_pair(MatrixXc& t, MatrixXc& u, Eigen::Index k);

// Solves A X - X B = C. Dimensions here never exceed 6, so the Kronecker form is used.
MatrixXc solve_sylvester(const MatrixXc& a, const MatrixXc& b, const MatrixXc& c);

// Riesz projector onto the generalized eigenspace of the selected eigenvalues,
// along the complementary invariant subspace.
MatrixXc spectral_projector(const MatrixXc& a, const std::function<bool(cplx)>& select);

// Groups values whose single-linkage distance is below `tol`. Groups are
// ordered by their first member in the input order.
std::vector<std::vector<int>> cluster(const std::vector<cplx>& values, double tol);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1].
Quadrature gauss_legendre(int n);

// Spectral 2-norm condition number.
double condition_number(const MatrixXc& a);

// Largest singular value.
double spectral_norm(const MatrixXc& a);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to preallocated slots so ordering stays deterministic.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace stroh::linalg
