#pragma once

#include <complex>

#include <Eigen/Core>

namespace stroh {

using cplx = std::complex<double>;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;
using CVec6 = Eigen::Matrix<cplx, 6, 1>;
using CMat6 = Eigen::Matrix<cplx, 6, 6>;

inline constexpr cplx kI{0.0, 1.0};

// Which half of the spectrum a factorization selects.
enum class Direction { outgoing, incoming };

// Sign characteristic of a real eigenvalue: sign of (A'(s)v|v) on ker A(s).
enum class SignType { none, positive, negative, indefinite };

// Side of an interface. The conormal of a frame points into the plus side.
enum class Side { plus, minus };

// Boundary region by the dimension of the evanescent subspace E_c.
enum class Region { hyperbolic, mixed, elliptic, glancing };

const char* to_string(Direction d);
const char* to_string(SignType t);
const char* to_string(Side s);
const char* to_string(Region r);

// Inner product linear in the first slot, conjugate linear in the second.
template <typename A, typename B>
cplx inner(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  return y.dot(x);
}

}  // namespace stroh
