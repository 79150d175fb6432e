#include "stroh/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "stroh/error.hpp"

namespace stroh::linalg {

namespace {

// Plane rotation [c s; -conj(s) c] with [c s; -conj(s) c] [f; g] = [r; 0].
void make_rotation(cplx f, cplx g, double& c, cplx& s) {
  const double af = std::abs(f);
  const double ag = std::abs(g);
  if (ag == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (af == 0.0) {
    c = 0.0;
    s = std::conj(g) / ag;
    return;
  }
  const double norm = std::hypot(af, ag);
  c = af / norm;
  s = (f / af) * std::conj(g) / norm;
}

}  // namespace

void swap_schur_pair(MatrixXc& t, MatrixXc& u, Eigen::Index k) {
  const Eigen::Index n = t.rows();
  const cplx t11 = t(k, k);
  const cplx t22 = t(k + 1, k + 1);
  double c = 1.0;
  cplx s = 0.0;
  make_rotation(t(k, k + 1), t22 - t11, c, s);

  // rows k, k+1 to the right of the 2x2 block
  for (Eigen::Index j = k + 2; j < n; ++j) {
    const cplx x = t(k, j);
    const cplx y = t(k + 1, j);
    t(k, j) = c * x + s * y;
    t(k + 1, j) = c * y - std::conj(s) * x;
  }
  // columns k, k+1 above the block, rotated with conj(s)
  for (Eigen::Index i = 0; i < k; ++i) {
    const cplx x = t(i, k);
    const cplx y = t(i, k + 1);
    t(i, k) = c * x + std::conj(s) * y;
    t(i, k + 1) = c * y - s * x;
  }
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx x = u(i, k);
    const cplx y = u(i, k + 1);
    u(i, k) = c * x + std::conj(s) * y;
    u(i, k + 1) = c * y - s * x;
  }
}

OrderedSchur ordered_schur(const MatrixXc& a, const std::function<bool(cplx)>& select) {
  Eigen::ComplexSchur<MatrixXc> schur(a, true);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidArgument, "complex Schur decomposition did not converge");
  }
  OrderedSchur out;
  out.triangular = schur.matrixT();
  out.unitary = schur.matrixU();
  const Eigen::Index n = a.rows();

  // Stable bubble: each selected eigenvalue moves up past unselected ones.
  int placed = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!select(out.triangular(j, j))) continue;
    for (Eigen::Index k = j - 1; k >= placed; --k) {
      swap_schur_pair(out.triangular, out.unitary, k);
    }
    ++placed;
  }
  // Rotations leave round-off below the diagonal; the form is triangular by construction.
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) out.triangular(i, j) = 0.0;
  }
  out.selected = placed;
  return out;
}

MatrixXc solve_sylvester(const MatrixXc& a, const MatrixXc& b, const MatrixXc& c) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = b.rows();
  // vec(A X - X B) = (I_n (x) A - B^T (x) I_m) vec(X), column-major vec.
  MatrixXc k = MatrixXc::Zero(m * n, m * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k.block(j * m, j * m, m, m) += a;
    for (Eigen::Index l = 0; l < n; ++l) {
      k.block(j * m, l * m, m, m) -= b(l, j) * MatrixXc::Identity(m, m);
    }
  }
  const Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(c.data(), m * n);
  const Eigen::VectorXcd x = k.fullPivLu().solve(rhs);
  return Eigen::Map<const MatrixXc>(x.data(), m, n);
}

MatrixXc spectral_projector(const MatrixXc& a, const std::function<bool(cplx)>& select) {
  const Eigen::Index n = a.rows();
  const OrderedSchur s = ordered_schur(a, select);
  const Eigen::Index k = s.selected;
  if (k == 0) return MatrixXc::Zero(n, n);
  if (k == n) return MatrixXc::Identity(n, n);
  const MatrixXc t11 = s.triangular.topLeftCorner(k, k);
  const MatrixXc t12 = s.triangular.topRightCorner(k, n - k);
  const MatrixXc t22 = s.triangular.bottomRightCorner(n - k, n - k);
  // T11 Y - Y T22 = -T12 block-diagonalizes T; the projector is [I -Y; 0 0].
  const MatrixXc y = solve_sylvester(t11, t22, -t12);
  MatrixXc p = MatrixXc::Zero(n, n);
  p.topLeftCorner(k, k).setIdentity();
  p.topRightCorner(k, n - k) = -y;
  return s.unitary * p * s.unitary.adjoint();
}

std::vector<std::vector<int>> cluster(const std::vector<cplx>& values, double tol) {
  const int n = static_cast<int>(values.size());
  std::vector<int> label(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = next;
    std::vector<int> stack{i};
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      for (int q = 0; q < n; ++q) {
        if (label[q] < 0 && std::abs(values[q] - values[p]) <= tol) {
          label[q] = next;
          stack.push_back(q);
        }
      }
    }
    ++next;
  }
  std::vector<std::vector<int>> groups(next);
  for (int i = 0; i < n; ++i) groups[label[i]].push_back(i);
  return groups;
}

Quadrature gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre rule needs n >= 1");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) q.nodes[n / 2] = 0.0;
  return q;
}

double condition_number(const MatrixXc& a) {
  Eigen::JacobiSVD<MatrixXc> svd(a);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

double spectral_norm(const MatrixXc& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXc> svd(a);
  return svd.singularValues()(0);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace stroh::linalg
