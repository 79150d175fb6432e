#include <gtest/gtest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "stroh/error.hpp"
#include "stroh/impedance.hpp"
#include "support.hpp"

using namespace stroh;
using support::rel;

namespace {

const Vec3 e1 = Vec3::UnitX();
const Vec3 e2 = Vec3::UnitY();
const Vec3 e3 = Vec3::UnitZ();

Eigen::Vector3d hermitian_eigenvalues(const CMat3& z) {
  return Eigen::SelfAdjointEigenSolver<CMat3>(CMat3(0.5 * (z + z.adjoint())), Eigen::EigenvaluesOnly).eigenvalues();
}

struct Setup {
  QuadraticMatrixPolynomial a;
  SpectralFactorization f;
  CMat3 z;
};

Setup setup(const Material& m, const BoundaryFrame& frame, Direction d = Direction::outgoing) {
  auto a = boundary_polynomial(m, frame);
  auto f = factorize(a, d, frame.tau());
  CMat3 z = impedance_from_factorization(a, f).z;
  return {a, f, z};
}

}  // namespace

TEST(Impedance, IsotropicShColumn) {
  const double l = 1.2, mu = 0.8, rho = 1.1, tau = -0.4;
  const auto s = setup(make_isotropic(l, mu, rho), BoundaryFrame(e3, e1, tau));
  const cplx ss = kI * std::sqrt(1.0 - rho * tau * tau / mu);
  // zeta = e2 is orthogonal to nu and eta.
  EXPECT_LE((s.z * e2.cast<cplx>() + kI * ss * mu * e2.cast<cplx>()).norm(), 1e-12);
  EXPECT_NEAR(inner(e2.cast<cplx>(), CVec3(s.z * e2.cast<cplx>())).real(), std::abs(ss) * mu, 1e-12);
}

TEST(Impedance, IsotropicPColumn) {
  const double l = 1.2, mu = 0.8, rho = 1.1, tau = -3.0, eta = 0.9;
  const auto s = setup(make_isotropic(l, mu, rho), BoundaryFrame(e3, eta * e1, tau));
  const double sp = std::sqrt(rho * tau * tau / (l + 2 * mu) - eta * eta);
  const CVec3 p = (eta * e1 + sp * e3).cast<cplx>();
  // The paper's column, shifted by the traction-form correction -i mu (eta (x) nu - nu (x) eta).
  const CVec3 paper = ((rho * tau * tau - mu * eta * eta) * e3 + sp * mu * eta * e1).cast<cplx>();
  const Mat3 skew = eta * (e1 * e3.transpose() - e3 * e1.transpose());
  const CVec3 expected = paper + (mu * skew * (eta * e1 + sp * e3)).cast<cplx>();
  EXPECT_LE((kI * s.z * p - expected).norm(), 1e-12 * expected.norm());
}

TEST(Impedance, PositiveDefiniteNearZeroFrequency) {
  std::mt19937 rng(1);
  for (int k = 0; k < 10; ++k) {
    const Material m = support::random_ti(rng);
    const auto s = setup(m, support::random_frame(rng, 1e-4));
    EXPECT_LE((s.z - s.z.adjoint()).norm(), 1e-9 * s.z.norm());
    EXPECT_GT(hermitian_eigenvalues(s.z).minCoeff(), 0.0);
  }
}

TEST(ModeProjectors, Dimensions) {
  const Material m = support::poisson();
  const auto hyp = mode_projectors(setup(m, BoundaryFrame(e3, e1, -3.0)).f);
  EXPECT_EQ(hyp.dim_r, 3);
  EXPECT_EQ(hyp.dim_c, 0);
  const auto ell = mode_projectors(setup(m, BoundaryFrame(e3, e1, -0.5)).f);
  EXPECT_EQ(ell.dim_c, 3);
  EXPECT_LE((ell.pi_c - CMat3::Identity()).norm(), 1e-12);
  const auto mix = mode_projectors(setup(m, BoundaryFrame(e3, e1, -1.5)).f);
  EXPECT_EQ(mix.dim_r, 2);
  EXPECT_EQ(mix.dim_c, 1);
}

TEST(ModeProjectors, AlgebraicInvariants) {
  std::mt19937 rng(2);
  for (Region r : {Region::hyperbolic, Region::mixed}) {
    for (int k = 0; k < 10; ++k) {
      const Material m = support::random_ti(rng);
      const auto frame = support::frame_in_region(m, r, rng);
      ASSERT_TRUE(frame);
      const auto s = setup(m, *frame);
      const auto p = mode_projectors(s.f);
      CMat3 sum = p.pi_c;
      const double qn = s.f.q.norm();
      for (std::size_t i = 0; i < p.modes.size(); ++i) {
        const CMat3& psi = p.modes[i].projector;
        EXPECT_LE((psi * psi - psi).norm(), 1e-9 * psi.norm());
        EXPECT_LE((psi * s.f.q - s.f.q * psi).norm(), 1e-9 * qn);
        for (std::size_t j = 0; j < p.modes.size(); ++j) {
          if (i != j) EXPECT_LE((psi * p.modes[j].projector).norm(), 1e-9);
        }
        sum += psi;
      }
      EXPECT_LE((sum - CMat3::Identity()).norm(), 1e-9);
    }
  }
}

TEST(Flux, Examples) {
  const auto s = setup(support::poisson(), BoundaryFrame(e3, e1, -1.5));
  const auto p = mode_projectors(s.f);
  EXPECT_EQ(flux_form(s.z, -1.5, CVec3::Zero()), 0.0);
  std::mt19937 rng(3);
  for (int k = 0; k < 20; ++k) {
    const CVec3 u = support::random_cvec(rng);
    const CVec3 uc = p.pi_c * u;
    const CVec3 ur = u - uc;
    EXPECT_GT(flux_form(s.z, -1.5, ur), 0.0);
    EXPECT_LE(std::abs(flux_form(s.z, -1.5, uc)), 1e-9 * s.z.norm() * uc.squaredNorm());
  }
}

TEST(Flux, HermitianOnEvanescentSubspace) {
  std::mt19937 rng(4);
  for (Region r : {Region::mixed, Region::elliptic}) {
    for (int k = 0; k < 10; ++k) {
      const Material m = support::random_ti(rng);
      const auto frame = support::frame_in_region(m, r, rng);
      ASSERT_TRUE(frame);
      const auto s = setup(m, *frame);
      EXPECT_LE(hermiticity_on_ec(s.z, mode_projectors(s.f)), 1e-9);
    }
  }
}

TEST(Flux, NonNegativeAndKernelInEvanescent) {
  std::mt19937 rng(5);
  for (Region r : {Region::hyperbolic, Region::mixed}) {
    for (int k = 0; k < 10; ++k) {
      const Material m = support::random_ti(rng);
      const auto frame = support::frame_in_region(m, r, rng);
      ASSERT_TRUE(frame);
      const auto s = setup(m, *frame);
      const double scale = std::abs(frame->tau()) * s.z.norm();
      for (int j = 0; j < 1000; ++j) {
        const CVec3 u = support::random_cvec(rng);
        EXPECT_GE(flux_form(s.z, frame->tau(), u), -1e-9 * scale * u.squaredNorm());
      }
      // Smallest singular value of z on E_r.
      const auto p = mode_projectors(s.f);
      const CMat3 er = CMat3::Identity() - p.pi_c;
      Eigen::JacobiSVD<CMat3> basis(er, Eigen::ComputeFullU);
      const Eigen::MatrixXcd v = basis.matrixU().leftCols(p.dim_r);
      Eigen::JacobiSVD<Eigen::MatrixXcd> sv(s.z * v);
      EXPECT_GT(sv.singularValues().minCoeff(), 1e-6 * s.z.norm());
    }
  }
}

TEST(ModalFlux, Identity) {
  std::mt19937 rng(6);
  for (Region r : {Region::hyperbolic, Region::mixed}) {
    for (int k = 0; k < 10; ++k) {
      const Material m = support::random_ti(rng);
      const auto frame = support::frame_in_region(m, r, rng);
      ASSERT_TRUE(frame);
      const auto s = setup(m, *frame);
      const CVec3 u = support::random_cvec(rng);
      const ModalFlux mf = modal_flux_decomposition(s.a, s.f, u);
      EXPECT_LE(mf.residual, 1e-9);
      EXPECT_NEAR(mf.im_u_zu, inner(u, CVec3(s.z * u)).imag(), 1e-12 * s.z.norm() * u.squaredNorm());
    }
  }
}

TEST(ModalFlux, EvanescentAndSingleMode) {
  const auto s = setup(support::poisson(), BoundaryFrame(e3, e1, -1.5));
  const auto p = mode_projectors(s.f);
  std::mt19937 rng(7);
  const CVec3 uc = p.pi_c * support::random_cvec(rng);
  for (double f : modal_flux_decomposition(s.a, s.f, uc).flux) EXPECT_LE(std::abs(f), 1e-12);

  const RealMode& mode = p.modes.front();
  const CVec3 u = mode.projector * support::random_cvec(rng);
  const ModalFlux mf = modal_flux_decomposition(s.a, s.f, u);
  int nonzero = 0;
  for (double f : mf.flux) nonzero += std::abs(f) > 1e-12;
  EXPECT_EQ(nonzero, 1);
  EXPECT_NEAR(mf.sum, inner(u, CVec3(s.z * u)).imag(), 1e-10);
}

TEST(BarnettLothe, MatchesFactorization) {
  std::mt19937 rng(8);
  for (int k = 0; k < 10; ++k) {
    const Material m = k % 2 ? support::random_ti(rng) : support::random_isotropic(rng);
    const auto frame = support::frame_in_region(m, Region::elliptic, rng);
    ASSERT_TRUE(frame);
    const auto s = setup(m, *frame);
    const BarnettLothe bl = barnett_lothe_impedance(s.a, frame->tau());
    EXPECT_LE(rel(bl.impedance.z, s.z), 1e-6);
    EXPECT_GT(hermitian_eigenvalues(bl.re_z).minCoeff(), 0.0);
    // Real coefficients: at least two positive eigenvalues.
    Eigen::ComplexEigenSolver<CMat3> es(bl.impedance.z, false);
    int positive = 0;
    for (int i = 0; i < 3; ++i) positive += es.eigenvalues()(i).real() > 0.0;
    EXPECT_GE(positive, 2);
  }
}

TEST(BarnettLothe, RejectsRealSpectrum) {
  const auto a = boundary_polynomial(support::poisson(), BoundaryFrame(e3, e1, -3.0));
  try {
    barnett_lothe_impedance(a, -3.0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RealSpectrumPresent);
  }
}

TEST(TauDerivative, NegativeDefiniteAndMatchesDifference) {
  std::mt19937 rng(9);
  for (int k = 0; k < 10; ++k) {
    const Material m = support::random_ti(rng);
    const auto frame = support::frame_in_region(m, Region::elliptic, rng);
    ASSERT_TRUE(frame);
    const CMat3 zd = impedance_tau_derivative(m, *frame);
    EXPECT_LE((zd - zd.adjoint()).norm(), 1e-12 * zd.norm());
    EXPECT_LT(hermitian_eigenvalues(zd).maxCoeff(), 0.0);
    EXPECT_LE(rel(zd, impedance_tau_derivative_fd(m, *frame)), 1e-5);
  }
}

TEST(TauDerivative, ZeroRightSide) {
  const auto s = setup(support::poisson(), BoundaryFrame(e3, e1, -0.5));
  EXPECT_EQ(impedance_tau_derivative(s.f, CMat3::Zero()), CMat3::Zero());
}

TEST(Impedance, OutgoingIncomingPairing) {
  std::mt19937 rng(10);
  for (Region r : {Region::hyperbolic, Region::mixed, Region::elliptic}) {
    const Material m = support::random_ti(rng);
    const auto frame = support::frame_in_region(m, r, rng);
    ASSERT_TRUE(frame);
    const auto out = setup(m, *frame, Direction::outgoing);
    const auto in = setup(m, *frame, Direction::incoming);
    EXPECT_LE((in.f.q_sharp - out.f.q.adjoint()).norm(), 1e-9 * out.f.q.norm());
    EXPECT_LE((out.f.q_sharp - in.f.q.adjoint()).norm(), 1e-9 * out.f.q.norm());
  }
}
