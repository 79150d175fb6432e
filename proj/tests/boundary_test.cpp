#include <gtest/gtest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "stroh/boundary.hpp"
#include "stroh/error.hpp"
#include "stroh/impedance.hpp"
#include "support.hpp"

using namespace stroh;
using support::rel;

namespace {

const Vec3 e1 = Vec3::UnitX();
const Vec3 e3 = Vec3::UnitZ();

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Classify, IsotropicRegions) {
  // lambda = 2, mu = 1, rho = 2: c_s^2 = 0.5, c_p^2 = 2.
  const Material m = make_isotropic(2.0, 1.0, 2.0);
  for (double sign : {-1.0, 1.0}) {
    EXPECT_EQ(classify_boundary(m, BoundaryFrame(e3, e1, sign * 1.6)).label, Region::hyperbolic);
    EXPECT_EQ(classify_boundary(m, BoundaryFrame(e3, e1, sign * 1.0)).label, Region::mixed);
    EXPECT_EQ(classify_boundary(m, BoundaryFrame(e3, e1, sign * 0.5)).label, Region::elliptic);
  }
  const RegionClass g = classify_boundary(m, BoundaryFrame(e3, e1, std::sqrt(0.5)));
  EXPECT_EQ(g.label, Region::glancing);
}

TEST(Classify, ScaleInvariant) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> t(-3.0, 3.0);
  for (int k = 0; k < 30; ++k) {
    const Material m = support::random_ti(rng);
    const BoundaryFrame f = support::random_frame(rng, t(rng));
    const Region r = classify_boundary(m, f).label;
    for (double s : {0.1, 7.0}) EXPECT_EQ(classify_boundary(m, f.scaled(s)).label, r);
  }
}

TEST(Classify, Interface) {
  const Material plus = support::poisson();
  const Material minus = make_isotropic(2.0, 1.5, 2.0);  // c_s = 0.866, c_p = 1.658
  const RegionClass hyp = classify_interface(plus, minus, BoundaryFrame(e3, e1, -3.0));
  EXPECT_EQ(hyp.label, Region::hyperbolic);
  EXPECT_EQ(hyp.dim_c_intersection, 0);
  const RegionClass ell = classify_interface(plus, minus, BoundaryFrame(e3, e1, -0.5));
  EXPECT_EQ(ell.label, Region::elliptic);
  EXPECT_EQ(ell.dim_c_plus, 3);
  EXPECT_EQ(ell.dim_c_minus, 3);
  // Plus mixed, minus hyperbolic: the evanescent spaces meet trivially.
  const RegionClass a = classify_interface(plus, minus, BoundaryFrame(e3, e1, -1.7));
  EXPECT_EQ(a.dim_c_plus, 1);
  EXPECT_EQ(a.dim_c_minus, 0);
  EXPECT_EQ(a.label, Region::hyperbolic);
  // Plus elliptic, minus mixed: the intersection is the minus evanescent line.
  const RegionClass b = classify_interface(plus, minus, BoundaryFrame(e3, e1, -0.95));
  EXPECT_EQ(b.dim_c_plus, 3);
  EXPECT_EQ(b.dim_c_minus, 1);
  EXPECT_EQ(b.dim_c_intersection, 1);
  EXPECT_EQ(b.label, Region::mixed);
}

TEST(ClosedForm, MatchesFactorization) {
  const double l = 1.3, mu = 0.9, rho = 1.2;
  const Material m = make_isotropic(l, mu, rho);
  std::mt19937 rng(2);
  int n = 0;
  for (int k = 0; k < 60; ++k) {
    const BoundaryFrame f = support::random_frame(rng, 1.0);
    const double c = f.eta().norm() * std::sqrt(mu / rho);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    const BoundaryFrame g = f.with_tau((k % 2 ? -1.0 : 1.0) * c * u(rng));
    if (classify_boundary(m, g).label == Region::glancing) continue;
    const CMat3 closed = iso_impedance_closed_form(l, mu, rho, g).z;
    EXPECT_LE(rel(closed, compute_impedance(m, g, Direction::outgoing).z), 1e-10);
    ++n;
  }
  EXPECT_GT(n, 50);
}

TEST(ClosedForm, ShEntryAndNormalIncidence) {
  const double l = 1.3, mu = 0.9, rho = 1.2, tau = -2.0;
  const BoundaryFrame f(e3, 0.5 * e1, tau);
  const CMat3 z = iso_impedance_closed_form(l, mu, rho, f).z;
  const double ss = std::sqrt(rho * tau * tau / mu - 0.25);
  const CVec3 zeta = Vec3::UnitY().cast<cplx>();
  EXPECT_LE(std::abs(inner(zeta, CVec3(kI * z * zeta)) - cplx(ss * mu, 0.0)), 1e-12);

  const BoundaryFrame n(e3, Vec3::Zero(), tau);
  const double s_s = std::abs(tau) * std::sqrt(rho / mu);
  const double s_p = std::abs(tau) * std::sqrt(rho / (l + 2 * mu));
  const CMat3 zn = iso_impedance_closed_form(l, mu, rho, n).z;
  const CMat3 expected = -kI * Eigen::Vector3cd(s_s * mu, s_s * mu, s_p * (l + 2 * mu)).asDiagonal();
  EXPECT_LE((zn - expected).norm(), 1e-12 * expected.norm());
}

TEST(ClosedForm, GlancingRejected) {
  EXPECT_EQ(kind_of([] { iso_impedance_closed_form(1.0, 1.0, 1.0, BoundaryFrame(e3, e1, -1.0)); }),
            ErrorKind::GlancingSpectrum);
}

TEST(TauLimit, IsotropicAndHomogeneous) {
  const Material m = make_isotropic(1.0, 1.0, 1.0);
  EXPECT_NEAR(tau_limit(m, e3, e1), 1.0, 1e-9);
  const Material n = make_isotropic(1.0, 2.0, 0.5);
  EXPECT_NEAR(tau_limit(n, e3, e1), 2.0, 2e-9);
}

TEST(TauLimit, TransverseIsotropyMatchesScan) {
  std::mt19937 rng(3);
  for (int k = 0; k < 3; ++k) {
    const Material m = support::random_ti(rng);
    const BoundaryFrame f = support::random_frame(rng, 1.0);
    const Vec3 eta = f.eta().normalized();
    const double t = tau_limit(m, f.normal(), eta);
    // Dense scan: last elliptic sample below the limit, first non-elliptic above.
    const double step = 1e-3 * t;
    EXPECT_EQ(classify_boundary(m, BoundaryFrame(f.normal(), eta, t - step)).label, Region::elliptic);
    EXPECT_NE(classify_boundary(m, BoundaryFrame(f.normal(), eta, t + step)).label, Region::elliptic);
    for (int i = 1; i < 50; ++i) {
      EXPECT_EQ(classify_boundary(m, BoundaryFrame(f.normal(), eta, t * i / 50.0)).label, Region::elliptic);
    }
  }
}

TEST(Rayleigh, PoissonSolid) {
  const SurfaceWave w = rayleigh_speed(support::poisson(), e3, e1);
  EXPECT_NEAR(w.speed, 0.91940, 1e-4);
  EXPECT_NEAR(w.speed, support::rayleigh_secular_oracle(1.0 / std::sqrt(3.0)), 1e-8);
  EXPECT_LE(w.det_z, 1e-8);
  EXPECT_LE(std::abs(w.lambda_min), 1e-8);
  EXPECT_GT(w.tau, 0.0);
  EXPECT_LT(w.tau, w.tau_eta);
}

TEST(Rayleigh, ExactlyOneEigenvalueCrosses) {
  const Material m = support::poisson();
  const SurfaceWave w = rayleigh_speed(m, e3, e1);
  auto eig = [&](double tau) {
    const CMat3 z = compute_impedance(m, BoundaryFrame(e3, e1, tau), Direction::outgoing).z;
    return Eigen::SelfAdjointEigenSolver<CMat3>(CMat3(0.5 * (z + z.adjoint()))).eigenvalues();
  };
  const auto below = eig(w.tau * 0.99);
  const auto above = eig(w.tau * 1.005);
  EXPECT_GT(below.minCoeff(), 0.0);
  EXPECT_LT(above(0), 0.0);
  EXPECT_GT(above(1), 0.0);
  EXPECT_GT(eig(1e-6).minCoeff(), 0.0);
}

TEST(Rayleigh, IsotropicFamilyMatchesSecularEquation) {
  for (double l : {0.0, 0.5, 2.0, 5.0}) {
    const Material m = make_isotropic(l, 1.0, 1.0);
    const SurfaceWave w = rayleigh_speed(m, e3, e1);
    EXPECT_NEAR(w.speed, support::rayleigh_secular_oracle(1.0 / std::sqrt(l + 2.0)), 1e-8);
  }
}

TEST(Rayleigh, LambdaMinDecreasing) {
  const Material m = make_isotropic(1.5, 0.8, 1.2);
  const double t = tau_limit(m, e3, e1);
  double prev = impedance_lambda_min(m, BoundaryFrame(e3, e1, 1e-3 * t));
  for (int i = 1; i < 50; ++i) {
    const double cur = impedance_lambda_min(m, BoundaryFrame(e3, e1, t * (0.02 + 0.97 * i / 49.0)));
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

TEST(Stoneley, IdenticalMaterialsHaveNoWave) {
  const Material m = support::poisson();
  EXPECT_EQ(kind_of([&] { stoneley_speed(m, m, e3, e1); }), ErrorKind::NoSurfaceWave);
}

TEST(Stoneley, LightMinusSideApproachesRayleigh) {
  const Material plus = support::poisson();
  const Material minus(plus.name, plus.stiffness.scaled(1e-3), 1e-3);
  const SurfaceWave r = rayleigh_speed(plus, e3, e1);
  const SurfaceWave s = stoneley_speed(plus, minus, e3, e1);
  EXPECT_LE(std::abs(s.tau - r.tau), 1e-2 * r.tau);
}

TEST(Stoneley, SumHermitianInEllipticRegion) {
  const Material plus = support::poisson();
  const Material minus = make_isotropic(2.0, 1.5, 2.0);
  for (double tau : {0.2, 0.5, 0.8}) {
    const BoundaryFrame f(e3, e1, tau);
    const CMat3 sum = compute_impedance(plus, f, Direction::outgoing).z +
                      compute_impedance(minus, f.flipped(), Direction::outgoing).z;
    EXPECT_LE((sum - sum.adjoint()).norm(), 1e-9 * sum.norm());
  }
}

TEST(Margin, IsotropicBoundaryAndInterface) {
  const Material m = support::poisson();
  const Material other = make_isotropic(2.0, 1.5, 2.0);
  std::vector<BoundaryFrame> hyp, mix;
  for (int i = 0; i < 100; ++i) {
    const double phi = 2.0 * M_PI * i / 100.0;
    const Vec3 eta(std::cos(phi), std::sin(phi), 0.0);
    hyp.emplace_back(e3, eta, -(1.8 + 1.5 * (i % 10) / 10.0));
    mix.emplace_back(e3, eta, -(1.05 + 0.6 * (i % 10) / 10.0));
  }
  for (const auto* grid : {&hyp, &mix}) {
    const MarginReport b = ellipticity_margin(m, *grid);
    EXPECT_EQ(b.included, 100);
    EXPECT_GT(b.margin, 1e-3);
    const MarginReport i = ellipticity_margin(m, other, *grid);
    EXPECT_GT(i.included, 0);
    EXPECT_GT(i.margin, 1e-3);
  }
}

TEST(Margin, EllipticGridThroughRayleighPoint) {
  const Material m = support::poisson();
  const SurfaceWave w = rayleigh_speed(m, e3, e1);
  std::vector<BoundaryFrame> grid;
  for (int i = 1; i <= 40; ++i) grid.emplace_back(e3, e1, 0.95 * i / 40.0);
  grid.emplace_back(e3, e1, w.tau);
  const MarginReport r = ellipticity_margin(m, grid, MarginOptions{true, 2});
  EXPECT_LE(r.margin, 1e-6);
  const MarginReport skipped = ellipticity_margin(m, grid);
  EXPECT_EQ(skipped.included, 0);
}
