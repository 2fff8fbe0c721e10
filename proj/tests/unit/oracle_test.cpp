#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <numeric>
#include <random>

#include "hyperpinn/bvp/point_sets.hpp"
#include "hyperpinn/loss/objective.hpp"
#include "hyperpinn/mat/materials.hpp"
#include "hyperpinn/oracle/oracle.hpp"
#include "hyperpinn/oracle/verification.hpp"

namespace oracle = hyperpinn::oracle;
namespace mat = hyperpinn::mat;
namespace bvp = hyperpinn::bvp;
namespace loss = hyperpinn::loss;
namespace net = hyperpinn::net;
using M3 = hyperpinn::ad::Mat3<double>;

namespace {

const mat::NeoHookean kNh{577.0, 385.0};

M3 diag(double a, double b, double c) { return {a, 0, 0, 0, b, 0, 0, 0, c}; }

}  // namespace

TEST(SimpleShear, ZeroShearIsStressFree) {
  const auto s = oracle::simple_shear_oracle(0.0, kNh);
  for (double v : s.S0) EXPECT_EQ(v, 0.0);
}

TEST(SimpleShear, ClosedForm) {
  const auto s = oracle::simple_shear_oracle(0.5, kNh);
  EXPECT_NEAR(s.S0[1], 192.5, 1e-12);
  EXPECT_NEAR(s.S0[0], 96.25, 1e-12);
  const auto st = mat::deformation_gradient(M3{0, 0.5, 0, 0, 0, 0, 0, 0, 0});
  const M3 S = mat::cauchy(mat::first_piola(kNh, st), st.F);
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(S[k], s.S0[k], 1e-12);
  const auto u = s.displacement(std::array<double, 3>{0.2, 0.6, 0.1});
  EXPECT_DOUBLE_EQ(u[0], 0.3);
}

TEST(Uniaxial, ReferenceStretch) {
  const auto s = oracle::uniaxial_oracle(1.0, kNh);
  EXPECT_NEAR(s.F0[4], 1.0, 1e-12);
  for (double v : s.P0) EXPECT_NEAR(v, 0.0, 1e-10);
}

TEST(Uniaxial, LateralStressVanishes) {
  const auto s = oracle::uniaxial_oracle(1.2, kNh);
  EXPECT_NEAR(s.F0[4], 0.945650720271614760320621958485, 1e-10);
  EXPECT_EQ(s.F0[4], s.F0[8]);
  EXPECT_LE(std::abs(s.P0[4]), 1e-10);
  EXPECT_LE(std::abs(s.P0[8]), 1e-10);
  EXPECT_EQ(s.P0[4], s.P0[8]);
  EXPECT_NEAR(s.P0[0], 175.093096142636534877943855271, 1e-8);
}

TEST(Uniaxial, LateralStretchDecreasesWithStretch) {
  double prev = 10.0;
  for (double l = 0.8; l <= 1.5; l += 0.1) {
    const double lt = oracle::uniaxial_oracle(l, kNh).F0[4];
    EXPECT_LT(lt, prev);
    prev = lt;
  }
}

TEST(Uniaxial, LopezPamiesMaterial) {
  const mat::LopezPamies lp{{{1.0, 100.0}, {-2.0, 50.0}}, 100.0};
  const auto s = oracle::uniaxial_oracle(1.1, lp);
  EXPECT_LE(std::abs(s.P0[4]), 1e-10);
  EXPECT_GT(s.P0[0], 0.0);
}

TEST(L2Error, IdentityAndScaling) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0, 1);
  Eigen::Matrix3Xd u = Eigen::Matrix3Xd::NullaryExpr(3, 20, [&] { return n(rng); });
  std::vector<double> w(20);
  for (double& v : w) v = 0.1 + std::abs(n(rng));
  EXPECT_EQ(oracle::l2_error(u, u, w), 0.0);
  EXPECT_NEAR(oracle::l2_error(1.1 * u, u, w), 0.1, 1e-12);
}

TEST(L2Error, PermutationInvariant) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0, 1);
  Eigen::Matrix3Xd a = Eigen::Matrix3Xd::NullaryExpr(3, 12, [&] { return n(rng); });
  Eigen::Matrix3Xd b = Eigen::Matrix3Xd::NullaryExpr(3, 12, [&] { return n(rng); });
  std::vector<double> w(12, 1.0);
  for (int k = 0; k < 12; ++k) w[k] = 1.0 + k;
  std::vector<int> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::Matrix3Xd ap(3, 12), bp(3, 12);
  std::vector<double> wp(12);
  for (int k = 0; k < 12; ++k) {
    ap.col(k) = a.col(perm[k]);
    bp.col(k) = b.col(perm[k]);
    wp[k] = w[perm[k]];
  }
  EXPECT_NEAR(oracle::l2_error(a, b, w), oracle::l2_error(ap, bp, wp), 1e-14);
}

TEST(L2Error, Errors) {
  const Eigen::Matrix3Xd z = Eigen::Matrix3Xd::Zero(3, 2);
  const std::vector<double> w{1, 1}, w1{1};
  EXPECT_THROW(oracle::l2_error(z, z, w), hyperpinn::ZeroReference);
  EXPECT_THROW(oracle::l2_error(z, Eigen::Matrix3Xd::Ones(3, 2), w1), hyperpinn::LengthMismatch);
}

TEST(AffineProblem, IdentityIsSolvedByZeroNetwork) {
  auto p = oracle::affine_dirichlet_problem(hyperpinn::ad::identity3(), kNh);
  p.domain.counts = {5, 5, 5};
  const net::FieldNetwork nw(net::RffMap::sample(4, 1.0, 0), {8});
  auto phi = nw.initialize(0);
  std::fill(phi.values.begin(), phi.values.end(), 0.0);
  const auto ev = loss::PinnObjective(p, nw).evaluate(phi, {1, 1, 1, 1, 1, 1}, false);
  for (double t : ev.terms) EXPECT_EQ(t, 0.0);
}

TEST(AffineProblem, StretchHasNoInteriorResidual) {
  const M3 F = diag(1.1, 1, 1);
  auto p = oracle::affine_dirichlet_problem(F, kNh);
  p.domain.counts = {5, 5, 5};
  EXPECT_EQ(p.dirichlet.size(), 6u);
  const net::FieldNetwork nw(net::RffMap::sample(4, 1.0, 0), {8}, 385.0);
  auto phi = nw.initialize(0);
  std::fill(phi.values.begin(), phi.values.end(), 0.0);
  const auto exact = oracle::affine_solution(F, kNh);
  const std::size_t b = nw.layout().bias_offset(nw.layout().layers().size() - 1);
  for (int k = 0; k < 9; ++k) phi.values[b + 3 + k] = exact.P0[k] / nw.stress_scale();
  const auto ev = loss::PinnObjective(p, nw).evaluate(phi, {1, 1, 1, 1, 1, 1}, false);
  EXPECT_LE(ev.terms[loss::kInteriorU], 1e-10);
  EXPECT_LE(ev.terms[loss::kConstitutive], 1e-12);
  const auto u = exact.displacement(std::array<double, 3>{0.5, 0.2, 0.9});
  EXPECT_NEAR(u[0], 0.05, 1e-15);
  EXPECT_NEAR(p.exact_displacement({0.5, 0.2, 0.9})[0], 0.05, 1e-15);
}

TEST(AffineProblem, InvertedDataRejected) {
  EXPECT_THROW(oracle::affine_dirichlet_problem(diag(-1, 1, 1), kNh), hyperpinn::InvertedState);
}

TEST(PublishedErrors, Metadata) {
  EXPECT_EQ(std::size(oracle::kPublishedErrors), 6u);
  EXPECT_DOUBLE_EQ(oracle::kPublishedErrors[0].l2_error, 0.034);
}

TEST(Verification, GradientSuitesPass) {
  for (std::uint64_t seed : {0u, 7u}) {
    for (const auto& s : oracle::gradient_suites(seed)) {
      EXPECT_TRUE(s.passed) << s.name << " seed " << seed << ": " << s.max_error << " > "
                            << s.threshold;
    }
  }
}
