#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hyperpinn/ad/fd_check.hpp"
#include "hyperpinn/ad/jet.hpp"
#include "hyperpinn/mat/materials.hpp"

namespace ad = hyperpinn::ad;
namespace mat = hyperpinn::mat;
using M3 = ad::Mat3<double>;

namespace {

const mat::NeoHookean kNh{577.0, 385.0};
const mat::LopezPamies kLp{{{1.0, 100.0}, {-2.0, 50.0}}, 100.0};

mat::DeformationState<double> state_of(const M3& F) {
  M3 g = F;
  for (int i = 0; i < 3; ++i) g[4 * i] -= 1.0;
  return mat::deformation_gradient(g);
}

M3 diag(double a, double b, double c) { return {a, 0, 0, 0, b, 0, 0, 0, c}; }

M3 random_near_identity(std::mt19937_64& rng, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  for (;;) {
    M3 F = ad::identity3();
    for (double& v : F) v += u(rng);
    if (ad::det(F) > 0.2) return F;
  }
}

M3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double q[4];
  double norm = 0.0;
  for (double& v : q) {
    v = n(rng);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  const double w = q[0] / norm, x = q[1] / norm, y = q[2] / norm, z = q[3] / norm;
  return {1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
          2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
          2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y)};
}

template <class Law>
double max_fd_error(const Law& law, std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const M3 F = random_near_identity(rng, 0.3);
    const M3 P = mat::first_piola(law, state_of(F));
    auto psi = [&](std::span<const double> f) {
      M3 G;
      std::copy(f.begin(), f.end(), G.begin());
      return mat::strain_energy(law, state_of(G));
    };
    double pmax = 0.0;
    for (double v : P) pmax = std::max(pmax, std::abs(v));
    const auto r = ad::fd_check(psi, P, F, 1e-6, 1e-3 * pmax);
    worst = std::max(worst, r.max_relative_error);
  }
  return worst;
}

}  // namespace

TEST(Kinematics, UndeformedState) {
  const auto s = mat::deformation_gradient(M3{});
  EXPECT_EQ(s.J, 1.0);
  EXPECT_EQ(s.I1, 3.0);
  for (int k = 0; k < 9; ++k) EXPECT_EQ(s.F[k], ad::identity3()[k]);
}

TEST(Kinematics, SimpleShear) {
  const double g = 0.7;
  const auto s = mat::deformation_gradient(M3{0, g, 0, 0, 0, 0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(s.J, 1.0);
  EXPECT_DOUBLE_EQ(s.I1, 3.0 + g * g);
}

TEST(Kinematics, InvertedStateThrows) {
  EXPECT_THROW(mat::deformation_gradient(diag(-1, 0, 0)), hyperpinn::InvertedState);
  try {
    mat::deformation_gradient(diag(-1.5, 0, 0));
  } catch (const hyperpinn::InvertedState& e) {
    EXPECT_EQ(e.point_index(), 0);
  }
}

TEST(Kinematics, NearInversionHookFires) {
  double seen = -1.0;
  mat::set_near_inversion_hook([&](double j, long) { seen = j; });
  mat::deformation_gradient(diag(-0.98, 0, 0));
  mat::set_near_inversion_hook({});
  EXPECT_NEAR(seen, 0.02, 1e-14);
}

TEST(NeoHookean, ZeroAtIdentity) {
  const auto s = state_of(ad::identity3());
  EXPECT_EQ(mat::strain_energy(kNh, s), 0.0);
  for (double v : mat::first_piola(kNh, s)) EXPECT_EQ(v, 0.0);
}

TEST(NeoHookean, UniaxialStretchValue) {
  // 1/2 577 ln(2)^2 - 385 ln 2 + 385 * 3/2, evaluated to 30 digits.
  const double psi = mat::strain_energy(kNh, state_of(diag(2, 1, 1)));
  EXPECT_NEAR(psi, 449.249029999822166890824712084, 1e-11);
}

TEST(NeoHookean, StressIsEnergyGradient) { EXPECT_LE(max_fd_error(kNh, 1, 100), 1e-6); }

TEST(NeoHookean, FrameIndifference) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const M3 F = random_near_identity(rng, 0.3);
    const M3 QF = ad::matmul(random_rotation(rng), F);
    const double a = mat::strain_energy(kNh, state_of(F));
    const double b = mat::strain_energy(kNh, state_of(QF));
    EXPECT_LE(std::abs(a - b), 1e-10 * (1 + std::abs(a)));
  }
}

TEST(NeoHookean, SimpleShearCauchy) {
  const double gamma = 0.5;
  const M3 F{1, gamma, 0, 0, 1, 0, 0, 0, 1};
  const M3 S = mat::cauchy(mat::first_piola(kNh, state_of(F)), F);
  EXPECT_NEAR(S[1], 385.0 * gamma, 1e-12);
  EXPECT_NEAR(S[3], 385.0 * gamma, 1e-12);
  // S = mu (F F^T - I)
  EXPECT_NEAR(S[0], 385.0 * gamma * gamma, 1e-12);
  EXPECT_NEAR(S[4], 0.0, 1e-12);
}

TEST(NeoHookean, JetAndDoublePathsAgree) {
  ad::Tape tape;
  const M3 F{1.1, 0.2, 0.0, -0.1, 0.95, 0.05, 0.0, 0.1, 1.02};
  ad::Mat3<ad::Jet> g;
  for (int k = 0; k < 9; ++k) {
    g[k] = ad::Jet::constant(tape, ad::Array::Constant(1, 1, F[k] - (k % 4 == 0 ? 1.0 : 0.0)), 0);
  }
  const auto js = mat::deformation_gradient(g);
  const auto ds = state_of(F);
  EXPECT_NEAR(js.J.value().value()(0, 0), ds.J, 1e-15);
  const auto P = mat::first_piola(kNh, js);
  const auto Pd = mat::first_piola(kNh, ds);
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(P[k].value().value()(0, 0), Pd[k], 1e-12);
}

TEST(LopezPamies, ZeroAtIdentity) {
  const auto s = state_of(ad::identity3());
  EXPECT_NEAR(mat::strain_energy(kLp, s), 0.0, 1e-13);
  for (double v : mat::first_piola(kLp, s)) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(LopezPamies, UniaxialStretchValue) {
  const auto s = state_of(diag(1.2, 1, 1));
  EXPECT_NEAR(mat::strain_energy(kLp, s), 5.63128243547684392654408097533, 1e-12);
  EXPECT_NEAR(mat::first_piola(kLp, s)[0], 54.7960242494371564767882073277, 1e-11);
}

TEST(LopezPamies, StressIsEnergyGradient) { EXPECT_LE(max_fd_error(kLp, 3, 100), 1e-6); }

TEST(LopezPamies, SingleUnitExponentMatchesNeoHookeanForm) {
  const mat::LopezPamies lp{{{1.0, 385.0}}, 577.0};
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto s = state_of(random_near_identity(rng, 0.3));
    const double expected =
        0.5 * 385.0 * (s.I1 - 3.0) - 385.0 * std::log(s.J) + 0.5 * 577.0 * (s.J - 1) * (s.J - 1);
    EXPECT_NEAR(mat::strain_energy(lp, s), expected, 1e-10 * (1 + std::abs(expected)));
    // The alpha = 1 term contributes exactly mu F.
    const M3 P = mat::first_piola(lp, s);
    const double inv = (s.J * s.J - s.J) * 577.0 - 385.0;
    for (int k = 0; k < 9; ++k) EXPECT_NEAR(P[k] - inv * s.F_inv_T[k], 385.0 * s.F[k], 1e-10);
  }
}

TEST(LopezPamies, FrameIndifference) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const M3 F = random_near_identity(rng, 0.3);
    const double a = mat::strain_energy(kLp, state_of(F));
    const double b = mat::strain_energy(kLp, state_of(ad::matmul(random_rotation(rng), F)));
    EXPECT_LE(std::abs(a - b), 1e-10 * (1 + std::abs(a)));
  }
}

TEST(LopezPamies, ZeroExponentRejected) {
  const mat::LopezPamies bad{{{0.0, 10.0}}, 1.0};
  EXPECT_THROW(bad.validate(), hyperpinn::DomainError);
  EXPECT_THROW(mat::strain_energy(bad, state_of(ad::identity3())), hyperpinn::DomainError);
  EXPECT_THROW(mat::first_piola(bad, state_of(ad::identity3())), hyperpinn::DomainError);
}

TEST(Materials, Validation) {
  EXPECT_NO_THROW(mat::validate(mat::Material{kNh}));
  EXPECT_NO_THROW(mat::validate(mat::Material{kLp}));
  EXPECT_THROW((mat::NeoHookean{1.0, 0.0}.validate()), hyperpinn::DomainError);
  EXPECT_THROW((mat::LopezPamies{{}, 1.0}.validate()), hyperpinn::DomainError);
  EXPECT_DOUBLE_EQ(mat::shear_modulus(kLp), 150.0);
  EXPECT_EQ(mat::material_name(kLp), "lopez_pamies");
}

TEST(Cauchy, TrivialCases) {
  const M3 F{1.1, 0.1, 0, 0, 0.9, 0, 0, 0, 1};
  for (double v : mat::cauchy(M3{}, F)) EXPECT_EQ(v, 0.0);
  const M3 P{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const M3 S = mat::cauchy(P, ad::identity3());
  for (int k = 0; k < 9; ++k) EXPECT_EQ(S[k], P[k]);
  EXPECT_THROW(mat::cauchy(P, diag(0, 1, 1)), hyperpinn::InvertedState);
}

TEST(VonMises, StandardStates) {
  EXPECT_NEAR(mat::von_mises(diag(-7, -7, -7)), 0.0, 1e-14);
  EXPECT_NEAR(mat::von_mises(diag(5, 0, 0)), 5.0, 1e-14);
  const double tau = 2.0;
  EXPECT_NEAR(mat::von_mises(M3{0, tau, 0, tau, 0, 0, 0, 0, 0}), std::sqrt(3.0) * tau, 1e-14);
}
