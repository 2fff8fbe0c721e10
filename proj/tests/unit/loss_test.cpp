#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "brute_cov.hpp"
#include "hyperpinn/ad/jet.hpp"
#include "hyperpinn/bvp/problem.hpp"
#include "hyperpinn/loss/cov_weighting.hpp"
#include "hyperpinn/loss/objective.hpp"
#include "hyperpinn/loss/terms.hpp"
#include "hyperpinn/oracle/oracle.hpp"

namespace ad = hyperpinn::ad;
namespace bvp = hyperpinn::bvp;
namespace loss = hyperpinn::loss;
namespace net = hyperpinn::net;
using ad::Array;
using ad::Jet;
using ad::Tape;
using ad::Var;

namespace {

ad::Mat3<Var> constant_field(Tape& tape, const std::vector<ad::Mat3<double>>& P) {
  ad::Mat3<Var> out;
  for (int k = 0; k < 9; ++k) {
    Array row(1, static_cast<Eigen::Index>(P.size()));
    for (std::size_t n = 0; n < P.size(); ++n) row(0, n) = P[n][k];
    out[k] = tape.constant(row);
  }
  return out;
}

std::vector<ad::Mat3<double>> random_field(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0, 3);
  std::vector<ad::Mat3<double>> P(n);
  for (auto& m : P)
    for (double& v : m) v = g(rng);
  return P;
}

net::FieldNetwork small_network(double stress_scale = 385.0) {
  return net::FieldNetwork(net::RffMap::sample(4, 1.0, 0), {8}, stress_scale);
}

}  // namespace

TEST(Terms, ConstitutiveMismatch) {
  const ad::Mat3<double> zero{};
  ad::Mat3<double> two{};
  two[0] = 2.0;
  EXPECT_EQ(loss::mse_constitutive({two}, {two}), 0.0);
  EXPECT_EQ(loss::mse_constitutive({two}, {zero}), 4.0);
  EXPECT_THROW(loss::mse_constitutive({two}, {}), hyperpinn::LengthMismatch);
}

TEST(Terms, ConstitutiveMatchesDoubleLoop) {
  std::mt19937_64 rng(1);
  const auto a = random_field(rng, 5);
  const auto b = random_field(rng, 5);
  double brute = 0.0;
  for (int n = 0; n < 5; ++n)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) brute += std::pow(a[n][3 * i + j] - b[n][3 * i + j], 2);
  brute /= 5;
  EXPECT_NEAR(loss::mse_constitutive(a, b), brute, 1e-12);
  Tape tape;
  const Var v =
      loss::squared_mismatch_sum(constant_field(tape, a), constant_field(tape, b), 1.0 / 5);
  EXPECT_NEAR(ad::scalar_value(v), brute, 1e-12);
}

TEST(Terms, TractionByHand) {
  std::mt19937_64 rng(2);
  const auto P = random_field(rng, 1)[0];
  const std::array<double, 3> N{0, -1, 0}, t{0.5, -2, 1};
  double brute = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double r = -P[3 * i + 1] - t[i];
    brute += r * r;
  }
  EXPECT_NEAR(loss::traction_mismatch(P, N, t), brute, 1e-12);
  Tape tape;
  Array n(3, 1), tt(3, 1), c = Array::Ones(3, 1);
  n << N[0], N[1], N[2];
  tt << t[0], t[1], t[2];
  const Var v = loss::traction_residual_sum(tape, constant_field(tape, {P}), n, tt, c, 1.0);
  EXPECT_NEAR(ad::scalar_value(v), brute, 1e-12);
  // Masked components drop out.
  c(1, 0) = 0.0;
  const double r1 = -P[4] - t[1];
  const Var m = loss::traction_residual_sum(tape, constant_field(tape, {P}), n, tt, c, 1.0);
  EXPECT_NEAR(ad::scalar_value(m), brute - r1 * r1, 1e-12);
  EXPECT_THROW(loss::traction_mismatch(P, {0, 0, 0}, t), hyperpinn::MissingNormal);
  EXPECT_THROW(loss::traction_residual_sum(tape, constant_field(tape, {P}), Array::Zero(3, 1), tt,
                                           Array::Ones(3, 1), 1.0),
               hyperpinn::MissingNormal);
}

TEST(Terms, StressFreePatchIsSatisfied) {
  Tape tape;
  const ad::Mat3<double> zero{};
  Array n(3, 1), t = Array::Zero(3, 1);
  n << 1, 0, 0;
  const Var v = loss::traction_residual_sum(tape, constant_field(tape, {zero}), n, t,
                                            Array::Ones(3, 1), 1.0);
  EXPECT_EQ(v.is_zero() ? 0.0 : ad::scalar_value(v), 0.0);
  ad::Mat3<double> P{};
  P[0] = 300.0;
  EXPECT_EQ(loss::traction_mismatch(P, {1, 0, 0}, {300, 0, 0}), 0.0);
}

TEST(Terms, ManufacturedDivergence) {
  Tape tape;
  Array p(3, 4);
  p << 0.1, 0.4, 0.6, 0.9, 0.2, 0.3, 0.5, 0.7, 0.8, 0.1, 0.4, 0.6;
  const std::array<Jet, 3> x{Jet::lift_coordinate(tape, p, 0, 1),
                             Jet::lift_coordinate(tape, p, 1, 1),
                             Jet::lift_coordinate(tape, p, 2, 1)};
  ad::Mat3<Jet> P;
  for (int k = 0; k < 9; ++k) P[k] = Jet::constant(tape, Array::Constant(1, 4, 7.0), 1);
  // Constant stress: no divergence.
  for (const Var& d : loss::divergence(P))
    if (!d.is_zero()) EXPECT_EQ(d.value().abs().maxCoeff(), 0.0);
  P[0] = x[0];  // X1 e1 (x) e1
  const auto div = loss::divergence(P);
  EXPECT_TRUE((div[0].value() == 1.0).all());
  const Var r = loss::interior_residual_sum(tape, div, {0, 0, 0}, 4, 0.25);
  EXPECT_DOUBLE_EQ(ad::scalar_value(r), 1.0);
  const Var r0 = loss::interior_residual_sum(tape, div, {-1, 0, 0}, 4, 0.25);
  EXPECT_EQ(r0.is_zero() ? 0.0 : ad::scalar_value(r0), 0.0);
}

TEST(Terms, TotalLoss) {
  const loss::TermArray ones{1, 1, 1, 1, 1, 1};
  const loss::TermArray sixth{1. / 6, 1. / 6, 1. / 6, 1. / 6, 1. / 6, 1. / 6};
  EXPECT_NEAR(loss::total_loss(ones, sixth, loss::mask_terms(bvp::LossMask::Full)), 1.0, 1e-15);
  const loss::TermArray t{-3.5, 2, 3, 4, 5, 6};
  EXPECT_EQ(loss::total_loss(t, ones, loss::mask_terms(bvp::LossMask::Dem)), -3.5);
  EXPECT_EQ(loss::total_loss(t, ones, loss::mask_terms(bvp::LossMask::Dcm)), 3.0 + 5.0);
}

TEST(Terms, MaskDefinitions) {
  EXPECT_EQ(loss::mask_terms(bvp::LossMask::Full), (loss::TermMask{1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(loss::mask_terms(bvp::LossMask::Dem), (loss::TermMask{1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(loss::mask_terms(bvp::LossMask::Dcm), (loss::TermMask{0, 0, 1, 0, 1, 0}));
  EXPECT_EQ(loss::term_name(loss::kEnergy), "Pi");
}

TEST(Objective, ZeroNetworkOnAffineShear) {
  const double gamma = 0.4;
  auto problem = bvp::nh_simple_shear(gamma);
  problem.domain.counts = {5, 5, 5};
  const auto nw = small_network();
  auto phi = nw.initialize(0);
  std::fill(phi.values.begin(), phi.values.end(), 0.0);
  const loss::PinnObjective obj(problem, nw);
  const loss::TermArray w{1, 1, 1, 1, 1, 1};
  const auto ev = obj.evaluate(phi, w, false);
  EXPECT_NEAR(ev.terms[loss::kEnergy], 0.5 * 385.0 * gamma * gamma, 1e-12);
  EXPECT_EQ(ev.external_work, 0.0);
  EXPECT_LE(ev.terms[loss::kInteriorU], 1e-10);
  EXPECT_EQ(ev.terms[loss::kInteriorNet], 0.0);
  // Fully fixed box: no traction points.
  EXPECT_FALSE(obj.active()[loss::kTractionU]);

  // Stress head biased to the exact stress.
  const auto exact = hyperpinn::oracle::simple_shear_oracle(gamma, {577.0, 385.0});
  const std::size_t b = nw.layout().bias_offset(nw.layout().layers().size() - 1);
  for (int k = 0; k < 9; ++k) phi.values[b + 3 + k] = exact.P0[k] / nw.stress_scale();
  EXPECT_LE(obj.evaluate(phi, w, false).terms[loss::kConstitutive], 1e-12);
}

TEST(Objective, ZeroDisplacementHasNoEnergy) {
  for (const char* name : {"nh_cantilever_traction", "nh_localized_traction"}) {
    auto problem = bvp::preset(name);
    problem.domain.counts = {5, 3, 3};
    const auto nw = small_network();
    auto phi = nw.initialize(0);
    std::fill(phi.values.begin(), phi.values.end(), 0.0);
    const auto ev = loss::PinnObjective(problem, nw).evaluate(phi, {1, 1, 1, 1, 1, 1}, false);
    EXPECT_EQ(ev.terms[loss::kEnergy], 0.0) << name;
  }
}

TEST(Objective, TotalIsWeightedSumOfTerms) {
  auto problem = bvp::preset("nh_localized_traction");
  problem.domain.counts = {5, 5, 5};
  const auto nw = small_network(100.0);
  auto phi = nw.initialize(3);
  for (double& v : phi.values) v *= 0.1;
  const loss::PinnObjective obj(problem, nw);
  const loss::TermArray w{0.1, 0.2, 0.3, 0.15, 0.05, 0.2};
  const auto ev = obj.evaluate(phi, w, true);
  double dot = 0.0;
  for (int i = 0; i < loss::kTermCount; ++i) dot += w[i] * ev.terms[i];
  EXPECT_NEAR(ev.total, dot, 1e-12 * std::abs(dot));
  for (int i = 0; i < loss::kTermCount; ++i) EXPECT_TRUE(obj.active()[i]);
  EXPECT_NEAR(ev.terms[loss::kEnergy], ev.internal_energy - ev.external_work, 1e-12);

  problem.mask = bvp::LossMask::Dem;
  const loss::PinnObjective dem(problem, nw);
  const auto ed = dem.evaluate(phi, {1, 0, 0, 0, 0, 0}, false);
  EXPECT_EQ(ed.total, ed.terms[loss::kEnergy]);
}

TEST(Objective, ChunkingAndThreadsDoNotChangeResults) {
  auto problem = bvp::preset("nh_localized_traction");
  problem.domain.counts = {5, 5, 5};
  const auto nw = small_network(100.0);
  auto phi = nw.initialize(4);
  for (double& v : phi.values) v *= 0.1;
  const loss::TermArray w{1. / 6, 1. / 6, 1. / 6, 1. / 6, 1. / 6, 1. / 6};
  const auto a = loss::PinnObjective(problem, nw, {256, 1}).evaluate(phi, w, true);
  const auto b = loss::PinnObjective(problem, nw, {256, 3}).evaluate(phi, w, true);
  const auto c = loss::PinnObjective(problem, nw, {7, 1}).evaluate(phi, w, true);
  EXPECT_EQ(a.terms, b.terms);
  EXPECT_EQ(a.gradient, b.gradient);
  for (int i = 0; i < loss::kTermCount; ++i)
    EXPECT_NEAR(a.terms[i], c.terms[i], 1e-12 * (1 + std::abs(a.terms[i])));
}

TEST(Objective, SampleFieldsMatchesLift) {
  const auto problem = bvp::nh_simple_shear(0.5);
  const auto nw = small_network();
  auto phi = nw.initialize(0);
  std::fill(phi.values.begin(), phi.values.end(), 0.0);
  Eigen::Matrix3Xd X(3, 2);
  X << 0.1, 0.9, 0.5, 0.2, 0.3, 0.7;
  const auto s = loss::sample_fields(problem, nw, phi, X);
  EXPECT_DOUBLE_EQ(s.u(0, 0), 0.25);
  EXPECT_DOUBLE_EQ(s.u(0, 1), 0.1);
  EXPECT_NEAR(s.J(0), 1.0, 1e-15);
  EXPECT_NEAR(s.P_u(1, 0), 385.0 * 0.5, 1e-12);
}

TEST(Cov, SymmetricTermsShareWeight) {
  loss::CovWeighting cov({true, true});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int t = 0; t < 20; ++t) {
    const double L = u(rng);
    const std::vector<double> l{L, L};
    const auto& w = cov.update(l);
    EXPECT_EQ(w[0], 0.5);
    EXPECT_EQ(w[1], 0.5);
  }
}

TEST(Cov, ConstantHistoryIsUniform) {
  loss::CovWeighting cov({true, true, false, true});
  for (int t = 0; t < 5; ++t) {
    const std::vector<double> l{3, 7, 1, 2};
    const auto& w = cov.update(l);
    EXPECT_EQ(w[0], 1. / 3);
    EXPECT_EQ(w[2], 0.0);
  }
}

TEST(Cov, ScriptedSequenceMatchesBruteForce) {
  const std::vector<std::vector<double>> h{{1, 10, 100}, {0.5, 10, 200}, {0.25, 10, 400}};
  loss::CovWeighting cov({true, true, true});
  for (std::size_t t = 0; t < h.size(); ++t) {
    const auto& w = cov.update(h[t]);
    const auto ref = hyperpinn::testing::brute_cov({h.begin(), h.begin() + t + 1});
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(w[i], ref.weights[i], 1e-10) << "t=" << t + 1 << " i=" << i;
      EXPECT_NEAR(cov.ratio_std(i), ref.ratio_std[i], 1e-12);
      sum += w[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  // The constant middle term never earns weight.
  EXPECT_EQ(cov.weights()[1], 0.0);
}

TEST(Cov, RandomSequencesMatchBruteForce) {
  std::mt19937_64 rng(4);
  std::lognormal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> h;
    loss::CovWeighting cov(std::vector<bool>(6, true));
    for (int t = 0; t < 40; ++t) {
      std::vector<double> l(6);
      for (double& v : l) v = g(rng);
      h.push_back(l);
      cov.update(l);
    }
    const auto ref = hyperpinn::testing::brute_cov(h);
    double s = 0.0;
    for (int i = 0; i < 6; ++i) {
      EXPECT_NEAR(cov.weights()[i], ref.weights[i], 1e-10);
      s += cov.weights()[i];
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Cov, NonFiniteLossThrows) {
  loss::CovWeighting cov({true, false});
  const std::vector<double> inactive_nan{1.0, std::nan("")};
  EXPECT_NO_THROW(cov.update(inactive_nan));
  const std::vector<double> bad{INFINITY, 1.0};
  EXPECT_THROW(cov.update(bad), hyperpinn::NonFiniteLoss);
  const std::vector<double> short_list{1.0};
  EXPECT_THROW(cov.update(short_list), hyperpinn::LengthMismatch);
}

TEST(Cov, SignedTermSurrogate) {
  const double eps = loss::CovWeighting::kSignedEpsilon;
  loss::CovWeighting cov({true, true}, 0);
  const std::vector<std::vector<double>> seq{{-2, 1}, {-5, 1}, {-4, 1}};
  cov.update(seq[0]);
  EXPECT_DOUBLE_EQ(cov.tracked_loss(0), 2 + eps);
  cov.update(seq[1]);
  EXPECT_DOUBLE_EQ(cov.tracked_loss(0), 3 + eps);  // |-5 - (-2)|
  cov.update(seq[2]);
  EXPECT_DOUBLE_EQ(cov.tracked_loss(0), 1 + eps);  // |-4 - (-5)|
  EXPECT_GT(cov.weights()[0], 0.0);
}

TEST(Cov, ResetClearsStatistics) {
  loss::CovWeighting cov({true, true});
  const std::vector<double> a{1, 2}, b{3, 1};
  cov.update(a);
  cov.update(b);
  cov.reset();
  EXPECT_EQ(cov.t(), 0);
  const auto& w = cov.update(b);
  EXPECT_EQ(w[0], 0.5);
}
