#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hyperpinn/ad/fd_check.hpp"
#include "hyperpinn/ad/jet.hpp"
#include "hyperpinn/ad/mat3.hpp"
#include "hyperpinn/ad/tape.hpp"
#include "hyperpinn/error.hpp"

namespace ad = hyperpinn::ad;
using ad::Array;
using ad::Jet;
using ad::Tape;
using ad::Var;

namespace {

Array point(double x, double y, double z) {
  Array p(3, 1);
  p << x, y, z;
  return p;
}

std::array<Jet, 3> lift(Tape& tape, const Array& p, int order = 2) {
  return {Jet::lift_coordinate(tape, p, 0, order), Jet::lift_coordinate(tape, p, 1, order),
          Jet::lift_coordinate(tape, p, 2, order)};
}

double at(const Var& v) { return v.is_zero() ? 0.0 : v.value()(0, 0); }

// A composition touching every jet primitive.
Jet composite(const std::array<Jet, 3>& x) {
  const Jet a = tanh(x[0] * x[1] + 0.3) + sin(x[2]) * cos(x[0]);
  const Jet b = log(x[0] * x[0] + x[1] * x[1] + 1.5);
  const Jet c = pow(x[2] + 2.0, -2.0) + exp(x[1] * 0.5) / (x[0] + 3.0);
  return a * b - c;
}

}  // namespace

TEST(Tape, QuadraticGradient) {
  Tape tape;
  Array phi(1, 2);
  phi << 1.0, 2.0;
  const Var p = tape.parameter(phi, 0);
  const Var loss = ad::sum(p * p);
  const auto g = tape.gradient(loss, 2);
  EXPECT_DOUBLE_EQ(g[0], 2.0);
  EXPECT_DOUBLE_EQ(g[1], 4.0);
}

TEST(Tape, ConstantLossHasZeroGradient) {
  Tape tape;
  tape.parameter(Array::Constant(1, 3, 1.0), 0);
  const Var loss = ad::sum(tape.constant(Array::Constant(2, 2, 3.0)));
  const auto g = tape.gradient(loss, 3);
  for (double v : g) EXPECT_EQ(v, 0.0);
}

TEST(Tape, EmptyTapeThrows) {
  Tape tape;
  EXPECT_THROW(tape.gradient(Var(), 1), hyperpinn::EmptyTape);
}

TEST(Tape, NonScalarLossThrows) {
  Tape tape;
  const Var p = tape.parameter(Array::Constant(2, 2, 1.0), 0);
  EXPECT_THROW(tape.gradient(p * 2.0, 4), hyperpinn::ShapeMismatch);
}

TEST(Tape, ShapeMismatchOnElementwiseOps) {
  Tape tape;
  const Var a = tape.constant(Array::Constant(2, 3, 1.0));
  const Var b = tape.constant(Array::Constant(3, 2, 1.0));
  EXPECT_THROW(a + b, hyperpinn::ShapeMismatch);
  EXPECT_THROW(a * b, hyperpinn::ShapeMismatch);
  EXPECT_THROW(ad::matmul(a, a), hyperpinn::ShapeMismatch);
}

TEST(Tape, DomainErrors) {
  Tape tape;
  const Var z = tape.constant(Array::Constant(1, 1, 0.0));
  EXPECT_THROW(ad::log(z), hyperpinn::DomainError);
  EXPECT_THROW(ad::pow(z, -1.0), hyperpinn::DomainError);
  EXPECT_THROW(ad::pow(z - 1.0, 0.5), hyperpinn::DomainError);
}

TEST(Tape, ParameterOffsetsAreRowMajor) {
  Tape tape;
  Array w(2, 3);
  w << 1, 2, 3, 4, 5, 6;
  const Var p = tape.parameter(w, 5);
  // d/dw sum(c .* w) = c
  Array c(2, 3);
  c << 10, 20, 30, 40, 50, 60;
  const Var loss = ad::sum(p * tape.constant(c));
  const auto g = tape.gradient(loss, 11);
  for (int r = 0; r < 2; ++r)
    for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(g[5 + r * 3 + k], c(r, k));
  for (int i = 0; i < 5; ++i) EXPECT_EQ(g[i], 0.0);
}

TEST(Tape, InactiveParameterGetsNoGradient) {
  Tape tape;
  const Var p = tape.parameter(Array::Constant(1, 2, 3.0), 0, false);
  const auto g = tape.gradient(ad::sum(p * p), 2);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[1], 0.0);
}

TEST(Tape, EveryOpMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.2, 1.2);
  std::vector<double> x0(14);
  for (double& v : x0) v = u(rng);

  auto build = [](Tape& tape, std::span<const double> x) {
    Array w(2, 3), a(3, 2), b(2, 1);
    for (int k = 0; k < 6; ++k) w(k / 3, k % 3) = x[k];
    for (int k = 0; k < 6; ++k) a(k / 2, k % 2) = x[6 + k];
    b << x[12], x[13];
    Array ww(2, 2);
    ww << 0.7, -1.3, 0.4, 2.1;
    const Var W = tape.parameter(w, 0);
    const Var A = tape.parameter(a, 6);
    const Var B = tape.parameter(b, 12);
    const Var z = ad::add_bias(ad::matmul(W, A), B);  // 2 x 2
    const Var s = ad::tanh(z) + ad::sin(z) * ad::cos(z) - ad::exp(z * 0.1);
    const Var t = ad::log(z * z + 1.0) / (z + 4.0) + ad::pow(z + 3.0, 1.7);
    const Var r = ad::interleave(ad::row(s, 0), ad::row(t, 1));  // 2 x 2
    const Var q = -(r * 2.0) + (1.0 - r) + (r / 3.0) + (5.0 / (r + 6.0)) - (r - 0.25);
    return ad::weighted_sum(q, ww) + ad::sum(q * q);
  };
  auto f = [&](std::span<const double> x) {
    Tape tape;
    return ad::scalar_value(build(tape, x));
  };
  Tape tape;
  const Var loss = build(tape, x0);
  const auto g = tape.gradient(loss, 14);
  const auto report = ad::fd_check(f, g, x0, 1e-6, 1e-6);
  EXPECT_LE(report.max_relative_error, 1e-6) << "index " << report.worst_index;
}

TEST(FdCheck, QuadraticAndLinear) {
  const std::vector<double> x{3.0};
  const std::vector<double> g{6.0};
  auto sq = [](std::span<const double> v) { return v[0] * v[0]; };
  EXPECT_LE(ad::fd_check(sq, g, x, 1e-5).max_relative_error, 1e-9);

  // Dyadic point and step keep every probe exact.
  const std::vector<double> y{0.25, -1.75, 2.0};
  const std::vector<double> gl{2.0, -3.0, 0.5};
  auto lin = [](std::span<const double> v) { return 2.0 * v[0] - 3.0 * v[1] + 0.5 * v[2] + 7.0; };
  EXPECT_LE(ad::fd_check(lin, gl, y, 1.0 / 1024.0).max_relative_error, 1e-12);
}

TEST(FdCheck, ReportsWorstComponent) {
  const std::vector<double> x{1.0, 1.0};
  const std::vector<double> wrong{2.0, 5.0};
  auto f = [](std::span<const double> v) { return v[0] * v[0] + v[1] * v[1]; };
  const auto r = ad::fd_check(f, wrong, x, 1e-5);
  EXPECT_EQ(r.worst_index, 1u);
  EXPECT_NEAR(r.max_relative_error, 0.6, 1e-8);
}

TEST(Jet, LiftCoordinate) {
  Tape tape;
  for (auto [p, k] : {std::pair{point(0, 0, 0), 0}, std::pair{point(1, 2, 3), 2}}) {
    const Jet x = Jet::lift_coordinate(tape, p, k);
    EXPECT_EQ(at(x.value()), p(k, 0));
    for (int i = 0; i < 3; ++i) EXPECT_EQ(at(x.grad(i)), i == k ? 1.0 : 0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_EQ(at(x.hess(i, j)), 0.0);
    EXPECT_EQ(at(x.derivative(k).value()), 1.0);
  }
}

TEST(Jet, TanhAtZero) {
  Tape tape;
  const auto x = lift(tape, point(0, 0.4, 0.2));
  const Jet t = tanh(x[0]);
  EXPECT_EQ(at(t.value()), 0.0);
  EXPECT_EQ(at(t.grad(0)), 1.0);
  EXPECT_EQ(at(t.grad(1)), 0.0);
  EXPECT_EQ(at(t.hess(0, 0)), 0.0);
}

TEST(Jet, DeterminantOfConstantIdentity) {
  Tape tape;
  ad::Mat3<Jet> m;
  const auto id = ad::identity3();
  for (int k = 0; k < 9; ++k) m[k] = Jet::constant(tape, Array::Constant(1, 1, id[k]));
  const Jet d = ad::det(m);
  EXPECT_EQ(at(d.value()), 1.0);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(at(d.grad(i)), 0.0);
}

TEST(Jet, LogDetDerivativeMatchesFd) {
  auto logdet = [](double x1, int order, double* grad) {
    Tape tape;
    const auto x = lift(tape, point(x1, 0.0, 0.0), order);
    ad::Mat3<Jet> m;
    const auto id = ad::identity3();
    for (int k = 0; k < 9; ++k) m[k] = Jet::constant(tape, Array::Constant(1, 1, id[k]), order);
    m[0] = m[0] + x[0];
    const Jet l = log(ad::det(m));
    if (grad != nullptr) *grad = at(l.grad(0));
    return at(l.value());
  };
  double g = 0.0;
  logdet(0.0, 1, &g);
  EXPECT_DOUBLE_EQ(g, 1.0);
  const double h = 1e-5;
  const double fd = (logdet(h, 0, nullptr) - logdet(-h, 0, nullptr)) / (2 * h);
  EXPECT_LE(std::abs(fd - g) / std::abs(g), 1e-6);
}

TEST(Jet, ClosedFormDerivatives) {
  Tape tape;
  const double a = 0.3, b = -0.7, c = 0.9;
  const auto x = lift(tape, point(a, b, c));
  const Jet f = x[0] * x[0] * x[1] + sin(x[2]);  // x^2 y + sin z
  EXPECT_NEAR(at(f.value()), a * a * b + std::sin(c), 1e-15);
  EXPECT_NEAR(at(f.grad(0)), 2 * a * b, 1e-15);
  EXPECT_NEAR(at(f.grad(1)), a * a, 1e-15);
  EXPECT_NEAR(at(f.grad(2)), std::cos(c), 1e-15);
  EXPECT_NEAR(at(f.hess(0, 0)), 2 * b, 1e-15);
  EXPECT_NEAR(at(f.hess(0, 1)), 2 * a, 1e-15);
  EXPECT_NEAR(at(f.hess(2, 2)), -std::sin(c), 1e-15);
  EXPECT_EQ(at(f.hess(1, 1)), 0.0);
  EXPECT_EQ(at(f.hess(0, 2)), 0.0);
}

TEST(Jet, HessianMatchesFdOfGradient) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  const double h = 1e-4;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Array p = point(u(rng), u(rng), u(rng));
    Tape tape;
    const Jet f = composite(lift(tape, p));
    for (int j = 0; j < 3; ++j) {
      Array pp = p, pm = p;
      pp(j, 0) += h;
      pm(j, 0) -= h;
      Tape tp, tm;
      const Jet fp = composite(lift(tp, pp, 1));
      const Jet fm = composite(lift(tm, pm, 1));
      for (int i = 0; i < 3; ++i) {
        const double fd = (at(fp.grad(i)) - at(fm.grad(i))) / (2 * h);
        const double an = at(f.hess(i, j));
        worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-3));
      }
    }
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(Jet, OrderTruncation) {
  Tape tape;
  const auto x = lift(tape, point(0.1, 0.2, 0.3), 1);
  const Jet f = x[0] * x[1];
  EXPECT_EQ(f.order(), 1);
  EXPECT_TRUE(f.hess(0, 1).is_zero());
  EXPECT_EQ(f.truncated(0).order(), 0);
  EXPECT_THROW(f.truncated(0).derivative(0), std::logic_error);
}

TEST(Mat3, DeterminantAndInverse) {
  const ad::Mat3<double> a{2, 1, 0, 0.5, 3, 1, 1, 0, 4};
  const auto inv = ad::inverse(a);
  const auto prod = ad::matmul(a, inv);
  const auto id = ad::identity3();
  for (int k = 0; k < 9; ++k) EXPECT_NEAR(prod[k], id[k], 1e-14);
  EXPECT_NEAR(ad::det(a), 2 * 12 - 1 * (2 - 1) + 0, 1e-14);
  EXPECT_DOUBLE_EQ(ad::trace(a), 9.0);
  EXPECT_EQ(ad::transpose(a)[1], a[3]);
}

TEST(Mat3, SingularMatrixThrows) {
  const ad::Mat3<double> a{1, 2, 3, 2, 4, 6, 0, 1, 1};
  EXPECT_THROW(ad::inverse(a), hyperpinn::SingularMatrix);
}
