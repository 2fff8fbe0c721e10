#include "hyperpinn/oracle/verification.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hyperpinn/ad/fd_check.hpp"
#include "hyperpinn/bvp/problem.hpp"
#include "hyperpinn/loss/objective.hpp"
#include "hyperpinn/net/field_network.hpp"

namespace hyperpinn::oracle {

namespace {

SuiteResult finish(std::string name, double err, double threshold, std::string detail = {}) {
  return {std::move(name), err, threshold, err <= threshold, std::move(detail)};
}

double rel(double a, double b, double floor) {
  return std::abs(a - b) / std::max(std::abs(a), floor);
}

net::FieldNetwork small_network(std::uint64_t seed) {
  return net::FieldNetwork(net::RffMap::sample(4, 1.0, seed), {8, 8}, 1.0);
}

}  // namespace

SuiteResult check_loss_gradient(std::uint64_t seed) {
  bvp::ProblemSpec problem = bvp::nh_localized_traction();
  problem.domain.counts = {5, 5, 5};
  const net::FieldNetwork network = small_network(seed);
  const loss::PinnObjective objective(problem, network);
  ad::ParamVector phi = network.initialize(seed + 1);
  // small output layer keeps F admissible
  const std::size_t last = network.layout().layers().size() - 1;
  for (std::size_t k = network.layout().weight_offset(last); k < phi.values.size(); ++k) {
    phi.values[k] *= 0.05;
  }
  loss::TermArray weights;
  weights.fill(1.0 / loss::kTermCount);

  const loss::Evaluation ev = objective.evaluate(phi, weights, true);
  ad::ParamVector probe = phi;
  const ad::ScalarFunction f = [&](std::span<const double> x) {
    probe.values.assign(x.begin(), x.end());
    return objective.evaluate(probe, weights, false).total;
  };
  // absolute floor: components far below the gradient scale are compared
  // against that scale instead of their own magnitude
  double gmax = 0.0;
  for (double g : ev.gradient) gmax = std::max(gmax, std::abs(g));
  const ad::FdReport r = ad::fd_check(f, ev.gradient, phi.values, 1e-6, 1e-3 * gmax);
  std::ostringstream d;
  d << ev.gradient.size() << " parameters, worst index " << r.worst_index << " (analytic "
    << r.analytic << ", central difference " << r.numeric << ")";
  return finish("loss_parameter_gradient", r.max_relative_error, 1e-5, d.str());
}

SuiteResult check_spatial_hessian(std::uint64_t seed) {
  const net::FieldNetwork network = small_network(seed);
  const ad::ParamVector phi = network.initialize(seed + 1);
  std::mt19937_64 rng(seed + 2);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int npts = 20;
  ad::Array X(3, npts);
  for (int p = 0; p < npts; ++p)
    for (int a = 0; a < 3; ++a) X(a, p) = u01(rng);

  auto outputs = [&](const ad::Array& pts, int order, ad::Tape& tape) {
    std::array<ad::Jet, 3> x{ad::Jet::lift_coordinate(tape, pts, 0, order),
                             ad::Jet::lift_coordinate(tape, pts, 1, order),
                             ad::Jet::lift_coordinate(tape, pts, 2, order)};
    const net::NetworkOutput out = network.forward(tape, x, phi, false);
    std::array<ad::Jet, 12> y;
    for (int i = 0; i < 3; ++i) y[i] = out.y_u[i];
    for (int k = 0; k < 9; ++k) y[3 + k] = out.y_P[k];
    return y;
  };
  auto entry = [](const ad::Var& v, int p) { return v.is_zero() ? 0.0 : v.value()(0, p); };

  ad::Tape tape;
  const auto y2 = outputs(X, 2, tape);
  const double h = 1e-5;
  double worst = 0.0;
  double scale = 0.0;
  for (const auto& y : y2)
    for (int k = 0; k < 6; ++k)
      for (int p = 0; p < npts; ++p) scale = std::max(scale, std::abs(entry(y.hessians()[k], p)));
  for (int j = 0; j < 3; ++j) {
    ad::Array Xp = X;
    ad::Array Xm = X;
    Xp.row(j) += h;
    Xm.row(j) -= h;
    ad::Tape tp;
    ad::Tape tm;
    const auto yp = outputs(Xp, 1, tp);
    const auto ym = outputs(Xm, 1, tm);
    for (int c = 0; c < 12; ++c)
      for (int i = 0; i < 3; ++i)
        for (int p = 0; p < npts; ++p) {
          const double fd = (entry(yp[c].grad(i), p) - entry(ym[c].grad(i), p)) / (2.0 * h);
          worst = std::max(worst, rel(entry(y2[c].hess(i, j), p), fd, 1e-3 * scale));
        }
  }
  return finish("spatial_hessian", worst, 1e-4);
}

SuiteResult check_material_gradient(const mat::Material& material, std::uint64_t seed,
                                    int trials) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pert(-0.3, 0.3);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    ad::Mat3<double> G;
    do {
      for (double& g : G) g = pert(rng);
    } while (ad::det(ad::add(G, ad::identity3())) < 0.2);
    const auto P = mat::first_piola(material, mat::deformation_gradient(G));
    const ad::ScalarFunction psi = [&](std::span<const double> g) {
      ad::Mat3<double> m;
      std::copy(g.begin(), g.end(), m.begin());
      return mat::strain_energy(material, mat::deformation_gradient(m));
    };
    double pmax = 0.0;
    for (double v : P) pmax = std::max(pmax, std::abs(v));
    const ad::FdReport r = ad::fd_check(psi, P, G, 1e-6, 1e-3 * pmax);
    worst = std::max(worst, r.max_relative_error);
  }
  return finish("material_" + mat::material_name(material), worst, 1e-6);
}

SuiteResult check_feature_gradient(std::uint64_t seed) {
  const net::RffMap map = net::RffMap::sample(8, 1.0, seed);
  std::mt19937_64 rng(seed + 3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ad::Array X(3, 16);
  for (int p = 0; p < 16; ++p)
    for (int a = 0; a < 3; ++a) X(a, p) = u01(rng);
  ad::Tape tape;
  std::array<ad::Jet, 3> x{ad::Jet::lift_coordinate(tape, X, 0, 1),
                           ad::Jet::lift_coordinate(tape, X, 1, 1),
                           ad::Jet::lift_coordinate(tape, X, 2, 1)};
  const ad::Jet feat = net::rff_apply(tape, map, x);
  const double two_pi = 2.0 * std::numbers::pi;
  double worst = 0.0;
  for (int i = 0; i < map.feature_count(); ++i)
    for (int p = 0; p < 16; ++p) {
      const double phase = two_pi * (map.frequencies.row(i).transpose().array() * X.col(p)).sum();
      for (int k = 0; k < 3; ++k) {
        const double w = two_pi * map.frequencies(i, k);
        worst = std::max(worst, rel(feat.grad(k).value()(2 * i, p), -w * std::sin(phase), 1e-8));
        worst = std::max(worst, rel(feat.grad(k).value()(2 * i + 1, p), w * std::cos(phase), 1e-8));
      }
    }
  return finish("fourier_feature_gradient", worst, 1e-6);
}

std::vector<SuiteResult> gradient_suites(std::uint64_t seed) {
  mat::LopezPamies lp;
  lp.terms = {{1.0, 100.0}, {-2.0, 50.0}};
  lp.lambda = 100.0;
  return {check_feature_gradient(seed), check_spatial_hessian(seed),
          check_material_gradient(mat::NeoHookean{577.0, 385.0}, seed),
          check_material_gradient(lp, seed), check_loss_gradient(seed)};
}

}  // namespace hyperpinn::oracle
