#include "hyperpinn/oracle/oracle.hpp"

#include <cmath>
#include <sstream>

#include "hyperpinn/error.hpp"

namespace hyperpinn::oracle {

namespace {

ad::Mat3<double> piola_at(const ad::Mat3<double>& F, const mat::Material& m) {
  ad::Mat3<double> grad_u = F;
  for (int i = 0; i < 3; ++i) grad_u[4 * i] -= 1.0;
  return mat::first_piola(m, mat::deformation_gradient(grad_u));
}

double lateral_stress(double l1, double lt, const mat::Material& m) {
  return piola_at({l1, 0.0, 0.0, 0.0, lt, 0.0, 0.0, 0.0, lt}, m)[4];
}

}  // namespace

std::array<double, 3> AffineSolution::displacement(const std::array<double, 3>& X) const {
  std::array<double, 3> u{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) u[i] += (F0[3 * i + k] - (i == k ? 1.0 : 0.0)) * X[k];
  return u;
}

Eigen::Matrix3Xd AffineSolution::displacement(const Eigen::Matrix3Xd& X) const {
  Eigen::Matrix3d G;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) G(i, k) = F0[3 * i + k] - (i == k ? 1.0 : 0.0);
  return G * X;
}

AffineSolution affine_solution(const ad::Mat3<double>& F0, const mat::Material& material) {
  AffineSolution s;
  s.F0 = F0;
  s.P0 = piola_at(F0, material);
  s.S0 = mat::cauchy(s.P0, F0);
  return s;
}

double l2_error(const Eigen::Matrix3Xd& u_test, const Eigen::Matrix3Xd& u_ref,
                std::span<const double> weights) {
  if (u_test.cols() != u_ref.cols() || static_cast<std::size_t>(u_ref.cols()) != weights.size()) {
    std::ostringstream msg;
    msg << "l2_error: " << u_test.cols() << " test points, " << u_ref.cols()
        << " reference points, " << weights.size() << " weights";
    throw LengthMismatch(msg.str());
  }
  double num = 0.0;
  double den = 0.0;
  for (long n = 0; n < u_ref.cols(); ++n) {
    num += weights[n] * (u_ref.col(n) - u_test.col(n)).squaredNorm();
    den += weights[n] * u_ref.col(n).squaredNorm();
  }
  if (!(den > 0.0)) throw ZeroReference("l2_error: reference field has zero norm");
  return std::sqrt(num / den);
}

AffineSolution simple_shear_oracle(double gamma, const mat::NeoHookean& material) {
  const ad::Mat3<double> F0{1.0, gamma, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0};
  AffineSolution s;
  s.F0 = F0;
  s.P0 = piola_at(F0, material);
  // J = 1, so S = mu (F F^T - I)
  const auto b = ad::matmul(F0, ad::transpose(F0));
  for (int k = 0; k < 9; ++k) s.S0[k] = material.mu * (b[k] - (k % 4 == 0 ? 1.0 : 0.0));
  return s;
}

AffineSolution uniaxial_oracle(double stretch, const mat::Material& material) {
  if (!(stretch > 0.0)) throw DomainError("uniaxial_oracle: stretch must be positive");
  double lo = 0.2;
  double hi = 2.0;
  double f_lo = lateral_stress(stretch, lo, material);
  const double f_hi = lateral_stress(stretch, hi, material);
  if (f_lo * f_hi > 0.0) {
    std::ostringstream msg;
    msg << "uniaxial_oracle: lateral stress does not change sign on [0.2, 2] for stretch "
        << stretch;
    throw NoBracket(msg.str());
  }
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = lateral_stress(stretch, mid, material);
    if ((f_mid <= 0.0) == (f_lo <= 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  double lt = 0.5 * (lo + hi);
  for (int it = 0; it < 50; ++it) {
    const double f = lateral_stress(stretch, lt, material);
    if (std::abs(f) <= 1e-10) break;
    const double h = 1e-7 * lt;
    const double df = (lateral_stress(stretch, lt + h, material) -
                       lateral_stress(stretch, lt - h, material)) /
                      (2.0 * h);
    double next = lt - f / df;
    if (!(next > 0.2 && next < 2.0)) next = 0.5 * (lo + hi);
    lt = next;
  }
  return affine_solution({stretch, 0.0, 0.0, 0.0, lt, 0.0, 0.0, 0.0, lt}, material);
}

bvp::ProblemSpec affine_dirichlet_problem(const ad::Mat3<double>& F0,
                                          const mat::Material& material) {
  if (!(ad::det(F0) > mat::kInversionFloor)) {
    throw InvertedState("affine_dirichlet_problem: det F0 must be positive");
  }
  bvp::ProblemSpec p;
  p.name = "affine";
  p.domain.box.lengths = {1.0, 1.0, 1.0};
  p.domain.counts = {9, 9, 9};
  p.material = material;
  for (Face f : kAllFaces) p.dirichlet.push_back({f, {true, true, true}});
  for (int k = 0; k < 9; ++k) p.lift.gradient[k] = F0[k] - (k % 4 == 0 ? 1.0 : 0.0);
  p.exact_gradient = p.lift.gradient;
  return p;
}

}  // namespace hyperpinn::oracle
