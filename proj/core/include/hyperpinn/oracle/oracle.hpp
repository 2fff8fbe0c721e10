#pragma once

#include <Eigen/Core>

#include <span>

#include "hyperpinn/ad/mat3.hpp"
#include "hyperpinn/bvp/problem.hpp"
#include "hyperpinn/mat/materials.hpp"

namespace hyperpinn::oracle {

// Homogeneous deformation u(X) = (F0 - I) X with constant stresses.
struct AffineSolution {
  ad::Mat3<double> F0;
  ad::Mat3<double> P0;
  ad::Mat3<double> S0;

  std::array<double, 3> displacement(const std::array<double, 3>& X) const;
  Eigen::Matrix3Xd displacement(const Eigen::Matrix3Xd& X) const;
};

AffineSolution affine_solution(const ad::Mat3<double>& F0, const mat::Material& material);

// |u_ref - u_test|_L2 / |u_ref|_L2 with the given quadrature weights.
// Throws ZeroReference when |u_ref| = 0, LengthMismatch on size mismatch.
double l2_error(const Eigen::Matrix3Xd& u_test, const Eigen::Matrix3Xd& u_ref,
                std::span<const double> weights);

// F0 = I + gamma e1 (x) e2 under a Neo-Hookean law.
AffineSolution simple_shear_oracle(double gamma, const mat::NeoHookean& material);

// F0 = diag(l1, lt, lt) with lt chosen so that P_22 = P_33 = 0. Bisection on
// [0.2, 2] to 1e-4 followed by Newton to |P_22| <= 1e-10 Pa. Throws NoBracket.
AffineSolution uniaxial_oracle(double stretch, const mat::Material& material);

// Unit cube, u = (F0 - I) X prescribed on all six faces, no body force.
// Throws InvertedState when det F0 <= 0.
bvp::ProblemSpec affine_dirichlet_problem(const ad::Mat3<double>& F0,
                                          const mat::Material& material);

// Reference L2 errors against finite elements reported for the four
// benchmarks and the two ablations; metadata only.
struct PublishedError {
  const char* case_name;
  double l2_error;
};
inline constexpr PublishedError kPublishedErrors[] = {
    {"nh_cantilever_traction", 0.034}, {"lp_cantilever_displacement", 0.0087},
    {"nh_simple_shear", 0.0065},       {"nh_localized_traction", 0.0091},
    {"nh_localized_traction/dem", 0.034}, {"nh_localized_traction/dcm", 0.085},
};

}  // namespace hyperpinn::oracle
