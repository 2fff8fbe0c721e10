#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "hyperpinn/ad/jet.hpp"
#include "hyperpinn/ad/mat3.hpp"
#include "hyperpinn/bvp/problem.hpp"

namespace hyperpinn::loss {

inline constexpr int kTermCount = 6;

// Term order used everywhere (arrays, CSV columns, weights).
enum Term : int {
  kEnergy = 0,       // Pi
  kConstitutive,     // MSE_P
  kTractionU,        // MSE_t^u
  kTractionNet,      // MSE_t^P
  kInteriorU,        // MSE_int^u
  kInteriorNet,      // MSE_int^P
};

using TermArray = std::array<double, kTermCount>;
using TermMask = std::array<bool, kTermCount>;

std::string_view term_name(int term);
TermMask mask_terms(bvp::LossMask mask);

// Tape scalars for one batch of points; a structural zero means "no
// contribution from this batch".
using Breakdown = std::array<ad::Var, kTermCount>;

// (div P)_i = sum_j dP_ij/dX_j as batch rows. P must carry first derivatives.
std::array<ad::Var, 3> divergence(const ad::Mat3<ad::Jet>& P);

// scale * sum over the batch of |A - B|_F^2. Throws LengthMismatch when the
// batches differ in size.
ad::Var squared_mismatch_sum(const ad::Mat3<ad::Var>& a, const ad::Mat3<ad::Var>& b,
                             double scale);

// scale * sum over the batch of sum_i c_i ((P N)_i - t_i)^2. normals,
// tractions and components are 3 x n; a column with a zero normal and
// c != 0 raises MissingNormal.
ad::Var traction_residual_sum(ad::Tape& tape, const ad::Mat3<ad::Var>& P, const ad::Array& normals,
                              const ad::Array& tractions, const ad::Array& components,
                              double scale);

// scale * sum over the batch of |div P + f_B|^2.
ad::Var interior_residual_sum(ad::Tape& tape, const std::array<ad::Var, 3>& div,
                              const std::array<double, 3>& body_force, Eigen::Index n,
                              double scale);

// sum_n w_n psi_n.
ad::Var energy_sum(const ad::Var& psi, const ad::Array& weights);
// sum_n u_n . load_n with load 3 x n.
ad::Var work_sum(const std::array<ad::Var, 3>& u, const ad::Array& loads);

// Plain-double reference forms used by tests and post-processing.
double mse_constitutive(const std::vector<ad::Mat3<double>>& p_net,
                        const std::vector<ad::Mat3<double>>& p_u);
double traction_mismatch(const ad::Mat3<double>& P, const std::array<double, 3>& normal,
                         const std::array<double, 3>& traction);

// sum_i weights_i * terms_i over unmasked terms.
double total_loss(const TermArray& terms, const TermArray& weights, const TermMask& mask);

}  // namespace hyperpinn::loss
