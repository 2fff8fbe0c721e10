#include "hyperpinn/loss/terms.hpp"

#include <sstream>

#include "hyperpinn/error.hpp"

namespace hyperpinn::loss {

namespace {

ad::Var add_terms(const ad::Var& a, const ad::Var& b) { return a + b; }

ad::Var row_of(const ad::Array& a, int r, ad::Tape& tape) {
  return tape.constant(a.row(r));
}

}  // namespace

std::string_view term_name(int term) {
  static constexpr std::array<std::string_view, kTermCount> names{
      "Pi", "MSE_P", "MSE_t_u", "MSE_t_P", "MSE_int_u", "MSE_int_P"};
  return names[static_cast<std::size_t>(term)];
}

TermMask mask_terms(bvp::LossMask mask) {
  switch (mask) {
    case bvp::LossMask::Full: return {true, true, true, true, true, true};
    case bvp::LossMask::Dem: return {true, false, false, false, false, false};
    case bvp::LossMask::Dcm: return {false, false, true, false, true, false};
  }
  return {};
}

std::array<ad::Var, 3> divergence(const ad::Mat3<ad::Jet>& P) {
  std::array<ad::Var, 3> div;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const ad::Jet& p = P[3 * i + j];
      if (p.order() < 1) throw std::logic_error("loss::divergence: stress jets carry no gradient");
      div[i] = add_terms(div[i], p.grad(j));
    }
  }
  return div;
}

ad::Var squared_mismatch_sum(const ad::Mat3<ad::Var>& a, const ad::Mat3<ad::Var>& b,
                             double scale) {
  ad::Var acc;
  for (int k = 0; k < 9; ++k) {
    if (!a[k].is_zero() && !b[k].is_zero() && a[k].cols() != b[k].cols()) {
      std::ostringstream msg;
      msg << "mse_constitutive: " << a[k].cols() << " network stresses for " << b[k].cols()
          << " constitutive stresses";
      throw LengthMismatch(msg.str());
    }
    const ad::Var d = a[k] - b[k];
    if (d.is_zero()) continue;
    acc = acc + ad::weighted_sum(d * d, ad::Array::Constant(1, d.cols(), scale));
  }
  return acc;
}

ad::Var traction_residual_sum(ad::Tape& tape, const ad::Mat3<ad::Var>& P, const ad::Array& normals,
                              const ad::Array& tractions, const ad::Array& components,
                              double scale) {
  const Eigen::Index n = normals.cols();
  if (tractions.cols() != n || components.cols() != n) {
    throw LengthMismatch("mse_traction: normal, traction and component arrays differ in size");
  }
  for (Eigen::Index e = 0; e < n; ++e) {
    if (components.col(e).abs().sum() > 0.0 && normals.col(e).abs().sum() == 0.0) {
      std::ostringstream msg;
      msg << "mse_traction: traction point " << e << " has no outward normal";
      throw MissingNormal(msg.str());
    }
  }
  ad::Var acc;
  for (int i = 0; i < 3; ++i) {
    if (components.row(i).abs().sum() == 0.0) continue;
    ad::Var r;
    for (int j = 0; j < 3; ++j) {
      if (P[3 * i + j].is_zero() || normals.row(j).abs().sum() == 0.0) continue;
      r = r + P[3 * i + j] * row_of(normals, j, tape);
    }
    if (tractions.row(i).abs().sum() != 0.0) r = r - row_of(tractions, i, tape);
    if (r.is_zero()) continue;
    acc = acc + ad::weighted_sum(r * r, components.row(i) * scale);
  }
  return acc;
}

ad::Var interior_residual_sum(ad::Tape& tape, const std::array<ad::Var, 3>& div,
                              const std::array<double, 3>& body_force, Eigen::Index n,
                              double scale) {
  ad::Var acc;
  for (int i = 0; i < 3; ++i) {
    ad::Var r = div[i];
    if (body_force[i] != 0.0) r = r + tape.constant(body_force[i], 1, n);
    if (r.is_zero()) continue;
    acc = acc + ad::weighted_sum(r * r, ad::Array::Constant(1, n, scale));
  }
  return acc;
}

ad::Var energy_sum(const ad::Var& psi, const ad::Array& weights) {
  if (psi.is_zero()) return {};
  return ad::weighted_sum(psi, weights);
}

ad::Var work_sum(const std::array<ad::Var, 3>& u, const ad::Array& loads) {
  ad::Var acc;
  for (int i = 0; i < 3; ++i) {
    if (u[i].is_zero() || (loads.row(i) == 0.0).all()) continue;
    acc = acc + ad::weighted_sum(u[i], loads.row(i));
  }
  return acc;
}

double mse_constitutive(const std::vector<ad::Mat3<double>>& p_net,
                        const std::vector<ad::Mat3<double>>& p_u) {
  if (p_net.size() != p_u.size()) {
    std::ostringstream msg;
    msg << "mse_constitutive: " << p_net.size() << " network stresses for " << p_u.size()
        << " constitutive stresses";
    throw LengthMismatch(msg.str());
  }
  if (p_net.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t n = 0; n < p_net.size(); ++n)
    for (int k = 0; k < 9; ++k) {
      const double d = p_net[n][k] - p_u[n][k];
      s += d * d;
    }
  return s / static_cast<double>(p_net.size());
}

double traction_mismatch(const ad::Mat3<double>& P, const std::array<double, 3>& normal,
                         const std::array<double, 3>& traction) {
  if (normal[0] == 0.0 && normal[1] == 0.0 && normal[2] == 0.0) {
    throw MissingNormal("traction_mismatch: zero normal");
  }
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double r = P[3 * i] * normal[0] + P[3 * i + 1] * normal[1] + P[3 * i + 2] * normal[2] -
                     traction[i];
    s += r * r;
  }
  return s;
}

double total_loss(const TermArray& terms, const TermArray& weights, const TermMask& mask) {
  double s = 0.0;
  for (int i = 0; i < kTermCount; ++i)
    if (mask[i]) s += weights[i] * terms[i];
  return s;
}

}  // namespace hyperpinn::loss
