#pragma once

// Isotropic hyperelastic laws: strain energy psi(F), first Piola-Kirchhoff
// stress P(F) (closed form), Cauchy push-forward and von Mises intensity.
//
// The evaluators are templates over the entry type so the same code runs on
// plain doubles (oracles, post-processing) and on spatial jets (losses).

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hyperpinn/ad/mat3.hpp"
#include "hyperpinn/error.hpp"

namespace hyperpinn::mat {

using ad::Mat3;

// J at or below this is an inverted (inadmissible) state.
inline constexpr double kInversionFloor = 1e-12;
// J below this is admissible but reported through the warning hook.
inline constexpr double kNearInversion = 0.05;
// I1 floor for the power terms of the Lopez-Pamies energy.
inline constexpr double kInvariantFloor = 1e-12;

struct NeoHookean {
  double lambda = 0.0;  // Pa
  double mu = 0.0;      // Pa

  void validate() const;
};

struct LopezPamiesTerm {
  double alpha = 1.0;
  double mu = 0.0;  // Pa
};

struct LopezPamies {
  std::vector<LopezPamiesTerm> terms;
  double lambda = 0.0;  // Pa

  double mu_sum() const;
  void validate() const;
};

using Material = std::variant<NeoHookean, LopezPamies>;

std::string material_name(const Material& m);
// Small-strain shear modulus: mu or sum of mu_r.
double shear_modulus(const Material& m);
void validate(const Material& m);

// Called with (min J, column) whenever a state with J < kNearInversion is
// built. Defaults to a no-op; the CLI installs a logger.
using NearInversionHook = std::function<void(double, long)>;
void set_near_inversion_hook(NearInversionHook hook);
void report_near_inversion(double min_j, long where);

template <class T>
struct DeformationState {
  Mat3<T> F;
  T J;
  T I1;
  Mat3<T> F_inv_T;
};

template <class T>
Mat3<T> right_cauchy_green(const Mat3<T>& F) {
  return ad::matmul(ad::transpose(F), F);
}

// F = I + grad_u, with J, I1 = tr(F^T F) and F^{-T}. Throws InvertedState
// when J <= kInversionFloor anywhere in the batch.
template <class T>
DeformationState<T> deformation_gradient(const Mat3<T>& grad_u) {
  DeformationState<T> s{grad_u, T{}, T{}, {}};
  for (int i = 0; i < 3; ++i) s.F[4 * i] = s.F[4 * i] + 1.0;
  s.J = ad::det(s.F);
  long where = 0;
  const double min_j = ad::min_value(s.J, &where);
  if (!(min_j > kInversionFloor)) {
    std::ostringstream msg;
    msg << "inverted deformation: J = " << min_j << " at point " << where;
    throw InvertedState(msg.str(), where);
  }
  if (min_j < kNearInversion) report_near_inversion(min_j, where);
  s.I1 = s.F[0] * s.F[0];
  for (int k = 1; k < 9; ++k) s.I1 = s.I1 + s.F[k] * s.F[k];
  s.F_inv_T = ad::inverse_transpose_with(s.F, s.J);
  return s;
}

// psi = 1/2 lambda (ln J)^2 - mu ln J + 1/2 mu (I1 - 3)
template <class T>
T strain_energy(const NeoHookean& m, const DeformationState<T>& s) {
  using std::log;
  const T ln_j = log(s.J);
  return ln_j * ln_j * (0.5 * m.lambda) - ln_j * m.mu + (s.I1 - 3.0) * (0.5 * m.mu);
}

// P = mu F + (lambda ln J - mu) F^{-T}
template <class T>
Mat3<T> first_piola(const NeoHookean& m, const DeformationState<T>& s) {
  using std::log;
  const T coeff = log(s.J) * m.lambda - m.mu;
  Mat3<T> P;
  for (int k = 0; k < 9; ++k) P[k] = s.F[k] * m.mu + coeff * s.F_inv_T[k];
  return P;
}

namespace detail {

inline void require_nonzero_alpha(const LopezPamies& m) {
  for (const auto& t : m.terms) {
    if (t.alpha == 0.0) throw DomainError("Lopez-Pamies: alpha_r must be nonzero");
  }
}

template <class T>
void require_invariant_floor(const T& i1) {
  if (!(ad::min_value(i1) > kInvariantFloor)) {
    throw DomainError("Lopez-Pamies: I1 below floor");
  }
}

}  // namespace detail

// psi = sum_r 3^{1-a_r}/(2 a_r) mu_r (I1^{a_r} - 3^{a_r}) - sum_r mu_r ln J
//       + lambda/2 (J - 1)^2
template <class T>
T strain_energy(const LopezPamies& m, const DeformationState<T>& s) {
  using std::exp;
  using std::log;
  detail::require_nonzero_alpha(m);
  detail::require_invariant_floor(s.I1);
  const T ln_i1 = log(s.I1);
  const T jm1 = s.J - 1.0;
  T psi = jm1 * jm1 * (0.5 * m.lambda) - log(s.J) * m.mu_sum();
  for (const auto& t : m.terms) {
    const double c = std::pow(3.0, 1.0 - t.alpha) / (2.0 * t.alpha) * t.mu;
    psi = psi + (exp(ln_i1 * t.alpha) - std::pow(3.0, t.alpha)) * c;
  }
  return psi;
}

// P = sum_r 3^{1-a_r} mu_r I1^{a_r - 1} F - sum_r mu_r F^{-T} + lambda (J^2 - J) F^{-T}
template <class T>
Mat3<T> first_piola(const LopezPamies& m, const DeformationState<T>& s) {
  using std::exp;
  using std::log;
  detail::require_nonzero_alpha(m);
  detail::require_invariant_floor(s.I1);
  const T ln_i1 = log(s.I1);
  if (m.terms.empty()) throw DomainError("Lopez-Pamies: no terms");
  auto term = [&](const LopezPamiesTerm& t) {
    return exp(ln_i1 * (t.alpha - 1.0)) * (std::pow(3.0, 1.0 - t.alpha) * t.mu);
  };
  T f_coeff = term(m.terms.front());
  for (std::size_t r = 1; r < m.terms.size(); ++r) f_coeff = f_coeff + term(m.terms[r]);
  const T inv_coeff = (s.J * s.J - s.J) * m.lambda - m.mu_sum();
  Mat3<T> P;
  for (int k = 0; k < 9; ++k) P[k] = f_coeff * s.F[k] + inv_coeff * s.F_inv_T[k];
  return P;
}

template <class T>
T strain_energy(const Material& m, const DeformationState<T>& s) {
  return std::visit([&](const auto& law) { return strain_energy(law, s); }, m);
}

template <class T>
Mat3<T> first_piola(const Material& m, const DeformationState<T>& s) {
  return std::visit([&](const auto& law) { return first_piola(law, s); }, m);
}

// S = (1/J) P F^T
template <class T>
Mat3<T> cauchy(const Mat3<T>& P, const Mat3<T>& F) {
  const T J = ad::det(F);
  long where = 0;
  if (!(ad::min_value(J, &where) > kInversionFloor)) {
    throw InvertedState("cauchy: inverted deformation", where);
  }
  const T r = 1.0 / J;
  Mat3<T> S = ad::matmul(P, ad::transpose(F));
  for (auto& x : S) x = x * r;
  return S;
}

// sqrt(3/2 dev(S):dev(S)) of the symmetrized stress.
double von_mises(const Mat3<double>& S);

}  // namespace hyperpinn::mat
