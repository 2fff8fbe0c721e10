#include "hyperpinn/mat/materials.hpp"

#include <mutex>

namespace hyperpinn::mat {

void NeoHookean::validate() const {
  if (!(mu > 0.0) || !(lambda >= 0.0)) {
    throw DomainError("neo_hookean: need mu > 0 and lambda >= 0");
  }
}

double LopezPamies::mu_sum() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.mu;
  return s;
}

void LopezPamies::validate() const {
  if (terms.empty()) throw DomainError("lopez_pamies: at least one term required");
  if (!(mu_sum() > 0.0)) throw DomainError("lopez_pamies: sum of mu_r must be positive");
  if (!(lambda >= 0.0)) throw DomainError("lopez_pamies: lambda must be non-negative");
  for (const auto& t : terms) {
    if (t.alpha == 0.0) throw DomainError("lopez_pamies: alpha_r must be nonzero");
  }
}

std::string material_name(const Material& m) {
  return std::holds_alternative<NeoHookean>(m) ? "neo_hookean" : "lopez_pamies";
}

double shear_modulus(const Material& m) {
  if (const auto* nh = std::get_if<NeoHookean>(&m)) return nh->mu;
  return std::get<LopezPamies>(m).mu_sum();
}

void validate(const Material& m) {
  std::visit([](const auto& law) { law.validate(); }, m);
}

namespace {
std::mutex g_hook_mutex;
NearInversionHook g_hook;
}  // namespace

void set_near_inversion_hook(NearInversionHook hook) {
  std::lock_guard lock(g_hook_mutex);
  g_hook = std::move(hook);
}

void report_near_inversion(double min_j, long where) {
  std::lock_guard lock(g_hook_mutex);
  if (g_hook) g_hook(min_j, where);
}

double von_mises(const Mat3<double>& S) {
  Mat3<double> s;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s[3 * i + j] = 0.5 * (S[3 * i + j] + S[3 * j + i]);
  const double p = (s[0] + s[4] + s[8]) / 3.0;
  s[0] -= p;
  s[4] -= p;
  s[8] -= p;
  double dd = 0.0;
  for (double v : s) dd += v * v;
  return std::sqrt(1.5 * dd);
}

}  // namespace hyperpinn::mat
