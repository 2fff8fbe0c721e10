#include "hyperpinn/loss/cov_weighting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyperpinn/error.hpp"

namespace hyperpinn::loss {

CovWeighting::CovWeighting(std::vector<bool> active, int signed_term, double epsilon)
    : active_(std::move(active)), signed_term_(signed_term), epsilon_(epsilon) {
  reset();
}

void CovWeighting::reset() {
  const std::size_t n = active_.size();
  t_ = 0;
  running_min_ = 0.0;
  mean_loss_.assign(n, 0.0);
  mean_ratio_.assign(n, 0.0);
  moment_.assign(n, 0.0);
  last_ratio_.assign(n, 0.0);
  tracked_.assign(n, 0.0);
  weights_.assign(n, 0.0);
  const auto count = std::count(active_.begin(), active_.end(), true);
  for (std::size_t i = 0; i < n; ++i)
    if (active_[i]) weights_[i] = 1.0 / static_cast<double>(count);
}

double CovWeighting::ratio_std(std::size_t i) const { return std::sqrt(std::max(moment_[i], 0.0)); }

const std::vector<double>& CovWeighting::update(std::span<const double> losses) {
  const std::size_t n = active_.size();
  if (losses.size() != n) {
    std::ostringstream msg;
    msg << "cov_update: " << losses.size() << " losses for " << n << " terms";
    throw LengthMismatch(msg.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (active_[i] && !std::isfinite(losses[i])) {
      std::ostringstream msg;
      msg << "cov_update: loss term " << i << " is not finite (" << losses[i] << ")";
      throw NonFiniteLoss(msg.str());
    }
  }

  ++t_;
  const double t = static_cast<double>(t_);
  const bool has_signed = signed_term_ >= 0 && static_cast<std::size_t>(signed_term_) < n &&
                          active_[static_cast<std::size_t>(signed_term_)];
  for (std::size_t i = 0; i < n; ++i) {
    if (!active_[i]) continue;
    double L = losses[i];
    if (has_signed && static_cast<int>(i) == signed_term_) {
      L = std::abs(t_ == 1 ? L : L - running_min_) + epsilon_;
    }
    tracked_[i] = L;
    double l = 1.0;
    if (t_ > 1 && mean_loss_[i] != 0.0) l = L / mean_loss_[i];
    last_ratio_[i] = l;

    mean_loss_[i] = (1.0 - 1.0 / t) * mean_loss_[i] + L / t;
    const double prev = mean_ratio_[i];
    mean_ratio_[i] = (1.0 - 1.0 / t) * prev + l / t;
    moment_[i] = (1.0 - 1.0 / t) * moment_[i] + (l - prev) * (l - mean_ratio_[i]) / t;
  }
  if (has_signed) {
    const double raw = losses[static_cast<std::size_t>(signed_term_)];
    running_min_ = t_ == 1 ? raw : std::min(running_min_, raw);
  }

  double z = 0.0;
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!active_[i] || mean_ratio_[i] == 0.0) continue;
    c[i] = ratio_std(i) / mean_ratio_[i];
    if (c[i] < kDegenerateCov) c[i] = 0.0;
    z += c[i];
  }
  if (z > 0.0 && std::isfinite(z)) {
    for (std::size_t i = 0; i < n; ++i) weights_[i] = c[i] / z;
  } else {
    const auto count = std::count(active_.begin(), active_.end(), true);
    for (std::size_t i = 0; i < n; ++i)
      weights_[i] = active_[i] ? 1.0 / static_cast<double>(count) : 0.0;
  }
  return weights_;
}

}  // namespace hyperpinn::loss
