#pragma once

#include <span>
#include <vector>

namespace hyperpinn::loss {

// Coefficient-of-variation loss weighting with streaming (Welford) moments.
//
// For each active term i at iteration t:
//   l_i   = L_i / mean(L_i up to t-1)          (l_i = 1 at t = 1)
//   mu_L, mu_l, M_l updated by the running recurrences
//   c_i   = sqrt(M_l) / mu_l,   alpha_i = c_i / sum_j c_j
// Inactive terms get weight 0 and keep no statistics. c_i below
// kDegenerateCov counts as zero; when every c_i is zero (t = 1, or a frozen
// history) the weights are uniform over active terms.
//
// A term flagged as signed (the potential energy) is tracked through the
// magnitude |L^t - min(L^1..L^{t-1})| + epsilon (|L^1| + epsilon at t = 1).
class CovWeighting {
 public:
  static constexpr double kSignedEpsilon = 1e-8;
  // c_i below this is recurrence roundoff on a constant history.
  static constexpr double kDegenerateCov = 1e-12;

  explicit CovWeighting(std::vector<bool> active, int signed_term = -1,
                        double epsilon = kSignedEpsilon);

  // Advances t by one and returns the new weights. Throws NonFiniteLoss.
  const std::vector<double>& update(std::span<const double> losses);
  void reset();

  const std::vector<double>& weights() const { return weights_; }
  long t() const { return t_; }
  std::size_t size() const { return active_.size(); }
  bool active(std::size_t i) const { return active_[i]; }

  double mean_loss(std::size_t i) const { return mean_loss_[i]; }
  double mean_ratio(std::size_t i) const { return mean_ratio_[i]; }
  double ratio_moment(std::size_t i) const { return moment_[i]; }
  double ratio_std(std::size_t i) const;
  double last_ratio(std::size_t i) const { return last_ratio_[i]; }
  // Value fed to the statistics for term i at the latest update.
  double tracked_loss(std::size_t i) const { return tracked_[i]; }

 private:
  std::vector<bool> active_;
  int signed_term_;
  double epsilon_;
  long t_ = 0;
  double running_min_ = 0.0;
  std::vector<double> mean_loss_;
  std::vector<double> mean_ratio_;
  std::vector<double> moment_;
  std::vector<double> last_ratio_;
  std::vector<double> tracked_;
  std::vector<double> weights_;
};

}  // namespace hyperpinn::loss
