#pragma once

// Naive CoV weights recomputed from a stored loss history; the streaming
// implementation must agree with this.

#include <cmath>
#include <vector>

namespace hyperpinn::testing {

struct BruteCov {
  std::vector<double> mean_ratio;
  std::vector<double> ratio_std;
  std::vector<double> weights;
};

// history[t][i] = L_i at iteration t + 1; all terms active and unsigned.
inline BruteCov brute_cov(const std::vector<std::vector<double>>& history) {
  const std::size_t n = history.front().size();
  const std::size_t T = history.size();
  BruteCov out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  double z = 0.0;
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> ratios;
    double sum = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const double prev_mean = t == 0 ? 0.0 : sum / static_cast<double>(t);
      ratios.push_back(t == 0 || prev_mean == 0.0 ? 1.0 : history[t][i] / prev_mean);
      sum += history[t][i];
    }
    double m = 0.0;
    for (double r : ratios) m += r;
    m /= static_cast<double>(T);
    double v = 0.0;
    for (double r : ratios) v += (r - m) * (r - m);
    v /= static_cast<double>(T);
    out.mean_ratio[i] = m;
    out.ratio_std[i] = std::sqrt(v);
    c[i] = out.ratio_std[i] / m;
    z += c[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.weights[i] = z > 0.0 ? c[i] / z : 1.0 / static_cast<double>(n);
  }
  return out;
}

}  // namespace hyperpinn::testing
