#include "hyperpinn/ad/fd_check.hpp"

#include <algorithm>
#include <cmath>

#include "hyperpinn/error.hpp"

namespace hyperpinn::ad {

std::vector<double> central_difference(const ScalarFunction& f, std::span<const double> x,
                                       double h) {
  if (!(h > 0.0)) {
    throw DomainError("central_difference: step must be positive");
  }
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    out[i] = (fp - fm) / (2.0 * h);
  }
  return out;
}

FdReport fd_check(const ScalarFunction& f, std::span<const double> analytic,
                  std::span<const double> x, double h, double floor) {
  if (analytic.size() != x.size()) {
    throw LengthMismatch("fd_check: gradient and point lengths differ");
  }
  const std::vector<double> numeric = central_difference(f, x, h);
  FdReport report;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double denom = std::max(std::abs(analytic[i]), floor);
    const double err = std::abs(analytic[i] - numeric[i]) / denom;
    if (i == 0 || err > report.max_relative_error) {
      report.max_relative_error = err;
      report.worst_index = i;
      report.analytic = analytic[i];
      report.numeric = numeric[i];
    }
  }
  return report;
}

}  // namespace hyperpinn::ad
