#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hyperpinn::ad {

using ScalarFunction = std::function<double(std::span<const double>)>;

struct FdReport {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Compares `analytic` (the gradient of f at x) with central differences of
// step h. Per component: |analytic - fd| / max(|analytic|, floor).
FdReport fd_check(const ScalarFunction& f, std::span<const double> analytic,
                  std::span<const double> x, double h, double floor = 1e-8);

// Central-difference gradient of f at x.
std::vector<double> central_difference(const ScalarFunction& f, std::span<const double> x,
                                       double h);

}  // namespace hyperpinn::ad
