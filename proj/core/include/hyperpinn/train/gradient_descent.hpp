#pragma once

#include <span>
#include <vector>

#include "hyperpinn/train/lbfgs.hpp"

namespace hyperpinn::train {

// phi' = phi - beta * gradient
std::vector<double> gd_step(std::span<const double> phi, std::span<const double> gradient,
                            double beta);

struct GdConfig {
  double step = 1e-3;
  int max_iterations = 1000;
  double gradient_tolerance = 1e-8;

  void validate() const;
};

// Fixed-step gradient descent with the same callback protocol as LBFGS.
// Stops with LineSearchFailure if an iterate becomes non-finite (the last
// finite iterate is kept).
LbfgsResult gradient_descent_minimize(const Objective& f, std::vector<double> x0,
                                      const GdConfig& config = {},
                                      const IterationCallback& callback = {});

}  // namespace hyperpinn::train
