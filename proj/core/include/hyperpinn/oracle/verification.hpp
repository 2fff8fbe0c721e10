#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperpinn/mat/materials.hpp"

namespace hyperpinn::oracle {

struct SuiteResult {
  std::string name;
  double max_error = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

// d(total loss)/d(phi) of the six-term loss (uniform weights) on a 2 x 8
// network and a 5^3 grid against central differences, step 1e-6.
SuiteResult check_loss_gradient(std::uint64_t seed);

// Spatial Hessians of all 12 network outputs at random points against
// central differences (step 1e-5) of the analytic spatial gradients.
SuiteResult check_spatial_hessian(std::uint64_t seed);

// P = dpsi/dF on random states with entries in I +- 0.3, step 1e-6.
SuiteResult check_material_gradient(const mat::Material& material, std::uint64_t seed,
                                    int trials = 100);

// Spatial gradient of the Fourier features against the closed form.
SuiteResult check_feature_gradient(std::uint64_t seed);

std::vector<SuiteResult> gradient_suites(std::uint64_t seed);

}  // namespace hyperpinn::oracle
