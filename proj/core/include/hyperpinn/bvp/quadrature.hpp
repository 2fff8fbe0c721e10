#pragma once

#include <span>
#include <vector>

namespace hyperpinn::bvp {

// Composite Simpson weights (h/3) [1, 4, 2, 4, ..., 4, 1] for n nodes.
// Throws EvenCount for even n, DomainError for n < 3 or h <= 0.
std::vector<double> simpson_weights_1d(int n, double h);

// sum_i values[i] * weights[i], accumulated left to right.
double integrate_volume(std::span<const double> values, std::span<const double> weights);

}  // namespace hyperpinn::bvp
