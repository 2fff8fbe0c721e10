#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>

#include "hyperpinn/ad/jet.hpp"

namespace hyperpinn::net {

// Gaussian random Fourier feature map
//   gamma(X) = [a_1 cos(2 pi h_1.X), a_1 sin(2 pi h_1.X), ..., a_m sin(2 pi h_m.X)]
// with every entry of h drawn from N(0, sigma^2).
struct RffMap {
  Eigen::MatrixXd frequencies;  // m x 3
  Eigen::VectorXd coefficients;  // m
  double sigma = 1.0;
  std::uint64_t seed = 0;

  // Draws m frequency vectors; coefficients are all 1.
  static RffMap sample(int m, double sigma, std::uint64_t seed);

  int feature_count() const { return static_cast<int>(frequencies.rows()); }
  int output_width() const { return 2 * feature_count(); }
};

// Applies the map to the lifted coordinates X (each 1 x n); returns a
// (2m x n) jet with rows interleaved cos/sin per frequency.
ad::Jet rff_apply(ad::Tape& tape, const RffMap& map, const std::array<ad::Jet, 3>& x);

}  // namespace hyperpinn::net
