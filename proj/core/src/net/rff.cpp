#include "hyperpinn/net/rff.hpp"

#include <numbers>
#include <random>

#include "hyperpinn/error.hpp"

namespace hyperpinn::net {

RffMap RffMap::sample(int m, double sigma, std::uint64_t seed) {
  if (m <= 0) {
    throw ShapeMismatch("RffMap: feature count must be positive");
  }
  if (!(sigma > 0.0)) {
    throw DomainError("RffMap: sigma must be positive");
  }
  RffMap map;
  map.sigma = sigma;
  map.seed = seed;
  map.frequencies.resize(m, 3);
  map.coefficients = Eigen::VectorXd::Ones(m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < 3; ++k) map.frequencies(i, k) = normal(rng);
  }
  return map;
}

ad::Jet rff_apply(ad::Tape& tape, const RffMap& map, const std::array<ad::Jet, 3>& x) {
  const double two_pi = 2.0 * std::numbers::pi;
  ad::Jet phase;
  for (int k = 0; k < 3; ++k) {
    const ad::Var column = tape.constant(two_pi * map.frequencies.col(k).array());
    ad::Jet term = ad::matmul(column, x[k]);
    phase = k == 0 ? term : phase + term;
  }
  ad::Jet c = ad::cos(phase);
  ad::Jet s = ad::sin(phase);
  if (!(map.coefficients.array() == 1.0).all()) {
    const ad::Var diag = tape.constant(map.coefficients.asDiagonal().toDenseMatrix().array());
    c = ad::matmul(diag, c);
    s = ad::matmul(diag, s);
  }
  return ad::interleave(c, s);
}

}  // namespace hyperpinn::net
