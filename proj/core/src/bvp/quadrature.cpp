#include "hyperpinn/bvp/quadrature.hpp"

#include <sstream>

#include "hyperpinn/error.hpp"

namespace hyperpinn::bvp {

std::vector<double> simpson_weights_1d(int n, double h) {
  if (n % 2 == 0) {
    std::ostringstream msg;
    msg << "simpson_weights_1d: node count " << n << " is even";
    throw EvenCount(msg.str());
  }
  if (n < 3) throw DomainError("simpson_weights_1d: need at least 3 nodes");
  if (!(h > 0.0)) throw DomainError("simpson_weights_1d: spacing must be positive");
  std::vector<double> w(static_cast<std::size_t>(n));
  const double third = h / 3.0;
  for (int i = 0; i < n; ++i) {
    const double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[static_cast<std::size_t>(i)] = c * third;
  }
  return w;
}

double integrate_volume(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    std::ostringstream msg;
    msg << "integrate_volume: " << values.size() << " values for " << weights.size()
        << " weights";
    throw LengthMismatch(msg.str());
  }
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * weights[i];
  return s;
}

}  // namespace hyperpinn::bvp
