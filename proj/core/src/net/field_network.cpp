#include "hyperpinn/net/field_network.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "hyperpinn/error.hpp"

namespace hyperpinn::net {

ad::ParamLayout MlpSpec::layout() const {
  std::vector<ad::LayerShape> layers;
  int fan_in = input_width;
  for (int width : hidden) {
    layers.push_back({fan_in, width});
    fan_in = width;
  }
  layers.push_back({fan_in, output_width});
  return ad::ParamLayout(std::move(layers));
}

FieldNetwork::FieldNetwork(RffMap rff, std::vector<int> hidden, double stress_scale)
    : rff_(std::move(rff)), stress_scale_(stress_scale) {
  if (!(stress_scale > 0.0) || !std::isfinite(stress_scale)) {
    throw DomainError("FieldNetwork: stress scale must be positive");
  }
  mlp_.input_width = rff_.output_width();
  mlp_.hidden = std::move(hidden);
  layout_ = mlp_.layout();
}

ad::ParamVector FieldNetwork::initialize(std::uint64_t seed) const {
  ad::ParamVector phi{layout_, std::vector<double>(layout_.size(), 0.0)};
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < layout_.layers().size(); ++l) {
    const ad::LayerShape& shape = layout_.layers()[l];
    const double r = std::sqrt(6.0 / (shape.fan_in + shape.fan_out));
    std::uniform_real_distribution<double> uniform(-r, r);
    const std::size_t off = layout_.weight_offset(l);
    for (std::size_t k = 0; k < shape.weight_count(); ++k) phi.values[off + k] = uniform(rng);
  }
  return phi;
}

NetworkOutput FieldNetwork::forward(ad::Tape& tape, const std::array<ad::Jet, 3>& x,
                                    const ad::ParamVector& phi, bool trainable) const {
  if (!(phi.layout == layout_) || phi.values.size() != layout_.size()) {
    std::ostringstream msg;
    msg << "FieldNetwork::forward: parameter vector of length " << phi.values.size()
        << " does not match the network layout (" << layout_.size() << ")";
    throw ShapeMismatch(msg.str());
  }

  ad::Jet h = rff_apply(tape, rff_, x);
  const auto& layers = layout_.layers();
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const ad::LayerShape& shape = layers[l];
    const std::size_t w_off = layout_.weight_offset(l);
    const std::size_t b_off = layout_.bias_offset(l);
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    ad::Array w = Eigen::Map<const RowMajor>(phi.values.data() + w_off, shape.fan_out,
                                             shape.fan_in)
                      .array();
    ad::Array b = Eigen::Map<const Eigen::VectorXd>(phi.values.data() + b_off, shape.fan_out)
                      .array();
    const ad::Var wv = tape.parameter(std::move(w), static_cast<std::int64_t>(w_off), trainable);
    const ad::Var bv = tape.parameter(std::move(b), static_cast<std::int64_t>(b_off), trainable);
    ad::Jet z = ad::add_bias(ad::matmul(wv, h), bv);
    const bool last = l + 1 == layers.size();
    h = last ? z : ad::tanh(z);
  }

  NetworkOutput out;
  for (int i = 0; i < 3; ++i) out.y_u[i] = ad::row(h, i);
  for (int k = 0; k < 9; ++k) out.y_P[k] = ad::row(h, 3 + k) * stress_scale_;
  return out;
}

}  // namespace hyperpinn::net
