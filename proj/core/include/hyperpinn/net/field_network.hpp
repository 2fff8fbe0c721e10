#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hyperpinn/ad/jet.hpp"
#include "hyperpinn/ad/param_vector.hpp"
#include "hyperpinn/net/rff.hpp"

namespace hyperpinn::net {

inline constexpr int kOutputWidth = 12;  // 3 displacement + 9 stress components

enum class Activation { Tanh };

struct MlpSpec {
  int input_width = 0;
  std::vector<int> hidden;
  int output_width = kOutputWidth;
  Activation activation = Activation::Tanh;

  ad::ParamLayout layout() const;
};

// Raw network outputs before boundary conditions. y_P is already multiplied
// by the stress scale; row-major, y_P[3 * i + j] ~ P_ij.
struct NetworkOutput {
  std::array<ad::Jet, 3> y_u;
  std::array<ad::Jet, 9> y_P;
};

class FieldNetwork {
 public:
  FieldNetwork(RffMap rff, std::vector<int> hidden, double stress_scale = 1.0);

  const RffMap& rff() const { return rff_; }
  const MlpSpec& mlp() const { return mlp_; }
  double stress_scale() const { return stress_scale_; }
  const ad::ParamLayout& layout() const { return layout_; }

  // Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
  ad::ParamVector initialize(std::uint64_t seed) const;

  // Evaluates the network at lifted coordinates x (each 1 x n). The output
  // jets have the order of x. With trainable = false the parameters are
  // recorded as constants (no reverse sweep needed).
  NetworkOutput forward(ad::Tape& tape, const std::array<ad::Jet, 3>& x,
                        const ad::ParamVector& phi, bool trainable = true) const;

 private:
  RffMap rff_;
  MlpSpec mlp_;
  ad::ParamLayout layout_;
  double stress_scale_;
};

}  // namespace hyperpinn::net
