#pragma once

#include <cstddef>
#include <vector>

namespace hyperpinn::ad {

// Shape of one dense layer: W is fan_out x fan_in (row-major), b has fan_out
// entries. W precedes b in the flat vector.
struct LayerShape {
  int fan_in = 0;
  int fan_out = 0;

  std::size_t weight_count() const { return static_cast<std::size_t>(fan_in) * fan_out; }
  std::size_t size() const { return weight_count() + static_cast<std::size_t>(fan_out); }
};

class ParamLayout {
 public:
  ParamLayout() = default;
  explicit ParamLayout(std::vector<LayerShape> layers);

  const std::vector<LayerShape>& layers() const { return layers_; }
  std::size_t size() const { return total_; }
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + layers_[layer].weight_count();
  }

  bool operator==(const ParamLayout& other) const;

 private:
  std::vector<LayerShape> layers_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

// Flat array of all weights and biases.
struct ParamVector {
  ParamLayout layout;
  std::vector<double> values;

  // Throws ShapeMismatch when values.size() != layout.size().
  void validate() const;
};

}  // namespace hyperpinn::ad
