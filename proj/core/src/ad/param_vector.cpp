#include "hyperpinn/ad/param_vector.hpp"

#include <sstream>

#include "hyperpinn/error.hpp"

namespace hyperpinn::ad {

ParamLayout::ParamLayout(std::vector<LayerShape> layers) : layers_(std::move(layers)) {
  offsets_.reserve(layers_.size());
  for (const LayerShape& l : layers_) {
    if (l.fan_in <= 0 || l.fan_out <= 0) {
      throw ShapeMismatch("ParamLayout: layer widths must be positive");
    }
    offsets_.push_back(total_);
    total_ += l.size();
  }
}

bool ParamLayout::operator==(const ParamLayout& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].fan_in != other.layers_[i].fan_in ||
        layers_[i].fan_out != other.layers_[i].fan_out) {
      return false;
    }
  }
  return true;
}

void ParamVector::validate() const {
  if (values.size() != layout.size()) {
    std::ostringstream msg;
    msg << "ParamVector: " << values.size() << " values for a layout of " << layout.size();
    throw ShapeMismatch(msg.str());
  }
}

}  // namespace hyperpinn::ad
