#include "hyperpinn/geometry.hpp"

namespace hyperpinn {

namespace {
constexpr std::array<std::string_view, 6> kFaceNames{"x-", "x+", "y-", "y+", "z-", "z+"};
}

std::string_view face_name(Face f) { return kFaceNames[static_cast<std::size_t>(face_index(f))]; }

bool parse_face(std::string_view name, Face& out) {
  for (Face f : kAllFaces) {
    if (face_name(f) == name) {
      out = f;
      return true;
    }
  }
  return false;
}

}  // namespace hyperpinn
