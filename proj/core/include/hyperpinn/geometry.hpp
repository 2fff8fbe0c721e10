#pragma once

#include <array>
#include <string_view>

namespace hyperpinn {

enum class Face { XMinus, XPlus, YMinus, YPlus, ZMinus, ZPlus };

inline constexpr std::array<Face, 6> kAllFaces{Face::XMinus, Face::XPlus, Face::YMinus,
                                               Face::YPlus,  Face::ZMinus, Face::ZPlus};

constexpr int face_axis(Face f) { return static_cast<int>(f) / 2; }
constexpr bool face_is_upper(Face f) { return static_cast<int>(f) % 2 == 1; }
constexpr int face_index(Face f) { return static_cast<int>(f); }

// Outward unit normal of an axis-aligned box face.
constexpr std::array<double, 3> face_normal(Face f) {
  std::array<double, 3> n{0.0, 0.0, 0.0};
  n[face_axis(f)] = face_is_upper(f) ? 1.0 : -1.0;
  return n;
}

// The two in-plane axes of a face, in increasing order.
constexpr std::array<int, 2> face_tangent_axes(Face f) {
  switch (face_axis(f)) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
  }
}

std::string_view face_name(Face f);
bool parse_face(std::string_view name, Face& out);

// Axis-aligned box [origin, origin + lengths].
struct Box {
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  std::array<double, 3> lengths{1.0, 1.0, 1.0};

  double lower(int axis) const { return origin[axis]; }
  double upper(int axis) const { return origin[axis] + lengths[axis]; }
  double volume() const { return lengths[0] * lengths[1] * lengths[2]; }
};

}  // namespace hyperpinn
