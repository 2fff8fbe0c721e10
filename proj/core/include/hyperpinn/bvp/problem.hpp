#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperpinn/bvp/point_sets.hpp"
#include "hyperpinn/mat/materials.hpp"
#include "hyperpinn/net/bc_enforcer.hpp"

namespace hyperpinn::bvp {

// Which loss terms take part in training.
//   Full: all six.  Dem: energy only.  Dcm: u-branch traction and interior residuals.
enum class LossMask { Full, Dem, Dcm };

std::string_view mask_name(LossMask m);
bool parse_mask(std::string_view name, LossMask& out);

// Prescribed traction on a rectangle of one face. Bounds are absolute
// coordinates along the face's two tangent axes (face_tangent_axes order).
struct TractionPatch {
  Face face = Face::XPlus;
  std::array<double, 2> lower{};
  std::array<double, 2> upper{};
  std::array<double, 3> traction{};  // Pa

  static TractionPatch whole_face(Face f, const Box& box, std::array<double, 3> t);
  bool contains(const std::array<double, 3>& x) const;
};

struct ProblemSpec {
  std::string name;
  BoxDomain domain;
  mat::Material material;
  std::vector<net::DirichletFace> dirichlet;
  net::AffineLift lift;
  std::vector<TractionPatch> patches;
  std::array<double, 3> body_force{};  // N/m^3, uniform
  LossMask mask = LossMask::Full;
  double load_scale = 1.0;
  // Displacement gradient of the exact affine solution, when one is known.
  std::optional<std::array<double, 9>> exact_gradient;

  void validate() const;
  // Hard-BC operator with the lift scaled by load_scale.
  net::BcEnforcer enforcer() const;
  bool fully_fixed(Face f) const;
  // Prescribed traction at a point of face f (before load scaling).
  std::array<double, 3> traction_at(Face f, const std::array<double, 3>& x) const;
  // Exact displacement at x (throws if there is no exact solution).
  std::array<double, 3> exact_displacement(const std::array<double, 3>& x) const;
};

// Points where the natural boundary condition P N = t is tested. A node on
// an edge appears once per traction face. Faces fixing all components, and
// nodes touching such a face, are skipped; components fixed on the face
// itself are excluded through `components`.
struct TractionSet {
  std::vector<long> nodes;
  Eigen::Matrix3Xd normals;
  Eigen::Matrix3Xd tractions;   // scaled by load_scale
  Eigen::Matrix3Xd components;  // 1 where the component is tested, else 0

  long size() const { return static_cast<long>(nodes.size()); }
};

TractionSet build_traction_set(const ProblemSpec& problem, const PointSets& points);

// Per-node external load (3 x N): volume weight * f_B plus the surface
// Simpson weight * t over traction faces, scaled by load_scale. The
// external work is sum_n u_n . load_n.
Eigen::Matrix3Xd external_loads(const ProblemSpec& problem, const PointSets& points);

// Presets: nh_cantilever_traction, lp_cantilever_displacement,
// nh_simple_shear, nh_localized_traction. Throws UnknownPreset.
ProblemSpec preset(std::string_view name);
std::vector<std::string> preset_names();

inline constexpr std::array<double, 3> kBeamLengths{4.0, 1.0, 1.0};
inline constexpr std::array<double, 3> kCubeLengths{1.0, 1.0, 1.0};

ProblemSpec nh_cantilever_traction(double traction = -5.0,
                                   std::array<double, 3> lengths = kBeamLengths);
ProblemSpec lp_cantilever_displacement(double displacement = -1.0,
                                       std::array<double, 3> lengths = kBeamLengths);
ProblemSpec nh_simple_shear(double gamma = 0.5, std::array<double, 3> lengths = kCubeLengths);
// The patch is a centred rectangle covering 4% of the loaded face.
ProblemSpec nh_localized_traction(double traction = 300.0,
                                  std::array<double, 3> lengths = kCubeLengths);

}  // namespace hyperpinn::bvp
