#pragma once

#include <Eigen/Core>

#include <array>
#include <vector>

#include "hyperpinn/geometry.hpp"

namespace hyperpinn::bvp {

// Box with an odd Simpson grid along every axis.
struct BoxDomain {
  Box box;
  std::array<int, 3> counts{3, 3, 3};

  void validate() const;
  double spacing(int axis) const { return box.lengths[axis] / (counts[axis] - 1); }
  long node_count() const { return static_cast<long>(counts[0]) * counts[1] * counts[2]; }
  // Flat index of grid node (i, j, k); i runs fastest.
  long node(int i, int j, int k) const {
    return i + static_cast<long>(counts[0]) * (j + static_cast<long>(counts[1]) * k);
  }
};

// Nodes of one face and their 2D Simpson weights.
struct FaceGrid {
  Face face = Face::XMinus;
  std::vector<long> nodes;
  std::vector<double> weights;
};

struct PointSets {
  BoxDomain domain;
  Eigen::Matrix3Xd points;             // every grid node (X_Pi)
  std::vector<double> volume_weights;  // tensor-product Simpson weights
  std::vector<long> interior;          // nodes with all indices strictly inside
  std::vector<long> boundary;          // the remaining nodes, ascending
  std::array<FaceGrid, 6> faces;       // indexed by face_index

  std::array<double, 3> point(long n) const { return {points(0, n), points(1, n), points(2, n)}; }
  // True if node n lies on face f.
  bool on_face(long n, Face f) const;
};

PointSets build_point_sets(const BoxDomain& domain);

}  // namespace hyperpinn::bvp
