#include "hyperpinn/bvp/point_sets.hpp"

#include <sstream>

#include "hyperpinn/bvp/quadrature.hpp"
#include "hyperpinn/error.hpp"

namespace hyperpinn::bvp {

void BoxDomain::validate() const {
  for (int k = 0; k < 3; ++k) {
    if (!(box.lengths[k] > 0.0)) {
      throw DomainError("BoxDomain: lengths must be positive");
    }
    if (counts[k] % 2 == 0) {
      std::ostringstream msg;
      msg << "BoxDomain: grid count " << counts[k] << " along axis " << k << " is even";
      throw EvenCount(msg.str());
    }
    if (counts[k] < 3) throw DomainError("BoxDomain: grid counts must be at least 3");
  }
}

bool PointSets::on_face(long n, Face f) const {
  const int axis = face_axis(f);
  const long stride = axis == 0 ? 1 : (axis == 1 ? domain.counts[0] : domain.counts[0] * domain.counts[1]);
  const long idx = (n / stride) % domain.counts[axis];
  return face_is_upper(f) ? idx == domain.counts[axis] - 1 : idx == 0;
}

PointSets build_point_sets(const BoxDomain& domain) {
  domain.validate();
  PointSets ps;
  ps.domain = domain;
  const auto& c = domain.counts;
  std::array<std::vector<double>, 3> w1;
  std::array<std::vector<double>, 3> x1;
  for (int a = 0; a < 3; ++a) {
    const double h = domain.spacing(a);
    w1[a] = simpson_weights_1d(c[a], h);
    x1[a].resize(static_cast<std::size_t>(c[a]));
    for (int i = 0; i < c[a]; ++i) {
      // last node pinned to the upper bound exactly
      x1[a][i] = i == c[a] - 1 ? domain.box.upper(a) : domain.box.lower(a) + i * h;
    }
  }

  const long n = domain.node_count();
  ps.points.resize(3, n);
  ps.volume_weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < c[2]; ++k) {
    for (int j = 0; j < c[1]; ++j) {
      for (int i = 0; i < c[0]; ++i) {
        const long id = domain.node(i, j, k);
        ps.points(0, id) = x1[0][i];
        ps.points(1, id) = x1[1][j];
        ps.points(2, id) = x1[2][k];
        ps.volume_weights[id] = w1[0][i] * w1[1][j] * w1[2][k];
        const bool inside =
            i > 0 && i < c[0] - 1 && j > 0 && j < c[1] - 1 && k > 0 && k < c[2] - 1;
        (inside ? ps.interior : ps.boundary).push_back(id);
      }
    }
  }

  for (Face f : kAllFaces) {
    FaceGrid& g = ps.faces[face_index(f)];
    g.face = f;
    const int axis = face_axis(f);
    const int fixed = face_is_upper(f) ? c[axis] - 1 : 0;
    const auto [ta, tb] = face_tangent_axes(f);
    for (int q = 0; q < c[tb]; ++q) {
      for (int p = 0; p < c[ta]; ++p) {
        std::array<int, 3> idx{};
        idx[axis] = fixed;
        idx[ta] = p;
        idx[tb] = q;
        g.nodes.push_back(domain.node(idx[0], idx[1], idx[2]));
        g.weights.push_back(w1[ta][p] * w1[tb][q]);
      }
    }
  }
  return ps;
}

}  // namespace hyperpinn::bvp
