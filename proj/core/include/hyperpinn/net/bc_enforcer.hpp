#pragma once

#include <array>
#include <vector>

#include "hyperpinn/ad/jet.hpp"
#include "hyperpinn/geometry.hpp"

namespace hyperpinn::net {

// Displacement components fixed on one face of the box.
struct DirichletFace {
  Face face = Face::XMinus;
  std::array<bool, 3> components{true, true, true};
};

// Affine displacement field u(X) = G X + c used as the Dirichlet lift; it
// must equal the prescribed values on every constrained face.
struct AffineLift {
  std::array<double, 9> gradient{};  // row-major G
  std::array<double, 3> offset{};

  AffineLift scaled(double factor) const;
};

struct HardBcFields {
  std::array<ad::Jet, 3> u;
  std::array<ad::Jet, 9> P;
};

// Hard enforcement of displacement data:
//   u = A(X) + B(X) o y_u,   P = y_P.
// A is the affine lift. B_c is a product of normalized face distances over
// the faces constraining component c: (X_k - lo)/L, (hi - X_k)/L, or
// 4 (X_k - lo)(hi - X_k)/L^2 when both opposite faces constrain c.
class BcEnforcer {
 public:
  BcEnforcer() = default;
  BcEnforcer(Box box, std::vector<DirichletFace> faces, AffineLift lift);

  const Box& box() const { return box_; }
  const std::vector<DirichletFace>& faces() const { return faces_; }
  const AffineLift& lift() const { return lift_; }

  // True when component c is fixed on face f.
  bool constrains(Face f, int component) const;
  bool has_constraints() const;

  std::array<ad::Jet, 3> lift_jets(const std::array<ad::Jet, 3>& x) const;
  std::array<ad::Jet, 3> mask_jets(const std::array<ad::Jet, 3>& x) const;

  HardBcFields apply(const std::array<ad::Jet, 3>& x, const std::array<ad::Jet, 3>& y_u,
                     const std::array<ad::Jet, 9>& y_P) const;

  // Plain-double evaluation at one point.
  std::array<double, 3> lift_value(const std::array<double, 3>& x) const;
  std::array<double, 3> mask_value(const std::array<double, 3>& x) const;

 private:
  Box box_;
  std::vector<DirichletFace> faces_;
  AffineLift lift_;
  // constrained_[c][axis][0 = lower face, 1 = upper face]
  std::array<std::array<std::array<bool, 2>, 3>, 3> constrained_{};
};

}  // namespace hyperpinn::net
