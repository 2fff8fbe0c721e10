#include "hyperpinn/net/bc_enforcer.hpp"

#include "hyperpinn/error.hpp"

namespace hyperpinn::net {

AffineLift AffineLift::scaled(double factor) const {
  AffineLift out = *this;
  for (double& g : out.gradient) g *= factor;
  for (double& c : out.offset) c *= factor;
  return out;
}

BcEnforcer::BcEnforcer(Box box, std::vector<DirichletFace> faces, AffineLift lift)
    : box_(box), faces_(std::move(faces)), lift_(lift) {
  for (int k = 0; k < 3; ++k) {
    if (!(box_.lengths[k] > 0.0)) {
      throw DomainError("BcEnforcer: box lengths must be positive");
    }
  }
  for (const DirichletFace& f : faces_) {
    for (int c = 0; c < 3; ++c) {
      if (f.components[c]) {
        constrained_[c][face_axis(f.face)][face_is_upper(f.face) ? 1 : 0] = true;
      }
    }
  }
}

bool BcEnforcer::constrains(Face f, int component) const {
  return constrained_[component][face_axis(f)][face_is_upper(f) ? 1 : 0];
}

bool BcEnforcer::has_constraints() const {
  for (const auto& per_component : constrained_)
    for (const auto& per_axis : per_component)
      if (per_axis[0] || per_axis[1]) return true;
  return false;
}

std::array<ad::Jet, 3> BcEnforcer::lift_jets(const std::array<ad::Jet, 3>& x) const {
  std::array<ad::Jet, 3> a;
  for (int i = 0; i < 3; ++i) {
    ad::Jet acc = ad::Jet::constant(*x[0].tape(),
                                    ad::Array::Constant(1, x[0].cols(), lift_.offset[i]),
                                    x[0].order());
    for (int k = 0; k < 3; ++k) {
      const double g = lift_.gradient[3 * i + k];
      if (g != 0.0) acc = acc + x[k] * g;
    }
    a[i] = acc;
  }
  return a;
}

std::array<ad::Jet, 3> BcEnforcer::mask_jets(const std::array<ad::Jet, 3>& x) const {
  std::array<ad::Jet, 3> b;
  for (int c = 0; c < 3; ++c) {
    ad::Jet acc =
        ad::Jet::constant(*x[0].tape(), ad::Array::Ones(1, x[0].cols()), x[0].order());
    for (int k = 0; k < 3; ++k) {
      const bool lo = constrained_[c][k][0];
      const bool hi = constrained_[c][k][1];
      const double len = box_.lengths[k];
      if (lo && hi) {
        acc = acc * ((x[k] - box_.lower(k)) * (box_.upper(k) - x[k]) * (4.0 / (len * len)));
      } else if (lo) {
        acc = acc * ((x[k] - box_.lower(k)) * (1.0 / len));
      } else if (hi) {
        acc = acc * ((box_.upper(k) - x[k]) * (1.0 / len));
      }
    }
    b[c] = acc;
  }
  return b;
}

HardBcFields BcEnforcer::apply(const std::array<ad::Jet, 3>& x, const std::array<ad::Jet, 3>& y_u,
                               const std::array<ad::Jet, 9>& y_P) const {
  const auto a = lift_jets(x);
  const auto b = mask_jets(x);
  HardBcFields out;
  for (int c = 0; c < 3; ++c) out.u[c] = a[c] + b[c] * y_u[c];
  out.P = y_P;
  return out;
}

std::array<double, 3> BcEnforcer::lift_value(const std::array<double, 3>& x) const {
  std::array<double, 3> a{};
  for (int i = 0; i < 3; ++i) {
    a[i] = lift_.offset[i];
    for (int k = 0; k < 3; ++k) a[i] += lift_.gradient[3 * i + k] * x[k];
  }
  return a;
}

std::array<double, 3> BcEnforcer::mask_value(const std::array<double, 3>& x) const {
  std::array<double, 3> b{};
  for (int c = 0; c < 3; ++c) {
    double acc = 1.0;
    for (int k = 0; k < 3; ++k) {
      const bool lo = constrained_[c][k][0];
      const bool hi = constrained_[c][k][1];
      const double len = box_.lengths[k];
      if (lo && hi) {
        acc *= (x[k] - box_.lower(k)) * (box_.upper(k) - x[k]) * (4.0 / (len * len));
      } else if (lo) {
        acc *= (x[k] - box_.lower(k)) / len;
      } else if (hi) {
        acc *= (box_.upper(k) - x[k]) / len;
      }
    }
    b[c] = acc;
  }
  return b;
}

}  // namespace hyperpinn::net
