#include "hyperpinn/ad/jet.hpp"

#include <algorithm>
#include <stdexcept>

#include "hyperpinn/error.hpp"

namespace hyperpinn::ad {
namespace {

bool all_zero(const std::array<Var, 3>& v) {
  return std::all_of(v.begin(), v.end(), [](const Var& x) { return x.is_zero(); });
}

bool all_zero(const std::array<Var, 6>& v) {
  return std::all_of(v.begin(), v.end(), [](const Var& x) { return x.is_zero(); });
}

Var materialize(const Var& v, const Var& like) {
  if (!v.is_zero()) return v;
  return like.tape()->constant(0.0, like.rows(), like.cols());
}

// Applies a scalar function f with first and second derivatives d1, d2
// (evaluated lazily) to a jet by the chain rule:
//   grad_i = f' a_i,   hess_ij = f'' a_i a_j + f' a_ij.
template <class D1, class D2>
Jet chain(const Jet& a, Var f, D1&& d1_fn, D2&& d2_fn) {
  const int order = a.order();
  std::array<Var, 3> g{};
  std::array<Var, 6> h{};
  const bool has_grad = order >= 1 && !all_zero(a.grads());
  const bool has_hess = order >= 2 && !all_zero(a.hessians());
  if (has_grad || has_hess) {
    const Var d1 = d1_fn();
    if (has_grad) {
      for (int i = 0; i < 3; ++i) g[i] = d1 * a.grad(i);
    }
    if (order >= 2) {
      const Var d2 = has_grad ? d2_fn() : Var();
      for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
          h[sym_index(i, j)] = d2 * (a.grad(i) * a.grad(j)) + d1 * a.hess(i, j);
        }
      }
    }
  }
  return Jet(std::move(f), g, h, order);
}

}  // namespace

Jet::Jet(Var value, std::array<Var, 3> grad, std::array<Var, 6> hess, int order)
    : value_(std::move(value)), grad_(grad), hess_(hess), order_(order) {
  if (value_.is_zero()) {
    throw std::logic_error("ad::Jet: value must be materialized");
  }
  if (order_ < 0 || order_ > 2) {
    throw std::logic_error("ad::Jet: order must be 0, 1 or 2");
  }
  if (order_ < 2) hess_ = {};
  if (order_ < 1) grad_ = {};
}

Jet Jet::lift_coordinate(Tape& tape, const Array& points, int axis, int order) {
  if (axis < 0 || axis > 2 || points.rows() != 3) {
    throw ShapeMismatch("ad::Jet::lift_coordinate: need a 3 x n point array and axis in {0,1,2}");
  }
  Var value = tape.constant(points.row(axis));
  std::array<Var, 3> grad{};
  if (order >= 1) {
    grad[static_cast<std::size_t>(axis)] = tape.constant(1.0, 1, points.cols());
  }
  return Jet(std::move(value), grad, {}, order);
}

Jet Jet::constant(Tape& tape, Array value, int order) {
  return Jet(tape.constant(std::move(value)), {}, {}, order);
}

Jet Jet::from_value(Var value, int order) { return Jet(std::move(value), {}, {}, order); }

Jet Jet::derivative(int axis) const {
  if (order_ < 1) {
    throw std::logic_error("ad::Jet::derivative: jet carries no derivatives");
  }
  Var value = materialize(grad(axis), value_);
  std::array<Var, 3> g{};
  if (order_ >= 2) {
    for (int j = 0; j < 3; ++j) g[j] = hess(axis, j);
  }
  return Jet(std::move(value), g, {}, order_ - 1);
}

Jet Jet::truncated(int order) const {
  return Jet(value_, grad_, hess_, std::min(order, order_));
}

Jet operator+(const Jet& a, const Jet& b) {
  const int order = std::min(a.order(), b.order());
  std::array<Var, 3> g{};
  std::array<Var, 6> h{};
  if (order >= 1)
    for (int i = 0; i < 3; ++i) g[i] = a.grad(i) + b.grad(i);
  if (order >= 2)
    for (int k = 0; k < 6; ++k) h[k] = a.hessians()[k] + b.hessians()[k];
  return Jet(a.value() + b.value(), g, h, order);
}

Jet operator-(const Jet& a, const Jet& b) {
  const int order = std::min(a.order(), b.order());
  std::array<Var, 3> g{};
  std::array<Var, 6> h{};
  if (order >= 1)
    for (int i = 0; i < 3; ++i) g[i] = a.grad(i) - b.grad(i);
  if (order >= 2)
    for (int k = 0; k < 6; ++k) h[k] = a.hessians()[k] - b.hessians()[k];
  return Jet(a.value() - b.value(), g, h, order);
}

Jet operator*(const Jet& a, const Jet& b) {
  const int order = std::min(a.order(), b.order());
  std::array<Var, 3> g{};
  std::array<Var, 6> h{};
  if (order >= 1) {
    for (int i = 0; i < 3; ++i) g[i] = a.grad(i) * b.value() + a.value() * b.grad(i);
  }
  if (order >= 2) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        h[sym_index(i, j)] = a.hess(i, j) * b.value() + a.grad(i) * b.grad(j) +
                             a.grad(j) * b.grad(i) + a.value() * b.hess(i, j);
      }
    }
  }
  return Jet(a.value() * b.value(), g, h, order);
}

Jet operator/(const Jet& a, const Jet& b) { return a * pow(b, -1.0); }

Jet operator-(const Jet& a) { return a * -1.0; }

Jet operator+(const Jet& a, double c) { return Jet(a.value() + c, a.grads(), a.hessians(), a.order()); }
Jet operator+(double c, const Jet& a) { return a + c; }
Jet operator-(const Jet& a, double c) { return a + (-c); }
Jet operator-(double c, const Jet& a) { return (-a) + c; }

Jet operator*(const Jet& a, double c) {
  std::array<Var, 3> g{};
  std::array<Var, 6> h{};
  for (int i = 0; i < 3; ++i) g[i] = a.grads()[i] * c;
  for (int k = 0; k < 6; ++k) h[k] = a.hessians()[k] * c;
  return Jet(a.value() * c, g, h, a.order());
}

Jet operator*(double c, const Jet& a) { return a * c; }
Jet operator/(const Jet& a, double c) { return a * (1.0 / c); }
Jet operator/(double c, const Jet& a) { return pow(a, -1.0) * c; }

Jet tanh(const Jet& a) {
  const Var f = tanh(a.value());
  Var d1;
  return chain(
      a, f,
      [&] {
        d1 = 1.0 - f * f;
        return d1;
      },
      [&] { return (f * d1) * -2.0; });
}

Jet sin(const Jet& a) {
  const Var f = sin(a.value());
  return chain(a, f, [&] { return cos(a.value()); }, [&] { return -f; });
}

Jet cos(const Jet& a) {
  const Var f = cos(a.value());
  return chain(a, f, [&] { return -sin(a.value()); }, [&] { return -f; });
}

Jet log(const Jet& a) {
  const Var f = log(a.value());
  Var d1;
  return chain(
      a, f,
      [&] {
        d1 = pow(a.value(), -1.0);
        return d1;
      },
      [&] { return -(d1 * d1); });
}

Jet exp(const Jet& a) {
  const Var f = exp(a.value());
  return chain(a, f, [&] { return f; }, [&] { return f; });
}

Jet pow(const Jet& a, double exponent) {
  const Var f = pow(a.value(), exponent);
  return chain(
      a, f, [&] { return pow(a.value(), exponent - 1.0) * exponent; },
      [&] { return pow(a.value(), exponent - 2.0) * (exponent * (exponent - 1.0)); });
}

Jet square(const Jet& a) { return a * a; }

Jet matmul(const Var& w, const Jet& x) {
  std::array<Var, 3> g{};
  std::array<Var, 6> h{};
  for (int i = 0; i < 3; ++i) g[i] = matmul(w, x.grads()[i]);
  for (int k = 0; k < 6; ++k) h[k] = matmul(w, x.hessians()[k]);
  return Jet(matmul(w, x.value()), g, h, x.order());
}

Jet add_bias(const Jet& z, const Var& b) {
  return Jet(add_bias(z.value(), b), z.grads(), z.hessians(), z.order());
}

Jet row(const Jet& x, Eigen::Index r) {
  std::array<Var, 3> g{};
  std::array<Var, 6> h{};
  for (int i = 0; i < 3; ++i) g[i] = row(x.grads()[i], r);
  for (int k = 0; k < 6; ++k) h[k] = row(x.hessians()[k], r);
  return Jet(row(x.value(), r), g, h, x.order());
}

Jet interleave(const Jet& a, const Jet& b) {
  const int order = std::min(a.order(), b.order());
  auto pair = [&](const Var& p, const Var& q) -> Var {
    if (p.is_zero() && q.is_zero()) return Var();
    return interleave(materialize(p, a.value()), materialize(q, b.value()));
  };
  std::array<Var, 3> g{};
  std::array<Var, 6> h{};
  if (order >= 1)
    for (int i = 0; i < 3; ++i) g[i] = pair(a.grads()[i], b.grads()[i]);
  if (order >= 2)
    for (int k = 0; k < 6; ++k) h[k] = pair(a.hessians()[k], b.hessians()[k]);
  return Jet(interleave(a.value(), b.value()), g, h, order);
}

double min_abs_value(const Jet& a) { return a.value().value().abs().minCoeff(); }

double min_value(const Jet& a, Eigen::Index* where) {
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  const double m = a.value().value().minCoeff(&r, &c);
  if (where != nullptr) *where = c;
  return m;
}

}  // namespace hyperpinn::ad
