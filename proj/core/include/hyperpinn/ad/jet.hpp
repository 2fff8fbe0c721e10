#pragma once

// Second-order spatial jets over the three material coordinates.
//
// A Jet carries, for a batch of points, the value of a field, its gradient
// d/dX_i and its symmetric Hessian d2/dX_i dX_j. Every component is a Var on
// a reverse tape, so anything assembled from jets (stresses, divergences,
// energies) can be differentiated with respect to network parameters.
//
// `order` says how many derivative levels are available: 2 (value, gradient,
// Hessian), 1 (value, gradient) or 0 (value only). A structurally zero
// component inside the available order means "exactly zero"; components above
// the order are unknown and never read.

#include <array>

#include "hyperpinn/ad/tape.hpp"

namespace hyperpinn::ad {

// Packed index of the symmetric pair (i, j): 00 01 02 11 12 22.
constexpr int sym_index(int i, int j) {
  if (i > j) {
    const int t = i;
    i = j;
    j = t;
  }
  return i == 0 ? j : (i == 1 ? 2 + j : 5);
}

class Jet {
 public:
  Jet() = default;
  Jet(Var value, std::array<Var, 3> grad, std::array<Var, 6> hess, int order);

  // Seeds X_axis over a batch: `points` is 3 x n; value = row `axis`,
  // gradient = e_axis, Hessian = 0.
  static Jet lift_coordinate(Tape& tape, const Array& points, int axis, int order = 2);
  // Field with the given value and vanishing derivatives.
  static Jet constant(Tape& tape, Array value, int order = 2);
  static Jet from_value(Var value, int order);

  const Var& value() const { return value_; }
  const Var& grad(int i) const { return grad_[static_cast<std::size_t>(i)]; }
  const Var& hess(int i, int j) const { return hess_[static_cast<std::size_t>(sym_index(i, j))]; }
  const std::array<Var, 3>& grads() const { return grad_; }
  const std::array<Var, 6>& hessians() const { return hess_; }
  int order() const { return order_; }
  Tape* tape() const { return value_.tape(); }

  Eigen::Index rows() const { return value_.rows(); }
  Eigen::Index cols() const { return value_.cols(); }

  // d/dX_axis of this jet, one order lower.
  Jet derivative(int axis) const;
  // Same jet with derivative levels above `order` dropped.
  Jet truncated(int order) const;

 private:
  Var value_;
  std::array<Var, 3> grad_{};
  std::array<Var, 6> hess_{};
  int order_ = 0;
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);

Jet operator+(const Jet& a, double c);
Jet operator+(double c, const Jet& a);
Jet operator-(const Jet& a, double c);
Jet operator-(double c, const Jet& a);
Jet operator*(const Jet& a, double c);
Jet operator*(double c, const Jet& a);
Jet operator/(const Jet& a, double c);
Jet operator/(double c, const Jet& a);

Jet tanh(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet log(const Jet& a);
Jet exp(const Jet& a);
Jet pow(const Jet& a, double exponent);
Jet square(const Jet& a);

// Componentwise linear map: W (o x i, no spatial dependence) applied to x.
Jet matmul(const Var& w, const Jet& x);
// Adds a bias column to the value only.
Jet add_bias(const Jet& z, const Var& b);
Jet row(const Jet& x, Eigen::Index r);
Jet interleave(const Jet& a, const Jet& b);

// Smallest |value| over the batch (used for determinant floors).
double min_abs_value(const Jet& a);
inline double min_abs_value(double a) { return a < 0.0 ? -a : a; }
// Smallest value over the batch and the column where it occurs.
double min_value(const Jet& a, Eigen::Index* where = nullptr);
inline double min_value(double a, Eigen::Index* where = nullptr) {
  if (where != nullptr) *where = 0;
  return a;
}

}  // namespace hyperpinn::ad
