#pragma once

// Reverse-mode tape over dense arrays.
//
// Every node holds an Eigen array (rows x cols). Operations are recorded in
// creation order, so the tape is a DAG whose parents always precede their
// children. A node is "active" when it depends on a Parameter leaf; the
// reverse sweep only visits active nodes. Spatial jets (jet.hpp) are built on
// top of these operations, which is what makes second spatial derivatives
// differentiable with respect to the network parameters.

#include <Eigen/Core>

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

namespace hyperpinn::ad {

using Array = Eigen::ArrayXXd;

enum class OpKind : std::uint8_t {
  Constant,
  Parameter,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Scale,
  Shift,
  Tanh,
  Sin,
  Cos,
  Log,
  Exp,
  Pow,
  MatMul,
  AddBias,
  Row,
  Interleave,
  WeightedSum,
  Sum,
};

struct TapeNode {
  OpKind op = OpKind::Constant;
  std::int32_t lhs = -1;
  std::int32_t rhs = -1;
  bool active = false;
  // Scale/Shift/Pow constant, or the row index of a Row node.
  double scalar = 0.0;
  // Parameter nodes: flat offset of element (0,0); elements are row-major.
  std::int64_t offset = -1;
  Array value;
  // Local partial derivative (Pow) or constant operand (WeightedSum weights).
  Array partial;
};

class Tape;

// Handle to a tape node. A default-constructed Var is a structural zero:
// it stands for an all-zero array of whatever shape it is combined with.
class Var {
 public:
  Var() = default;

  bool is_zero() const { return tape_ == nullptr; }
  Tape* tape() const { return tape_; }
  std::int32_t id() const { return id_; }

  const Array& value() const;
  bool active() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }

 private:
  friend class Tape;
  Var(Tape* tape, std::int32_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::int32_t id_ = -1;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Array value);
  Var constant(double value, Eigen::Index rows, Eigen::Index cols);
  // `active` = false records the parameter as a plain constant (inference).
  Var parameter(Array value, std::int64_t offset, bool active = true);

  Var record(OpKind op, const Var& lhs, const Var& rhs, Array value, double scalar = 0.0,
             Array partial = Array());

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const TapeNode& node(std::int32_t id) const { return nodes_[static_cast<std::size_t>(id)]; }
  void clear() { nodes_.clear(); }

  // d(loss)/d(parameters) as a flat vector of `parameter_count` entries.
  // The tape is not modified; repeated calls return identical results.
  std::vector<double> gradient(const Var& loss, std::size_t parameter_count) const;

  // Adds seed * d(loss)/d(parameters) into `out`.
  void accumulate_gradient(const Var& loss, std::span<double> out, double seed = 1.0) const;

 private:
  std::deque<TapeNode> nodes_;
};

// Elementwise arithmetic. Operands must have identical shapes.
Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);

Var operator*(const Var& a, double c);
Var operator*(double c, const Var& a);
Var operator/(const Var& a, double c);
Var operator/(double c, const Var& a);
Var operator+(const Var& a, double c);
Var operator+(double c, const Var& a);
Var operator-(const Var& a, double c);
Var operator-(double c, const Var& a);

Var tanh(const Var& a);
Var sin(const Var& a);
Var cos(const Var& a);
Var log(const Var& a);
Var exp(const Var& a);
Var pow(const Var& a, double exponent);

// W (o x i) times X (i x n).
Var matmul(const Var& w, const Var& x);
// Z (o x n) plus the column vector b (o x 1) broadcast over columns.
Var add_bias(const Var& z, const Var& b);
// Row r of X as a 1 x n array.
Var row(const Var& x, Eigen::Index r);
// Rows a_0, b_0, a_1, b_1, ... for equally shaped a and b.
Var interleave(const Var& a, const Var& b);
// Sum of w .* X as a 1 x 1 array; w is a constant of X's shape.
Var weighted_sum(const Var& x, const Array& w);
Var sum(const Var& x);

// Scalar value of a 1 x 1 Var (0 for a structural zero).
double scalar_value(const Var& v);

}  // namespace hyperpinn::ad
