#include "hyperpinn/ad/tape.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hyperpinn/error.hpp"

namespace hyperpinn::ad {
namespace {

Tape* common_tape(const Var& a, const Var& b) {
  if (!a.is_zero() && !b.is_zero() && a.tape() != b.tape()) {
    throw std::logic_error("ad: operands recorded on different tapes");
  }
  return a.is_zero() ? b.tape() : a.tape();
}

void require_same_shape(const Array& a, const Array& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << "ad::" << op << ": shape " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
        << b.cols();
    throw ShapeMismatch(msg.str());
  }
}

void require_nonzero(const Var& a, const char* op) {
  if (a.is_zero()) {
    throw std::logic_error(std::string("ad::") + op + ": operand is a structural zero");
  }
}

void accumulate(Array& slot, const Array& contribution) {
  if (slot.size() == 0) {
    slot = contribution;
  } else {
    slot += contribution;
  }
}

}  // namespace

const Array& Var::value() const {
  if (is_zero()) {
    throw std::logic_error("ad::Var::value: structural zero has no storage");
  }
  return tape_->node(id_).value;
}

bool Var::active() const { return !is_zero() && tape_->node(id_).active; }

Var Tape::constant(Array value) {
  TapeNode node;
  node.op = OpKind::Constant;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::int32_t>(nodes_.size() - 1));
}

Var Tape::constant(double value, Eigen::Index rows, Eigen::Index cols) {
  return constant(Array::Constant(rows, cols, value));
}

Var Tape::parameter(Array value, std::int64_t offset, bool active) {
  TapeNode node;
  node.op = active ? OpKind::Parameter : OpKind::Constant;
  node.active = active;
  node.offset = offset;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::int32_t>(nodes_.size() - 1));
}

Var Tape::record(OpKind op, const Var& lhs, const Var& rhs, Array value, double scalar,
                 Array partial) {
  TapeNode node;
  node.op = op;
  node.lhs = lhs.is_zero() ? -1 : lhs.id();
  node.rhs = rhs.is_zero() ? -1 : rhs.id();
  node.active = lhs.active() || rhs.active();
  node.scalar = scalar;
  node.value = std::move(value);
  node.partial = std::move(partial);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::int32_t>(nodes_.size() - 1));
}

std::vector<double> Tape::gradient(const Var& loss, std::size_t parameter_count) const {
  std::vector<double> out(parameter_count, 0.0);
  accumulate_gradient(loss, out, 1.0);
  return out;
}

void Tape::accumulate_gradient(const Var& loss, std::span<double> out, double seed) const {
  if (nodes_.empty()) {
    throw EmptyTape("ad::Tape::gradient: no nodes recorded");
  }
  if (loss.is_zero() || !loss.active()) {
    return;
  }
  if (loss.tape() != this) {
    throw std::logic_error("ad::Tape::gradient: loss belongs to another tape");
  }
  const TapeNode& root = node(loss.id());
  if (root.value.size() != 1) {
    throw ShapeMismatch("ad::Tape::gradient: loss must be 1x1");
  }

  std::vector<Array> adjoint(static_cast<std::size_t>(loss.id()) + 1);
  adjoint[static_cast<std::size_t>(loss.id())] = Array::Constant(1, 1, seed);

  for (std::int32_t id = loss.id(); id >= 0; --id) {
    const TapeNode& n = node(id);
    Array& g = adjoint[static_cast<std::size_t>(id)];
    if (!n.active || g.size() == 0) {
      continue;
    }
    const bool lhs_active = n.lhs >= 0 && node(n.lhs).active;
    const bool rhs_active = n.rhs >= 0 && node(n.rhs).active;
    auto lhs_slot = [&]() -> Array& { return adjoint[static_cast<std::size_t>(n.lhs)]; };
    auto rhs_slot = [&]() -> Array& { return adjoint[static_cast<std::size_t>(n.rhs)]; };
    auto lhs_value = [&]() -> const Array& { return node(n.lhs).value; };
    auto rhs_value = [&]() -> const Array& { return node(n.rhs).value; };

    switch (n.op) {
      case OpKind::Constant:
        break;
      case OpKind::Parameter: {
        const Eigen::Index cols = n.value.cols();
        for (Eigen::Index r = 0; r < n.value.rows(); ++r) {
          for (Eigen::Index c = 0; c < cols; ++c) {
            out[static_cast<std::size_t>(n.offset + r * cols + c)] += g(r, c);
          }
        }
        break;
      }
      case OpKind::Add:
        if (lhs_active) accumulate(lhs_slot(), g);
        if (rhs_active) accumulate(rhs_slot(), g);
        break;
      case OpKind::Sub:
        if (lhs_active) accumulate(lhs_slot(), g);
        if (rhs_active) accumulate(rhs_slot(), -g);
        break;
      case OpKind::Mul:
        if (lhs_active) accumulate(lhs_slot(), g * rhs_value());
        if (rhs_active) accumulate(rhs_slot(), g * lhs_value());
        break;
      case OpKind::Div:
        if (lhs_active) accumulate(lhs_slot(), g / rhs_value());
        if (rhs_active) accumulate(rhs_slot(), -g * n.value / rhs_value());
        break;
      case OpKind::Neg:
        if (lhs_active) accumulate(lhs_slot(), -g);
        break;
      case OpKind::Scale:
        if (lhs_active) accumulate(lhs_slot(), n.scalar * g);
        break;
      case OpKind::Shift:
        if (lhs_active) accumulate(lhs_slot(), g);
        break;
      case OpKind::Tanh:
        if (lhs_active) accumulate(lhs_slot(), g * (1.0 - n.value.square()));
        break;
      case OpKind::Sin:
        if (lhs_active) accumulate(lhs_slot(), g * lhs_value().cos());
        break;
      case OpKind::Cos:
        if (lhs_active) accumulate(lhs_slot(), -g * lhs_value().sin());
        break;
      case OpKind::Log:
        if (lhs_active) accumulate(lhs_slot(), g / lhs_value());
        break;
      case OpKind::Exp:
        if (lhs_active) accumulate(lhs_slot(), g * n.value);
        break;
      case OpKind::Pow:
        if (lhs_active) accumulate(lhs_slot(), g * n.partial);
        break;
      case OpKind::MatMul: {
        const auto gm = g.matrix();
        if (lhs_active) {
          accumulate(lhs_slot(), (gm * rhs_value().matrix().transpose()).array());
        }
        if (rhs_active) {
          accumulate(rhs_slot(), (lhs_value().matrix().transpose() * gm).array());
        }
        break;
      }
      case OpKind::AddBias:
        if (lhs_active) accumulate(lhs_slot(), g);
        if (rhs_active) accumulate(rhs_slot(), g.rowwise().sum());
        break;
      case OpKind::Row: {
        if (lhs_active) {
          Array& slot = lhs_slot();
          if (slot.size() == 0) {
            slot = Array::Zero(lhs_value().rows(), lhs_value().cols());
          }
          slot.row(static_cast<Eigen::Index>(n.scalar)) += g;
        }
        break;
      }
      case OpKind::Interleave: {
        const Eigen::Index half = n.value.rows() / 2;
        Array ga(half, n.value.cols());
        Array gb(half, n.value.cols());
        for (Eigen::Index r = 0; r < half; ++r) {
          ga.row(r) = g.row(2 * r);
          gb.row(r) = g.row(2 * r + 1);
        }
        if (lhs_active) accumulate(lhs_slot(), ga);
        if (rhs_active) accumulate(rhs_slot(), gb);
        break;
      }
      case OpKind::WeightedSum:
        if (lhs_active) accumulate(lhs_slot(), g(0, 0) * n.partial);
        break;
      case OpKind::Sum:
        if (lhs_active) {
          accumulate(lhs_slot(), Array::Constant(lhs_value().rows(), lhs_value().cols(), g(0, 0)));
        }
        break;
    }
    // Adjoints of interior nodes are no longer needed once propagated.
    if (n.op != OpKind::Parameter) {
      g.resize(0, 0);
    }
  }
}

Var operator+(const Var& a, const Var& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  require_same_shape(a.value(), b.value(), "add");
  return common_tape(a, b)->record(OpKind::Add, a, b, a.value() + b.value());
}

Var operator-(const Var& a, const Var& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  require_same_shape(a.value(), b.value(), "sub");
  return common_tape(a, b)->record(OpKind::Sub, a, b, a.value() - b.value());
}

Var operator*(const Var& a, const Var& b) {
  if (a.is_zero() || b.is_zero()) return Var();
  require_same_shape(a.value(), b.value(), "mul");
  return common_tape(a, b)->record(OpKind::Mul, a, b, a.value() * b.value());
}

Var operator/(const Var& a, const Var& b) {
  require_nonzero(b, "div");
  if (a.is_zero()) return Var();
  require_same_shape(a.value(), b.value(), "div");
  if ((b.value() == 0.0).any()) {
    throw DomainError("ad::div: division by zero");
  }
  return common_tape(a, b)->record(OpKind::Div, a, b, a.value() / b.value());
}

Var operator-(const Var& a) {
  if (a.is_zero()) return Var();
  return a.tape()->record(OpKind::Neg, a, Var(), -a.value());
}

Var operator*(const Var& a, double c) {
  if (a.is_zero()) return Var();
  return a.tape()->record(OpKind::Scale, a, Var(), c * a.value(), c);
}

Var operator*(double c, const Var& a) { return a * c; }

Var operator/(const Var& a, double c) { return a * (1.0 / c); }

Var operator/(double c, const Var& a) { return pow(a, -1.0) * c; }

Var operator+(const Var& a, double c) {
  require_nonzero(a, "shift");
  return a.tape()->record(OpKind::Shift, a, Var(), a.value() + c, c);
}

Var operator+(double c, const Var& a) { return a + c; }

Var operator-(const Var& a, double c) { return a + (-c); }

Var operator-(double c, const Var& a) { return (-a) + c; }

Var tanh(const Var& a) {
  if (a.is_zero()) return Var();
  return a.tape()->record(OpKind::Tanh, a, Var(), a.value().tanh());
}

Var sin(const Var& a) {
  if (a.is_zero()) return Var();
  return a.tape()->record(OpKind::Sin, a, Var(), a.value().sin());
}

Var cos(const Var& a) {
  require_nonzero(a, "cos");
  return a.tape()->record(OpKind::Cos, a, Var(), a.value().cos());
}

Var log(const Var& a) {
  require_nonzero(a, "log");
  if ((a.value() <= 0.0).any()) {
    throw DomainError("ad::log: non-positive argument");
  }
  return a.tape()->record(OpKind::Log, a, Var(), a.value().log());
}

Var exp(const Var& a) {
  require_nonzero(a, "exp");
  return a.tape()->record(OpKind::Exp, a, Var(), a.value().exp());
}

Var pow(const Var& a, double exponent) {
  require_nonzero(a, "pow");
  const bool integral = exponent == std::floor(exponent);
  if (!integral && (a.value() <= 0.0).any()) {
    throw DomainError("ad::pow: non-positive base with non-integer exponent");
  }
  if (exponent < 0.0 && (a.value() == 0.0).any()) {
    throw DomainError("ad::pow: zero base with negative exponent");
  }
  Array value = a.value().pow(exponent);
  Array partial;
  if (a.active()) {
    partial = exponent == 1.0 ? Array::Ones(a.rows(), a.cols()).eval()
                              : (exponent * a.value().pow(exponent - 1.0)).eval();
  }
  return a.tape()->record(OpKind::Pow, a, Var(), std::move(value), exponent, std::move(partial));
}

Var matmul(const Var& w, const Var& x) {
  if (w.is_zero() || x.is_zero()) return Var();
  if (w.value().cols() != x.value().rows()) {
    std::ostringstream msg;
    msg << "ad::matmul: " << w.rows() << "x" << w.cols() << " times " << x.rows() << "x"
        << x.cols();
    throw ShapeMismatch(msg.str());
  }
  Array value = (w.value().matrix() * x.value().matrix()).array();
  return common_tape(w, x)->record(OpKind::MatMul, w, x, std::move(value));
}

Var add_bias(const Var& z, const Var& b) {
  require_nonzero(z, "add_bias");
  if (b.is_zero()) return z;
  if (b.value().cols() != 1 || b.value().rows() != z.value().rows()) {
    throw ShapeMismatch("ad::add_bias: bias must be a column matching the row count");
  }
  Array value = z.value().colwise() + b.value().col(0);
  return common_tape(z, b)->record(OpKind::AddBias, z, b, std::move(value));
}

Var row(const Var& x, Eigen::Index r) {
  if (x.is_zero()) return Var();
  if (r < 0 || r >= x.rows()) {
    throw ShapeMismatch("ad::row: index out of range");
  }
  return x.tape()->record(OpKind::Row, x, Var(), x.value().row(r), static_cast<double>(r));
}

Var interleave(const Var& a, const Var& b) {
  require_nonzero(a, "interleave");
  require_nonzero(b, "interleave");
  require_same_shape(a.value(), b.value(), "interleave");
  Array value(2 * a.rows(), a.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    value.row(2 * r) = a.value().row(r);
    value.row(2 * r + 1) = b.value().row(r);
  }
  return common_tape(a, b)->record(OpKind::Interleave, a, b, std::move(value));
}

Var weighted_sum(const Var& x, const Array& w) {
  if (x.is_zero()) return Var();
  require_same_shape(x.value(), w, "weighted_sum");
  Array value = Array::Constant(1, 1, (x.value() * w).sum());
  return x.tape()->record(OpKind::WeightedSum, x, Var(), std::move(value), 0.0, w);
}

Var sum(const Var& x) {
  if (x.is_zero()) return Var();
  return x.tape()->record(OpKind::Sum, x, Var(), Array::Constant(1, 1, x.value().sum()));
}

double scalar_value(const Var& v) {
  if (v.is_zero()) return 0.0;
  if (v.value().size() != 1) {
    throw ShapeMismatch("ad::scalar_value: Var is not 1x1");
  }
  return v.value()(0, 0);
}

}  // namespace hyperpinn::ad
