#include "hyperpinn/loss/objective.hpp"

#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include "hyperpinn/error.hpp"
#include "hyperpinn/mat/materials.hpp"

namespace hyperpinn::loss {

namespace {

using JetMat = ad::Mat3<ad::Jet>;
using VarMat = ad::Mat3<ad::Var>;

VarMat values(const JetMat& m) {
  VarMat v;
  for (int k = 0; k < 9; ++k) v[k] = m[k].value();
  return v;
}

mat::DeformationState<ad::Jet> truncated(const mat::DeformationState<ad::Jet>& s, int order) {
  mat::DeformationState<ad::Jet> t;
  for (int k = 0; k < 9; ++k) {
    t.F[k] = s.F[k].truncated(order);
    t.F_inv_T[k] = s.F_inv_T[k].truncated(order);
  }
  t.J = s.J.truncated(order);
  t.I1 = s.I1.truncated(order);
  return t;
}

std::array<ad::Jet, 3> lift(ad::Tape& tape, const ad::Array& coords, int order) {
  return {ad::Jet::lift_coordinate(tape, coords, 0, order),
          ad::Jet::lift_coordinate(tape, coords, 1, order),
          ad::Jet::lift_coordinate(tape, coords, 2, order)};
}

// Builds F and the material state; InvertedState is re-raised with the
// global point index.
mat::DeformationState<ad::Jet> kinematics(const std::array<ad::Jet, 3>& u,
                                          const std::vector<long>& nodes) {
  JetMat grad_u;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) grad_u[3 * i + j] = u[i].derivative(j);
  try {
    return mat::deformation_gradient(grad_u);
  } catch (const InvertedState& e) {
    const long local = e.point_index();
    const long global = local >= 0 && local < static_cast<long>(nodes.size()) ? nodes[local] : -1;
    std::ostringstream msg;
    msg << "inverted deformation (J <= " << mat::kInversionFloor << ") at point " << global;
    throw InvertedState(msg.str(), global);
  }
}

template <class Fn>
void run_parallel(std::size_t count, int threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  auto guarded = [&](std::size_t b) {
    try {
      fn(b);
    } catch (...) {
      errors[b] = std::current_exception();
    }
  };
  const std::size_t workers =
      threads > 1 ? std::min<std::size_t>(static_cast<std::size_t>(threads), count) : 1;
  if (workers <= 1) {
    for (std::size_t b = 0; b < count; ++b) guarded(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < count; b = next++) guarded(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

PinnObjective::PinnObjective(bvp::ProblemSpec problem, net::FieldNetwork network,
                             EvaluationOptions options)
    : problem_(std::move(problem)), network_(std::move(network)), options_(options) {
  problem_.validate();
  if (options_.chunk_size < 1) throw DomainError("PinnObjective: chunk size must be positive");
  bc_ = problem_.enforcer();
  points_ = bvp::build_point_sets(problem_.domain);
  tractions_ = bvp::build_traction_set(problem_, points_);
  const Eigen::Matrix3Xd loads = bvp::external_loads(problem_, points_);

  const TermMask mask = mask_terms(problem_.mask);
  active_ = mask;
  active_[kTractionU] = mask[kTractionU] && tractions_.size() > 0;
  active_[kTractionNet] = mask[kTractionNet] && tractions_.size() > 0;
  active_[kInteriorU] = mask[kInteriorU] && !points_.interior.empty();
  active_[kInteriorNet] = mask[kInteriorNet] && !points_.interior.empty();

  std::vector<std::vector<long>> entries_of(static_cast<std::size_t>(points_.points.cols()));
  for (long e = 0; e < tractions_.size(); ++e) entries_of[tractions_.nodes[e]].push_back(e);

  auto make_batches = [&](const std::vector<long>& nodes, bool interior) {
    for (std::size_t start = 0; start < nodes.size();
         start += static_cast<std::size_t>(options_.chunk_size)) {
      const std::size_t stop =
          std::min(nodes.size(), start + static_cast<std::size_t>(options_.chunk_size));
      Batch b;
      b.nodes.assign(nodes.begin() + static_cast<long>(start), nodes.begin() + static_cast<long>(stop));
      b.interior = interior;
      b.order = interior ? 2 : 1;
      const long n = static_cast<long>(b.nodes.size());
      b.coords.resize(3, n);
      b.volume_weights.resize(1, n);
      b.loads.resize(3, n);
      std::size_t slot_count = 0;
      for (long c = 0; c < n; ++c) {
        const long node = b.nodes[c];
        b.coords.col(c) = points_.points.col(node).array();
        b.volume_weights(0, c) = points_.volume_weights[node];
        b.loads.col(c) = loads.col(node).array();
        slot_count = std::max(slot_count, entries_of[node].size());
      }
      for (std::size_t s = 0; s < slot_count; ++s) {
        std::array<ad::Array, 3> slot{ad::Array::Zero(3, n), ad::Array::Zero(3, n),
                                      ad::Array::Zero(3, n)};
        for (long c = 0; c < n; ++c) {
          const auto& list = entries_of[b.nodes[c]];
          if (s >= list.size()) continue;
          const long e = list[s];
          slot[0].col(c) = tractions_.normals.col(e).array();
          slot[1].col(c) = tractions_.tractions.col(e).array();
          slot[2].col(c) = tractions_.components.col(e).array();
        }
        b.slots.push_back(std::move(slot));
      }
      batches_.push_back(std::move(b));
    }
  };
  make_batches(points_.interior, true);
  make_batches(points_.boundary, false);
}

PinnObjective::BatchResult PinnObjective::evaluate_batch(const Batch& batch,
                                                         const ad::ParamVector& phi,
                                                         const TermArray& weights,
                                                         bool with_gradient) const {
  ad::Tape tape;
  const auto x = lift(tape, batch.coords, batch.order);
  const net::NetworkOutput out = network_.forward(tape, x, phi, with_gradient);
  const net::HardBcFields fields = bc_.apply(x, out.y_u, out.y_P);
  const auto state = kinematics(fields.u, batch.nodes);
  const JetMat P_u = mat::first_piola(problem_.material, state);
  const JetMat& P_net = fields.P;

  const double n_all = static_cast<double>(points_.points.cols());
  Breakdown terms;

  const ad::Jet psi = mat::strain_energy(problem_.material, truncated(state, 0));
  const ad::Var internal = energy_sum(psi.value(), batch.volume_weights);
  const ad::Var work =
      work_sum({fields.u[0].value(), fields.u[1].value(), fields.u[2].value()}, batch.loads);
  terms[kEnergy] = internal - work;

  const VarMat pu = values(P_u);
  const VarMat pn = values(P_net);
  terms[kConstitutive] = squared_mismatch_sum(pn, pu, 1.0 / n_all);

  if (!batch.interior && tractions_.size() > 0) {
    const double scale = 1.0 / static_cast<double>(tractions_.size());
    for (const auto& slot : batch.slots) {
      terms[kTractionU] =
          terms[kTractionU] + traction_residual_sum(tape, pu, slot[0], slot[1], slot[2], scale);
      terms[kTractionNet] =
          terms[kTractionNet] + traction_residual_sum(tape, pn, slot[0], slot[1], slot[2], scale);
    }
  }

  if (batch.interior) {
    const double scale = 1.0 / static_cast<double>(points_.interior.size());
    std::array<double, 3> fb = problem_.body_force;
    for (double& f : fb) f *= problem_.load_scale;
    const auto n = static_cast<Eigen::Index>(batch.nodes.size());
    terms[kInteriorU] = interior_residual_sum(tape, divergence(P_u), fb, n, scale);
    terms[kInteriorNet] = interior_residual_sum(tape, divergence(P_net), fb, n, scale);
  }

  BatchResult r;
  ad::Var total;
  for (int i = 0; i < kTermCount; ++i) {
    r.terms[i] = ad::scalar_value(terms[i]);
    if (active_[i] && weights[i] != 0.0) total = total + terms[i] * weights[i];
  }
  r.internal_energy = ad::scalar_value(internal);
  r.external_work = ad::scalar_value(work);
  if (with_gradient) {
    r.gradient.assign(phi.values.size(), 0.0);
    if (!total.is_zero()) tape.accumulate_gradient(total, r.gradient);
  }
  return r;
}

Evaluation PinnObjective::evaluate(const ad::ParamVector& phi, const TermArray& weights,
                                   bool with_gradient) const {
  std::vector<BatchResult> results(batches_.size());
  run_parallel(batches_.size(), options_.threads, [&](std::size_t b) {
    results[b] = evaluate_batch(batches_[b], phi, weights, with_gradient);
  });

  Evaluation ev;
  if (with_gradient) ev.gradient.assign(phi.values.size(), 0.0);
  for (const BatchResult& r : results) {
    for (int i = 0; i < kTermCount; ++i) ev.terms[i] += r.terms[i];
    ev.internal_energy += r.internal_energy;
    ev.external_work += r.external_work;
    if (with_gradient) {
      for (std::size_t k = 0; k < r.gradient.size(); ++k) ev.gradient[k] += r.gradient[k];
    }
  }
  ev.total = total_loss(ev.terms, weights, active_);
  return ev;
}

FieldSample sample_fields(const bvp::ProblemSpec& problem, const net::FieldNetwork& network,
                          const ad::ParamVector& phi, const Eigen::Matrix3Xd& X,
                          long chunk_size) {
  const net::BcEnforcer bc = problem.enforcer();
  const long n = X.cols();
  FieldSample s;
  s.X = X;
  s.u.resize(3, n);
  s.P_net.resize(9, n);
  s.P_u.resize(9, n);
  s.cauchy.resize(9, n);
  s.J.resize(n);
  s.von_mises.resize(n);
  for (long start = 0; start < n; start += chunk_size) {
    const long m = std::min(chunk_size, n - start);
    ad::Tape tape;
    const ad::Array coords = X.middleCols(start, m).array();
    const auto x = lift(tape, coords, 1);
    const net::NetworkOutput out = network.forward(tape, x, phi, false);
    const net::HardBcFields fields = bc.apply(x, out.y_u, out.y_P);
    std::vector<long> nodes(static_cast<std::size_t>(m));
    for (long c = 0; c < m; ++c) nodes[c] = start + c;
    const auto state = kinematics(fields.u, nodes);
    const JetMat P_u = mat::first_piola(problem.material, state);
    for (long c = 0; c < m; ++c) {
      const long col = start + c;
      ad::Mat3<double> F;
      ad::Mat3<double> P;
      for (int k = 0; k < 9; ++k) {
        F[k] = state.F[k].value().value()(0, c);
        P[k] = fields.P[k].value().value()(0, c);
        s.P_net(k, col) = P[k];
        s.P_u(k, col) = P_u[k].value().value()(0, c);
      }
      for (int i = 0; i < 3; ++i) s.u(i, col) = fields.u[i].value().value()(0, c);
      s.J(col) = state.J.value().value()(0, c);
      const auto S = mat::cauchy(P, F);
      for (int k = 0; k < 9; ++k) s.cauchy(k, col) = S[k];
      s.von_mises(col) = mat::von_mises(S);
    }
  }
  return s;
}

}  // namespace hyperpinn::loss
