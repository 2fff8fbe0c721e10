#pragma once

#include <Eigen/Core>

#include <vector>

#include "hyperpinn/ad/param_vector.hpp"
#include "hyperpinn/bvp/point_sets.hpp"
#include "hyperpinn/bvp/problem.hpp"
#include "hyperpinn/loss/terms.hpp"
#include "hyperpinn/net/field_network.hpp"

namespace hyperpinn::loss {

struct EvaluationOptions {
  long chunk_size = 256;  // points per tape
  int threads = 1;        // chunk workers; results do not depend on this
};

struct Evaluation {
  TermArray terms{};  // raw values, zero for inactive terms
  double internal_energy = 0.0;
  double external_work = 0.0;
  double total = 0.0;            // sum_i weights_i terms_i over active terms
  std::vector<double> gradient;  // d total / d phi (empty unless requested)
};

// The six-term physics loss of a problem on its Simpson grid.
//
// Points are split into batches; strictly interior points carry second
// spatial derivatives (needed by the strong-form residuals), boundary points
// carry first derivatives only. Each batch is recorded on its own tape and the
// per-batch values and gradients are reduced in a fixed order.
class PinnObjective {
 public:
  PinnObjective(bvp::ProblemSpec problem, net::FieldNetwork network,
                EvaluationOptions options = {});

  const bvp::ProblemSpec& problem() const { return problem_; }
  const net::FieldNetwork& network() const { return network_; }
  const bvp::PointSets& points() const { return points_; }
  const bvp::TractionSet& tractions() const { return tractions_; }
  // Mask terms that also have at least one point to act on.
  const TermMask& active() const { return active_; }

  Evaluation evaluate(const ad::ParamVector& phi, const TermArray& weights,
                      bool with_gradient) const;

 private:
  struct Batch {
    std::vector<long> nodes;
    int order = 1;
    bool interior = false;
    ad::Array coords;          // 3 x n
    ad::Array volume_weights;  // 1 x n
    ad::Array loads;           // 3 x n
    // traction entries: up to three faces per node
    std::vector<std::array<ad::Array, 3>> slots;  // normals, tractions, components
  };

  struct BatchResult {
    TermArray terms{};
    double internal_energy = 0.0;
    double external_work = 0.0;
    std::vector<double> gradient;
  };

  BatchResult evaluate_batch(const Batch& batch, const ad::ParamVector& phi,
                             const TermArray& weights, bool with_gradient) const;

  bvp::ProblemSpec problem_;
  net::FieldNetwork network_;
  EvaluationOptions options_;
  net::BcEnforcer bc_;
  bvp::PointSets points_;
  bvp::TractionSet tractions_;
  TermMask active_{};
  std::vector<Batch> batches_;
};

// Network fields sampled at arbitrary points (inference only).
struct FieldSample {
  Eigen::Matrix3Xd X;
  Eigen::Matrix3Xd u;
  Eigen::Matrix<double, 9, Eigen::Dynamic> P_net;  // row-major P_ij in row 3i+j
  Eigen::Matrix<double, 9, Eigen::Dynamic> P_u;    // constitutive stress of u
  Eigen::Matrix<double, 9, Eigen::Dynamic> cauchy;  // (1/J) P_net F^T
  Eigen::VectorXd J;
  Eigen::VectorXd von_mises;
};

FieldSample sample_fields(const bvp::ProblemSpec& problem, const net::FieldNetwork& network,
                          const ad::ParamVector& phi, const Eigen::Matrix3Xd& X,
                          long chunk_size = 512);

}  // namespace hyperpinn::loss
