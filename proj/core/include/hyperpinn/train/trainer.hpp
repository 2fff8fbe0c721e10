#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hyperpinn/ad/param_vector.hpp"
#include "hyperpinn/bvp/problem.hpp"
#include "hyperpinn/loss/objective.hpp"
#include "hyperpinn/net/field_network.hpp"
#include "hyperpinn/train/gradient_descent.hpp"
#include "hyperpinn/train/lbfgs.hpp"

namespace hyperpinn::train {

// Load fractions, strictly increasing in (0, 1] and ending at 1.
struct CurriculumSchedule {
  std::vector<double> fractions{1.0};

  void validate() const;
};

enum class Optimizer { Lbfgs, GradientDescent };

struct TrainerConfig {
  Optimizer optimizer = Optimizer::Lbfgs;
  LbfgsConfig lbfgs;  // max_iterations is the per-stage budget
  GdConfig gd;
  CurriculumSchedule schedule;
  loss::EvaluationOptions evaluation;
  bool record_wall_time = false;  // otherwise the seconds column is 0
};

struct HistoryRow {
  int iteration = 0;  // global, 0 = starting point
  int stage = 0;
  double load_fraction = 1.0;
  double total = 0.0;
  loss::TermArray terms{};
  loss::TermArray weights{};
  double grad_norm = 0.0;
  double step = 0.0;
  double seconds = 0.0;
};

struct TrainingHistory {
  std::vector<HistoryRow> rows;
};

struct StageReport {
  int stage = 0;
  double load_fraction = 1.0;
  StopReason reason = StopReason::MaxIterations;
  int iterations = 0;
  std::string message;
};

struct TrainResult {
  ad::ParamVector phi;
  TrainingHistory history;
  std::vector<StageReport> stages;
};

using RowObserver = std::function<void(const HistoryRow&)>;

// Minimizes the CoV-weighted loss of one problem (one load stage).
// `first_iteration` offsets the iteration column.
TrainResult train_stage(const bvp::ProblemSpec& problem, const net::FieldNetwork& network,
                        ad::ParamVector phi0, const TrainerConfig& config, int stage = 0,
                        int first_iteration = 0, const RowObserver& observer = {});

// Load stepping: every fraction scales tractions, body force and prescribed
// displacements; each stage warm-starts from the previous one and restarts
// the CoV statistics. Errors are re-raised with the stage index.
TrainResult curriculum_train(const bvp::ProblemSpec& problem, const net::FieldNetwork& network,
                             ad::ParamVector phi0, const TrainerConfig& config,
                             const RowObserver& observer = {});

}  // namespace hyperpinn::train
