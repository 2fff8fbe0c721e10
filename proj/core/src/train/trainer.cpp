#include "hyperpinn/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "hyperpinn/error.hpp"
#include "hyperpinn/loss/cov_weighting.hpp"

namespace hyperpinn::train {

void CurriculumSchedule::validate() const {
  if (fractions.empty()) throw ConfigError("curriculum: schedule is empty");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double f = fractions[i];
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("curriculum: fractions must lie in (0, 1]");
    if (i > 0 && !(f > fractions[i - 1])) {
      throw ConfigError("curriculum: fractions must be strictly increasing");
    }
  }
  if (fractions.back() != 1.0) throw ConfigError("curriculum: the last fraction must be 1");
}

namespace {

loss::TermArray to_terms(const std::vector<double>& v) {
  loss::TermArray a{};
  for (int i = 0; i < loss::kTermCount; ++i) a[i] = v[static_cast<std::size_t>(i)];
  return a;
}

}  // namespace

TrainResult train_stage(const bvp::ProblemSpec& problem, const net::FieldNetwork& network,
                        ad::ParamVector phi0, const TrainerConfig& config, int stage,
                        int first_iteration, const RowObserver& observer) {
  const loss::PinnObjective objective(problem, network, config.evaluation);
  const loss::TermMask& active = objective.active();
  loss::CovWeighting cov(std::vector<bool>(active.begin(), active.end()), loss::kEnergy);
  loss::TermArray weights = to_terms(cov.weights());

  ad::ParamVector phi = phi0;
  // Terms at the most recent evaluation and where it happened.
  loss::TermArray last_terms{};
  std::vector<double> last_x;

  auto evaluate = [&](std::span<const double> x, std::span<double> grad) -> loss::Evaluation {
    phi.values.assign(x.begin(), x.end());
    loss::Evaluation ev = objective.evaluate(phi, weights, true);
    std::copy(ev.gradient.begin(), ev.gradient.end(), grad.begin());
    last_terms = ev.terms;
    last_x.assign(x.begin(), x.end());
    return ev;
  };

  bool started = false;
  Objective f = [&](std::span<const double> x, std::span<double> grad) -> double {
    if (!started) return evaluate(x, grad).total;
    // probes may leave the admissible set; report them as non-finite
    try {
      return evaluate(x, grad).total;
    } catch (const NumericalError&) {
      return std::nan("");
    }
  };

  const auto t0 = std::chrono::steady_clock::now();
  TrainResult result;
  IterationCallback callback = [&](IterateView& view) -> CallbackAction {
    started = true;
    CallbackAction action = CallbackAction::Continue;
    if (!std::equal(view.x.begin(), view.x.end(), last_x.begin(), last_x.end())) {
      view.value = evaluate(view.x, view.gradient).total;
    }
    const loss::TermArray terms = last_terms;
    const loss::TermArray previous = weights;
    weights = to_terms(cov.update(std::vector<double>(terms.begin(), terms.end())));
    if (weights != previous) {
      view.value = evaluate(view.x, view.gradient).total;
      action = CallbackAction::ObjectiveChanged;
    }
    HistoryRow row;
    row.iteration = first_iteration + view.iteration;
    row.stage = stage;
    row.load_fraction = problem.load_scale;
    row.total = view.value;
    row.terms = terms;
    row.weights = weights;
    row.grad_norm = norm2(view.gradient);
    row.step = view.step;
    if (config.record_wall_time) {
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    result.history.rows.push_back(row);
    if (observer) observer(row);
    return action;
  };

  LbfgsResult opt;
  if (config.optimizer == Optimizer::Lbfgs) {
    opt = lbfgs_minimize(f, phi0.values, config.lbfgs, callback);
  } else {
    opt = gradient_descent_minimize(f, phi0.values, config.gd, callback);
  }
  result.phi = std::move(phi0);
  result.phi.values = std::move(opt.x);
  result.stages.push_back({stage, problem.load_scale, opt.reason, opt.iterations, opt.message});
  return result;
}

TrainResult curriculum_train(const bvp::ProblemSpec& problem, const net::FieldNetwork& network,
                             ad::ParamVector phi0, const TrainerConfig& config,
                             const RowObserver& observer) {
  config.schedule.validate();
  TrainResult total;
  total.phi = std::move(phi0);
  int next_iteration = 0;
  for (std::size_t s = 0; s < config.schedule.fractions.size(); ++s) {
    bvp::ProblemSpec staged = problem;
    staged.load_scale = problem.load_scale * config.schedule.fractions[s];
    TrainResult r;
    try {
      r = train_stage(staged, network, total.phi, config, static_cast<int>(s), next_iteration,
                      observer);
    } catch (const InvertedState& e) {
      std::ostringstream msg;
      msg << "stage " << s << ": " << e.what();
      throw InvertedState(msg.str(), e.point_index());
    } catch (const NumericalError& e) {
      std::ostringstream msg;
      msg << "stage " << s << ": " << e.what();
      throw NumericalError(msg.str());
    }
    if (!r.history.rows.empty()) next_iteration = r.history.rows.back().iteration + 1;
    total.phi = std::move(r.phi);
    total.history.rows.insert(total.history.rows.end(), r.history.rows.begin(),
                              r.history.rows.end());
    total.stages.insert(total.stages.end(), r.stages.begin(), r.stages.end());
  }
  return total;
}

}  // namespace hyperpinn::train
