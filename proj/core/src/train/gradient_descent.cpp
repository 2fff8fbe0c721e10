#include "hyperpinn/train/gradient_descent.hpp"

#include <cmath>

#include "hyperpinn/error.hpp"

namespace hyperpinn::train {

std::vector<double> gd_step(std::span<const double> phi, std::span<const double> gradient,
                            double beta) {
  if (phi.size() != gradient.size()) throw LengthMismatch("gd_step: gradient length differs");
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) out[i] = phi[i] - beta * gradient[i];
  return out;
}

void GdConfig::validate() const {
  if (!(step > 0.0)) throw ConfigError("gradient descent: step must be positive");
  if (max_iterations < 0) throw ConfigError("gradient descent: max_iterations must be >= 0");
}

LbfgsResult gradient_descent_minimize(const Objective& f, std::vector<double> x0,
                                      const GdConfig& config, const IterationCallback& callback) {
  config.validate();
  LbfgsResult res;
  res.x = std::move(x0);
  res.gradient.assign(res.x.size(), 0.0);
  res.value = f(res.x, res.gradient);
  res.evaluations = 1;
  if (!std::isfinite(res.value)) {
    throw NonFiniteObjective("gradient descent: objective is not finite at the starting point");
  }
  auto notify = [&](int iteration, double step) {
    CallbackAction action = CallbackAction::Continue;
    if (callback) {
      IterateView view{iteration, res.x, res.value, res.gradient, step, res.evaluations};
      action = callback(view);
    }
    res.history.push_back({iteration, res.value, norm2(res.gradient), step});
    return action;
  };
  if (notify(0, 0.0) == CallbackAction::Stop) {
    res.reason = StopReason::Callback;
    return res;
  }
  res.reason = StopReason::MaxIterations;
  std::vector<double> g(res.x.size());
  for (int k = 1; k <= config.max_iterations; ++k) {
    if (norm2(res.gradient) <= config.gradient_tolerance) {
      res.reason = StopReason::GradientTolerance;
      break;
    }
    std::vector<double> x = gd_step(res.x, res.gradient, config.step);
    const double v = f(x, g);
    ++res.evaluations;
    if (!std::isfinite(v)) {
      res.reason = StopReason::LineSearchFailure;
      res.message = "gradient descent: non-finite objective after step";
      break;
    }
    res.x = std::move(x);
    res.value = v;
    res.gradient = g;
    res.iterations = k;
    if (notify(k, config.step) == CallbackAction::Stop) {
      res.reason = StopReason::Callback;
      break;
    }
  }
  return res;
}

}  // namespace hyperpinn::train
