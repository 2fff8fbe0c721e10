#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hyperpinn::train {

// Returns f(x) and writes the gradient into `gradient` (same length as x).
// A non-finite return marks x as inadmissible.
using Objective = std::function<double(std::span<const double> x, std::span<double> gradient)>;

struct LineSearchConfig {
  double c1 = 1e-4;
  double c2 = 0.9;
  int max_probes = 25;

  void validate() const;
};

struct LineSearchResult {
  double step = 0.0;
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> gradient;
  int evaluations = 0;
};

// Bracket-and-zoom search for a step satisfying the strong Wolfe conditions
//   f(x + a d) <= f0 + c1 a g0.d,   |g(x + a d).d| <= c2 |g0.d|.
// Non-finite probes count as "step too long". Throws NotDescentDirection when
// g0.d >= 0 and MaxProbesExceeded when the probe budget runs out.
LineSearchResult strong_wolfe_search(const Objective& f, std::span<const double> x,
                                     std::span<const double> direction, double f0,
                                     std::span<const double> g0, double initial_step,
                                     const LineSearchConfig& config = {});

struct LbfgsConfig {
  int history = 20;
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;
  double initial_step = 1.0;
  LineSearchConfig line_search;

  void validate() const;
};

enum class StopReason { GradientTolerance, MaxIterations, LineSearchFailure, Callback };

std::string stop_reason_name(StopReason r);

enum class CallbackAction { Continue, Stop, ObjectiveChanged };

// State handed to the iteration callback. Returning ObjectiveChanged means
// the callback re-evaluated the objective at x and overwrote value/gradient.
struct IterateView {
  int iteration = 0;
  std::span<const double> x;
  double& value;
  std::span<double> gradient;
  double step = 0.0;
  int evaluations = 0;
};

using IterationCallback = std::function<CallbackAction(IterateView&)>;

struct IterationRecord {
  int iteration = 0;
  double value = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> gradient;
  int iterations = 0;
  int evaluations = 0;
  StopReason reason = StopReason::MaxIterations;
  std::string message;
  std::vector<IterationRecord> history;  // row 0 is the starting point
};

// Limited-memory BFGS with the two-loop recursion and strong Wolfe steps.
// Curvature pairs with s.y <= 1e-10 |s||y| are skipped. A failed line search
// drops the memory and retries once along -g before giving up; the last
// accepted iterate is returned either way. Throws NonFiniteObjective when
// f(x0) is not finite.
LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double> x0,
                           const LbfgsConfig& config = {},
                           const IterationCallback& callback = {});

double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace hyperpinn::train
