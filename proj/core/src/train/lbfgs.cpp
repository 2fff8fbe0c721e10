#include "hyperpinn/train/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "hyperpinn/error.hpp"

namespace hyperpinn::train {

namespace {

constexpr double kCurvatureSkip = 1e-10;

struct Probe {
  double a = 0.0;
  double f = 0.0;
  double d = 0.0;  // directional derivative
  bool finite = true;
};

// Minimizer of the cubic through (a, fa, da), (b, fb, db), or NaN.
double cubic_min(const Probe& p, const Probe& q) {
  const double d1 = p.d + q.d - 3.0 * (p.f - q.f) / (p.a - q.a);
  const double disc = d1 * d1 - p.d * q.d;
  if (!(disc >= 0.0)) return std::nan("");
  const double d2 = std::copysign(std::sqrt(disc), q.a - p.a);
  return q.a - (q.a - p.a) * (q.d + d2 - d1) / (q.d - p.d + 2.0 * d2);
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

void LineSearchConfig::validate() const {
  if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) {
    throw ConfigError("line search: need 0 < c1 < c2 < 1");
  }
  if (max_probes < 1) throw ConfigError("line search: max_probes must be at least 1");
}

void LbfgsConfig::validate() const {
  line_search.validate();
  if (history < 1) throw ConfigError("lbfgs: history size must be at least 1");
  if (max_iterations < 0) throw ConfigError("lbfgs: max_iterations must be non-negative");
  if (!(gradient_tolerance >= 0.0)) throw ConfigError("lbfgs: gradient tolerance must be >= 0");
  if (!(initial_step > 0.0)) throw ConfigError("lbfgs: initial step must be positive");
}

std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::GradientTolerance: return "gradient_tolerance";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::LineSearchFailure: return "line_search_failure";
    case StopReason::Callback: return "callback";
  }
  return "unknown";
}

LineSearchResult strong_wolfe_search(const Objective& f, std::span<const double> x,
                                     std::span<const double> direction, double f0,
                                     std::span<const double> g0, double initial_step,
                                     const LineSearchConfig& config) {
  const double d0 = dot(g0, direction);
  if (!(d0 < 0.0)) {
    std::ostringstream msg;
    msg << "line search: direction is not a descent direction (g.d = " << d0 << ")";
    throw NotDescentDirection(msg.str());
  }
  const std::size_t n = x.size();
  LineSearchResult res;
  res.x.resize(n);
  res.gradient.resize(n);

  auto probe = [&](double a) {
    for (std::size_t i = 0; i < n; ++i) res.x[i] = x[i] + a * direction[i];
    ++res.evaluations;
    Probe p;
    p.a = a;
    p.f = f(res.x, res.gradient);
    p.d = dot(res.gradient, direction);
    p.finite = std::isfinite(p.f) && std::isfinite(p.d);
    return p;
  };
  auto accept = [&](const Probe& p) {
    res.step = p.a;
    res.value = p.f;
    return res;
  };
  auto sufficient = [&](const Probe& p) { return p.f <= f0 + config.c1 * p.a * d0; };
  auto curvature = [&](const Probe& p) { return std::abs(p.d) <= -config.c2 * d0; };
  auto exhausted = [&] {
    std::ostringstream msg;
    msg << "line search: no strong Wolfe step within " << config.max_probes << " probes";
    return MaxProbesExceeded(msg.str());
  };

  // lo always satisfies sufficient decrease and has the lowest value seen.
  auto zoom = [&](Probe lo, Probe hi) -> LineSearchResult {
    while (res.evaluations < config.max_probes) {
      double a = std::nan("");
      if (hi.finite) a = cubic_min(lo, hi);
      const double left = std::min(lo.a, hi.a);
      const double right = std::max(lo.a, hi.a);
      const double margin = 0.1 * (right - left);
      if (!std::isfinite(a) || a < left + margin || a > right - margin) a = 0.5 * (lo.a + hi.a);
      if (right - left <= 1e-16 * std::max(1.0, right)) break;
      const Probe p = probe(a);
      if (!p.finite || !sufficient(p) || p.f >= lo.f) {
        hi = p;
      } else {
        if (curvature(p)) return accept(p);
        if (p.d * (hi.a - lo.a) >= 0.0) hi = lo;
        lo = p;
      }
    }
    throw exhausted();
  };

  Probe prev{0.0, f0, d0, true};
  double a = initial_step;
  for (int i = 0; res.evaluations < config.max_probes; ++i) {
    const Probe p = probe(a);
    if (!p.finite || !sufficient(p) || (i > 0 && p.f >= prev.f)) return zoom(prev, p);
    if (curvature(p)) return accept(p);
    if (p.d >= 0.0) return zoom(p, prev);
    prev = p;
    a *= 2.0;
  }
  throw exhausted();
}

LbfgsResult lbfgs_minimize(const Objective& f, std::vector<double> x0, const LbfgsConfig& config,
                           const IterationCallback& callback) {
  config.validate();
  const std::size_t n = x0.size();
  LbfgsResult res;
  res.x = std::move(x0);
  res.gradient.assign(n, 0.0);
  res.value = f(res.x, res.gradient);
  res.evaluations = 1;
  if (!std::isfinite(res.value) || !std::isfinite(norm2(res.gradient))) {
    throw NonFiniteObjective("lbfgs: objective is not finite at the starting point");
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

  std::deque<std::vector<double>> s_hist;
  std::deque<std::vector<double>> y_hist;
  std::deque<double> rho;
  std::vector<double> d(n);
  std::vector<double> alpha_buf;

  if (notify(0, 0.0) == CallbackAction::Stop) {
    res.reason = StopReason::Callback;
    return res;
  }

  res.reason = StopReason::MaxIterations;
  for (int k = 1; k <= config.max_iterations; ++k) {
    const double gnorm = norm2(res.gradient);
    if (gnorm <= config.gradient_tolerance) {
      res.reason = StopReason::GradientTolerance;
      break;
    }

    auto steepest = [&] {
      for (std::size_t i = 0; i < n; ++i) d[i] = -res.gradient[i];
    };
    auto two_loop = [&] {
      for (std::size_t i = 0; i < n; ++i) d[i] = -res.gradient[i];
      const std::size_t m = s_hist.size();
      alpha_buf.assign(m, 0.0);
      for (std::size_t j = m; j-- > 0;) {
        alpha_buf[j] = rho[j] * dot(s_hist[j], d);
        for (std::size_t i = 0; i < n; ++i) d[i] -= alpha_buf[j] * y_hist[j][i];
      }
      const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& v : d) v *= gamma;
      for (std::size_t j = 0; j < m; ++j) {
        const double beta = rho[j] * dot(y_hist[j], d);
        for (std::size_t i = 0; i < n; ++i) d[i] += (alpha_buf[j] - beta) * s_hist[j][i];
      }
    };

    if (s_hist.empty()) {
      steepest();
    } else {
      two_loop();
      if (!(dot(d, res.gradient) < 0.0)) {
        s_hist.clear();
        y_hist.clear();
        rho.clear();
        steepest();
      }
    }

    LineSearchResult ls;
    bool searched = false;
    for (int attempt = 0; attempt < 2 && !searched; ++attempt) {
      const double a0 = s_hist.empty() ? std::min(1.0, 1.0 / gnorm) * config.initial_step
                                       : config.initial_step;
      try {
        ls = strong_wolfe_search(f, res.x, d, res.value, res.gradient, a0, config.line_search);
        searched = true;
      } catch (const LineSearchFailure& e) {
        res.evaluations += config.line_search.max_probes;
        res.message = e.what();
        if (s_hist.empty()) break;
        s_hist.clear();
        y_hist.clear();
        rho.clear();
        steepest();
      }
    }
    if (!searched) {
      res.reason = StopReason::LineSearchFailure;
      break;
    }
    res.evaluations += ls.evaluations;

    std::vector<double> s(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = ls.x[i] - res.x[i];
      y[i] = ls.gradient[i] - res.gradient[i];
    }
    res.x = std::move(ls.x);
    res.gradient = std::move(ls.gradient);
    res.value = ls.value;
    res.iterations = k;

    const double sy = dot(s, y);
    if (sy > kCurvatureSkip * norm2(s) * norm2(y)) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > config.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho.pop_front();
      }
    }

    if (notify(k, ls.step) == CallbackAction::Stop) {
      res.reason = StopReason::Callback;
      break;
    }
  }
  if (res.reason == StopReason::MaxIterations && norm2(res.gradient) <= config.gradient_tolerance) {
    res.reason = StopReason::GradientTolerance;
  }
  return res;
}

}  // namespace hyperpinn::train
