#include <benchmark/benchmark.h>

#include <random>

#include "hyperpinn/bvp/problem.hpp"
#include "hyperpinn/loss/objective.hpp"
#include "hyperpinn/mat/materials.hpp"
#include "hyperpinn/net/field_network.hpp"

namespace hp = hyperpinn;

namespace {

hp::net::FieldNetwork network(int width, int features) {
  return hp::net::FieldNetwork(hp::net::RffMap::sample(features, 1.0, 3), {width, width}, 385.0);
}

void BM_ObjectiveGradient(benchmark::State& state) {
  hp::bvp::ProblemSpec problem = hp::bvp::nh_localized_traction();
  const int n = static_cast<int>(state.range(0));
  problem.domain.counts = {n, n, n};
  const auto net = network(32, 16);
  const hp::loss::PinnObjective objective(problem, net);
  hp::ad::ParamVector phi = net.initialize(1);
  hp::loss::TermArray w;
  w.fill(1.0 / hp::loss::kTermCount);
  for (auto _ : state) {
    benchmark::DoNotOptimize(objective.evaluate(phi, w, true).total);
  }
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_ObjectiveGradient)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_ObjectiveValue(benchmark::State& state) {
  hp::bvp::ProblemSpec problem = hp::bvp::nh_localized_traction();
  problem.domain.counts = {9, 9, 9};
  const auto net = network(32, 16);
  const hp::loss::PinnObjective objective(problem, net);
  hp::ad::ParamVector phi = net.initialize(1);
  hp::loss::TermArray w;
  w.fill(1.0 / hp::loss::kTermCount);
  for (auto _ : state) {
    benchmark::DoNotOptimize(objective.evaluate(phi, w, false).total);
  }
}
BENCHMARK(BM_ObjectiveValue)->Unit(benchmark::kMillisecond);

void BM_NetworkJets(benchmark::State& state) {
  const auto net = network(static_cast<int>(state.range(0)), 16);
  const hp::ad::ParamVector phi = net.initialize(1);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  hp::ad::Array X(3, 256);
  for (Eigen::Index k = 0; k < X.size(); ++k) X.data()[k] = u(rng);
  for (auto _ : state) {
    hp::ad::Tape tape;
    std::array<hp::ad::Jet, 3> x{hp::ad::Jet::lift_coordinate(tape, X, 0, 2),
                                 hp::ad::Jet::lift_coordinate(tape, X, 1, 2),
                                 hp::ad::Jet::lift_coordinate(tape, X, 2, 2)};
    benchmark::DoNotOptimize(net.forward(tape, x, phi, false).y_u[0].value().value().sum());
  }
}
BENCHMARK(BM_NetworkJets)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_FirstPiola(benchmark::State& state) {
  const hp::mat::Material m = state.range(0) == 0
                                  ? hp::mat::Material(hp::mat::NeoHookean{577.0, 385.0})
                                  : hp::mat::Material(hp::mat::LopezPamies{{{1.0, 100.0}, {-2.0, 50.0}}, 100.0});
  const hp::ad::Mat3<double> G{0.1, 0.05, 0.0, 0.02, -0.05, 0.01, 0.0, 0.03, 0.08};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hp::mat::first_piola(m, hp::mat::deformation_gradient(G)));
  }
}
BENCHMARK(BM_FirstPiola)->Arg(0)->Arg(1);

}  // namespace
BENCHMARK_MAIN();
