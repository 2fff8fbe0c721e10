#include "hyperpinn/io/drivers.hpp"

#include <sstream>

#include "hyperpinn/io/checkpoint.hpp"
#include "hyperpinn/io/history.hpp"
#include "hyperpinn/io/text.hpp"
#include "hyperpinn/oracle/oracle.hpp"

namespace hyperpinn::io {

double exact_l2_error(const bvp::ProblemSpec& problem, const net::FieldNetwork& network,
                      const ad::ParamVector& phi) {
  const bvp::PointSets sets = bvp::build_point_sets(problem.domain);
  const loss::FieldSample s = loss::sample_fields(problem, network, phi, sets.points);
  Eigen::Matrix3Xd exact(3, sets.points.cols());
  for (Eigen::Index n = 0; n < sets.points.cols(); ++n) {
    const auto u = problem.exact_displacement(sets.point(n));
    exact.col(n) << u[0], u[1], u[2];
  }
  return oracle::l2_error(s.u, exact, sets.volume_weights);
}

SolveReport solve(const RunConfig& run, bool write_outputs, const train::RowObserver& observer) {
  SolveReport report;
  report.run = run;
  report.problem = build_problem(run);
  const net::FieldNetwork network = build_network(run);
  report.result = train::curriculum_train(report.problem, network,
                                          initial_parameters(run, network), trainer_config(run),
                                          observer);
  if (report.problem.exact_gradient) {
    report.l2_error = exact_l2_error(report.problem, network, report.result.phi);
  }
  if (write_outputs) {
    report.directory = output_directory(run);
    std::filesystem::create_directories(report.directory);
    write_history(report.result.history, report.directory / "history.csv");
    write_checkpoint(report.directory / "checkpoint.txt", run, report.result.phi);
    write_file(report.directory / "config.txt", to_config(run).canonical());
  }
  return report;
}

std::vector<MaskComparison> compare_masks(const RunConfig& base) {
  std::vector<MaskComparison> rows;
  for (bvp::LossMask mask : {bvp::LossMask::Full, bvp::LossMask::Dem, bvp::LossMask::Dcm}) {
    RunConfig run = base;
    run.mask = mask;
    const SolveReport r = solve(run, false);
    if (!r.l2_error) throw ConfigError("compare-masks: preset '" + run.preset + "' has no exact solution");
    MaskComparison row;
    row.mask = mask;
    row.l2_error = *r.l2_error;
    row.final_terms = r.result.history.rows.back().terms;
    row.iterations = r.result.history.rows.back().iteration;
    row.stop_reason = train::stop_reason_name(r.result.stages.back().reason);
    rows.push_back(row);
  }
  return rows;
}

std::string format_mask_table(const std::vector<MaskComparison>& rows) {
  std::ostringstream out;
  out << "mask,l2_error";
  for (int k = 0; k < loss::kTermCount; ++k) out << ',' << loss::term_name(k);
  out << ",iterations,stop\n";
  for (const auto& r : rows) {
    out << bvp::mask_name(r.mask) << ',' << format_double(r.l2_error);
    for (double v : r.final_terms) out << ',' << format_double(v);
    out << ',' << r.iterations << ',' << r.stop_reason << '\n';
  }
  return out.str();
}

}  // namespace hyperpinn::io
