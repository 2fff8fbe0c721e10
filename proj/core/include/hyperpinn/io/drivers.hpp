#pragma once

// Run orchestration shared by the command-line tool and the acceptance
// harness.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hyperpinn/io/config.hpp"
#include "hyperpinn/train/trainer.hpp"

namespace hyperpinn::io {

struct SolveReport {
  RunConfig run;
  bvp::ProblemSpec problem;
  train::TrainResult result;
  // Against the exact affine field, when the problem has one.
  std::optional<double> l2_error;
  std::filesystem::path directory;  // empty unless outputs were written
};

// Trains the configured problem. With write_outputs, history.csv,
// checkpoint.txt and config.txt land in output_directory(run).
SolveReport solve(const RunConfig& run, bool write_outputs,
                  const train::RowObserver& observer = {});

// Relative L2 displacement error on the problem's own grid (Simpson weights).
double exact_l2_error(const bvp::ProblemSpec& problem, const net::FieldNetwork& network,
                      const ad::ParamVector& phi);

struct MaskComparison {
  bvp::LossMask mask = bvp::LossMask::Full;
  double l2_error = 0.0;
  loss::TermArray final_terms{};
  int iterations = 0;
  std::string stop_reason;
};

// Runs the same configuration under the full, DEM and DCM masks. The
// problem must have an exact solution.
std::vector<MaskComparison> compare_masks(const RunConfig& base);
std::string format_mask_table(const std::vector<MaskComparison>& rows);

}  // namespace hyperpinn::io
