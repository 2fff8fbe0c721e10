#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "hyperpinn/geometry.hpp"
#include "hyperpinn/loss/objective.hpp"

namespace hyperpinn::io {

struct ExportMetadata {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string preset;
};

inline constexpr int kFieldColumns = 16;  // X(3), u(3), P(9), S_vM

// Regular lattice over the box (counts >= 2 per axis), first axis fastest.
Eigen::Matrix3Xd regular_grid(const Box& box, const std::array<int, 3>& counts);

// '#' metadata lines, a header row, then one row per point.
std::string format_fields_csv(const loss::FieldSample& s, const ExportMetadata& meta);
void write_fields_csv(const std::filesystem::path& path, const loss::FieldSample& s,
                      const ExportMetadata& meta);
// Rows of the CSV body (n x 16).
Eigen::MatrixXd read_fields_csv(const std::filesystem::path& path);

// Legacy ASCII VTK structured points with point data u (vector), P (tensor)
// and S_vM (scalar). The sample must come from regular_grid(box, counts).
void write_fields_vtk(const std::filesystem::path& path, const loss::FieldSample& s,
                      const Box& box, const std::array<int, 3>& counts,
                      const ExportMetadata& meta);

}  // namespace hyperpinn::io
