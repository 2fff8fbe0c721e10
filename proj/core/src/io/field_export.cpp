#include "hyperpinn/io/field_export.hpp"

#include <sstream>

#include "hyperpinn/error.hpp"
#include "hyperpinn/io/text.hpp"

namespace hyperpinn::io {

Eigen::Matrix3Xd regular_grid(const Box& box, const std::array<int, 3>& counts) {
  for (int c : counts)
    if (c < 2) throw DomainError("regular_grid: need at least 2 points per axis");
  Eigen::Matrix3Xd X(3, static_cast<long>(counts[0]) * counts[1] * counts[2]);
  long n = 0;
  for (int k = 0; k < counts[2]; ++k)
    for (int j = 0; j < counts[1]; ++j)
      for (int i = 0; i < counts[0]; ++i, ++n) {
        const std::array<int, 3> idx{i, j, k};
        for (int a = 0; a < 3; ++a) {
          X(a, n) = idx[a] == counts[a] - 1
                        ? box.upper(a)
                        : box.lower(a) + idx[a] * box.lengths[a] / (counts[a] - 1);
        }
      }
  return X;
}

std::string format_fields_csv(const loss::FieldSample& s, const ExportMetadata& meta) {
  std::string out = "# hyperpinn field export\n";
  out += "# preset = " + meta.preset + "\n";
  out += "# config_hash = " + hex64(meta.config_hash) + "\n";
  out += "# seed = " + std::to_string(meta.seed) + "\n";
  out += "# units: X [m], u [m], P [Pa], S_vM [Pa]\n";
  out += "X1,X2,X3,u1,u2,u3,P11,P12,P13,P21,P22,P23,P31,P32,P33,S_vM\n";
  for (long n = 0; n < s.X.cols(); ++n) {
    std::string row;
    for (int a = 0; a < 3; ++a) row += format_double(s.X(a, n)) + ",";
    for (int a = 0; a < 3; ++a) row += format_double(s.u(a, n)) + ",";
    for (int k = 0; k < 9; ++k) row += format_double(s.P_net(k, n)) + ",";
    row += format_double(s.von_mises(n));
    out += row + "\n";
  }
  return out;
}

void write_fields_csv(const std::filesystem::path& path, const loss::FieldSample& s,
                      const ExportMetadata& meta) {
  write_file(path, format_fields_csv(s, meta));
}

Eigen::MatrixXd read_fields_csv(const std::filesystem::path& path) {
  const auto lines = split(read_file(path), '\n');
  std::vector<std::vector<double>> rows;
  bool header_seen = false;
  for (const auto& line : lines) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != kFieldColumns) throw IoError("field csv: row with wrong column count");
    std::vector<double> v(kFieldColumns);
    for (int c = 0; c < kFieldColumns; ++c)
      if (!parse_double(f[c], v[c])) throw IoError("field csv: bad number '" + f[c] + "'");
    rows.push_back(std::move(v));
  }
  Eigen::MatrixXd m(static_cast<long>(rows.size()), kFieldColumns);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < kFieldColumns; ++c) m(static_cast<long>(r), c) = rows[r][c];
  return m;
}

void write_fields_vtk(const std::filesystem::path& path, const loss::FieldSample& s,
                      const Box& box, const std::array<int, 3>& counts,
                      const ExportMetadata& meta) {
  const long n = static_cast<long>(counts[0]) * counts[1] * counts[2];
  if (s.X.cols() != n) throw LengthMismatch("write_fields_vtk: sample does not match the grid");
  std::ostringstream os;
  os.precision(17);
  os << "# vtk DataFile Version 3.0\n";
  os << "hyperpinn " << meta.preset << " config " << hex64(meta.config_hash) << "\n";
  os << "ASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << counts[0] << " " << counts[1] << " " << counts[2] << "\n";
  os << "ORIGIN " << box.origin[0] << " " << box.origin[1] << " " << box.origin[2] << "\n";
  os << "SPACING";
  for (int a = 0; a < 3; ++a) os << " " << box.lengths[a] / (counts[a] - 1);
  os << "\nPOINT_DATA " << n << "\n";
  os << "VECTORS u double\n";
  for (long p = 0; p < n; ++p) os << s.u(0, p) << " " << s.u(1, p) << " " << s.u(2, p) << "\n";
  os << "TENSORS P double\n";
  for (long p = 0; p < n; ++p) {
    for (int i = 0; i < 3; ++i)
      os << s.P_net(3 * i, p) << " " << s.P_net(3 * i + 1, p) << " " << s.P_net(3 * i + 2, p) << "\n";
  }
  os << "SCALARS S_vM double 1\nLOOKUP_TABLE default\n";
  for (long p = 0; p < n; ++p) os << s.von_mises(p) << "\n";
  write_file(path, os.str());
}

}  // namespace hyperpinn::io
