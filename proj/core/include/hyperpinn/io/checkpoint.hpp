#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hyperpinn/ad/param_vector.hpp"
#include "hyperpinn/io/config.hpp"

namespace hyperpinn::io {

inline constexpr int kCheckpointVersion = 1;

// Text file: version line, the full effective configuration (which fixes the
// network layout and Fourier seed), then the parameter values.
std::string format_checkpoint(const RunConfig& run, const ad::ParamVector& phi);
void write_checkpoint(const std::filesystem::path& path, const RunConfig& run,
                      const ad::ParamVector& phi);

struct Checkpoint {
  RunConfig run;
  std::vector<double> values;
};

Checkpoint parse_checkpoint(std::string_view text);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace hyperpinn::io
