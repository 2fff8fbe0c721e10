#include "hyperpinn/io/checkpoint.hpp"

#include <sstream>

#include "hyperpinn/error.hpp"
#include "hyperpinn/io/text.hpp"

namespace hyperpinn::io {

namespace {
constexpr std::string_view kMagic = "hyperpinn-checkpoint";
}

std::string format_checkpoint(const RunConfig& run, const ad::ParamVector& phi) {
  phi.validate();
  std::string out = std::string(kMagic) + " " + std::to_string(kCheckpointVersion) + "\n";
  out += "[config]\n" + to_config(run).canonical();
  out += "[parameters] " + std::to_string(phi.values.size()) + "\n";
  for (double v : phi.values) out += format_double(v) + "\n";
  return out;
}

void write_checkpoint(const std::filesystem::path& path, const RunConfig& run,
                      const ad::ParamVector& phi) {
  write_file(path, format_checkpoint(run, phi));
}

Checkpoint parse_checkpoint(std::string_view text) {
  const auto lines = split(text, '\n');
  if (lines.empty() || lines[0] != std::string(kMagic) + " " + std::to_string(kCheckpointVersion)) {
    throw IoError("checkpoint: missing or unsupported version header");
  }
  if (lines.size() < 2 || lines[1] != "[config]") throw IoError("checkpoint: missing [config]");
  std::size_t i = 2;
  std::string cfg;
  while (i < lines.size() && lines[i].rfind("[parameters]", 0) != 0) cfg += lines[i++] + "\n";
  if (i == lines.size()) throw IoError("checkpoint: missing [parameters]");
  long count = 0;
  if (!parse_int(std::string_view(lines[i]).substr(12), count) || count < 0) {
    throw IoError("checkpoint: bad parameter count");
  }
  Checkpoint c;
  c.run = resolve(Config::parse(cfg, "checkpoint"));
  for (++i; i < lines.size() && static_cast<long>(c.values.size()) < count; ++i) {
    double v = 0.0;
    if (!parse_double(lines[i], v)) throw IoError("checkpoint: bad parameter '" + lines[i] + "'");
    c.values.push_back(v);
  }
  if (static_cast<long>(c.values.size()) != count) {
    std::ostringstream msg;
    msg << "checkpoint: expected " << count << " parameters, found " << c.values.size();
    throw IoError(msg.str());
  }
  return c;
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  return parse_checkpoint(read_file(path));
}

}  // namespace hyperpinn::io
