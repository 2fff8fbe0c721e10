#include "hyperpinn/io/history.hpp"

#include <sstream>

#include "hyperpinn/error.hpp"
#include "hyperpinn/io/text.hpp"

namespace hyperpinn::io {

const std::vector<std::string>& history_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"iter", "total"};
    for (int i = 0; i < loss::kTermCount; ++i) c.emplace_back(loss::term_name(i));
    for (int i = 0; i < loss::kTermCount; ++i) c.push_back("alpha_" + std::string(loss::term_name(i)));
    for (const char* extra : {"grad_norm", "step", "seconds", "stage", "load_fraction"}) c.emplace_back(extra);
    return c;
  }();
  return cols;
}

std::string format_history(const train::TrainingHistory& history) {
  std::string out;
  const auto& cols = history_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& r : history.rows) {
    out += std::to_string(r.iteration) + "," + format_double(r.total);
    for (double v : r.terms) out += "," + format_double(v);
    for (double v : r.weights) out += "," + format_double(v);
    out += "," + format_double(r.grad_norm) + "," + format_double(r.step) + "," +
           format_double(r.seconds) + "," + std::to_string(r.stage) + "," +
           format_double(r.load_fraction) + "\n";
  }
  return out;
}

train::TrainingHistory parse_history(std::string_view csv) {
  train::TrainingHistory h;
  const auto lines = split(csv, '\n');
  const std::size_t ncol = history_columns().size();
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const auto f = split(lines[li], ',');
    if (f.size() != ncol) {
      std::ostringstream msg;
      msg << "history line " << li + 1 << ": " << f.size() << " columns, expected " << ncol;
      throw IoError(msg.str());
    }
    std::vector<double> v(ncol);
    for (std::size_t c = 0; c < ncol; ++c) {
      if (!parse_double(f[c], v[c])) {
        throw IoError("history line " + std::to_string(li + 1) + ": bad number '" + f[c] + "'");
      }
    }
    train::HistoryRow r;
    r.iteration = static_cast<int>(v[0]);
    r.total = v[1];
    for (int i = 0; i < loss::kTermCount; ++i) {
      r.terms[i] = v[2 + i];
      r.weights[i] = v[8 + i];
    }
    r.grad_norm = v[14];
    r.step = v[15];
    r.seconds = v[16];
    r.stage = static_cast<int>(v[17]);
    r.load_fraction = v[18];
    h.rows.push_back(r);
  }
  return h;
}

void write_history(const train::TrainingHistory& history, const std::filesystem::path& path) {
  if (history.rows.empty()) throw IoError("write_history: history is empty");
  write_file(path, format_history(history));
}

train::TrainingHistory read_history(const std::filesystem::path& path) {
  return parse_history(read_file(path));
}

}  // namespace hyperpinn::io
