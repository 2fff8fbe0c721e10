#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hyperpinn/train/trainer.hpp"

namespace hyperpinn::io {

// iter, total, six terms, six weights, grad_norm, step, seconds, stage,
// load_fraction.
const std::vector<std::string>& history_columns();

std::string format_history(const train::TrainingHistory& history);
train::TrainingHistory parse_history(std::string_view csv);

// Throws IoError on an empty history or a write failure.
void write_history(const train::TrainingHistory& history, const std::filesystem::path& path);
train::TrainingHistory read_history(const std::filesystem::path& path);

}  // namespace hyperpinn::io
