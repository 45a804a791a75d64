#pragma once

#include <filesystem>
#include <string>

#include "eals/factor_model.hpp"
#include "eals/ingest.hpp"
#include "eals/weight_model.hpp"

namespace eals {

// Shortest decimal form that round-trips the exact double.
std::string format_double(double value);

// Model checkpoint: header `M N K`, then the M rows of P and N rows of Q as
// space-separated decimal floats.
void save_model(const std::filesystem::path& path, const FactorModel& model);
// Loads factors; the prediction cache stays empty until rebuilt against data.
FactorModel load_model(const std::filesystem::path& path);

// Weight model file: header `Z M N`, then the rows of A and rows of B.
void save_weight_model(const std::filesystem::path& path, const MissingWeightModel& model);
// Nonnegativity certification is re-derived from the loaded factors.
MissingWeightModel load_weight_model(const std::filesystem::path& path);

// Two-column `id<TAB>original` files for inverse lookup at recommendation
// time.
void save_id_map(const std::filesystem::path& path, const std::vector<std::string>& names);

}  // namespace eals
