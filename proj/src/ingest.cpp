#include "eals/ingest.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <utility>

#include "eals/errors.hpp"

namespace eals {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  char sep = ' ';
  if (line.find('\t') != std::string::npos) {
    sep = '\t';
  } else if (line.find(',') != std::string::npos) {
    sep = ',';
  }
  std::vector<std::string> fields;
  std::string current;
  for (const char c : line) {
    if (c == sep) {
      // Runs of spaces collapse; tab/comma fields may not be empty either way.
      if (!current.empty() || sep != ' ') {
        fields.push_back(std::move(current));
        current.clear();
      }
    } else {
      current += c;
    }
  }
  if (!current.empty()) fields.push_back(std::move(current));
  return fields;
}

double parse_double(const std::string& field, std::size_t line, const char* what) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0' || errno == ERANGE) {
    throw DataError("line " + std::to_string(line) + ": " + what + " '" + field +
                    "' is not a number");
  }
  return value;
}

std::int64_t parse_int(const std::string& field, std::size_t line, const char* what) {
  errno = 0;
  char* end = nullptr;
  const long long value = std::strtoll(field.c_str(), &end, 10);
  if (end == field.c_str() || *end != '\0' || errno == ERANGE) {
    throw DataError("line " + std::to_string(line) + ": " + what + " '" + field +
                    "' is not an integer");
  }
  return value;
}

}  // namespace

std::vector<RawRating> parse_ratings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ratings file: " + path.string());

  std::vector<RawRating> out;
  std::unordered_map<std::string, std::size_t> seen;  // "user\x1fitem" -> first line
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    const auto fields = split_fields(line);
    if (fields.size() < 3 || fields.size() > 5) {
      throw DataError("line " + std::to_string(line_no) + ": expected 3 to 5 fields, got " +
                      std::to_string(fields.size()));
    }

    RawRating r;
    r.user = fields[0];
    r.item = fields[1];
    r.rating = parse_double(fields[2], line_no, "rating");
    if (fields.size() >= 4) r.timestamp = parse_int(fields[3], line_no, "timestamp");
    if (fields.size() == 5) r.weight = parse_double(fields[4], line_no, "weight");
    r.line = line_no;

    const std::string key = r.user + '\x1f' + r.item;
    const auto [it, inserted] = seen.emplace(key, line_no);
    if (!inserted) {
      throw DataError("line " + std::to_string(line_no) + ": duplicate pair (" + r.user + ", " +
                      r.item + "), first seen on line " + std::to_string(it->second));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::size_t IdMaps::user_id(const std::string& user) {
  const auto [it, inserted] = user_index.emplace(user, users.size());
  if (inserted) users.push_back(user);
  return it->second;
}

std::size_t IdMaps::item_id(const std::string& item) {
  const auto [it, inserted] = item_index.emplace(item, items.size());
  if (inserted) items.push_back(item);
  return it->second;
}

BuiltMatrix build_matrix(const std::vector<RawRating>& raw, const BuildOptions& options) {
  if (raw.empty()) throw DataError("build_matrix: no observed entries");

  IdMaps maps;
  std::vector<Entry> entries;
  entries.reserve(raw.size());
  for (const RawRating& r : raw) {
    Entry e;
    e.row = static_cast<std::uint32_t>(maps.user_id(r.user));
    e.col = static_cast<std::uint32_t>(maps.item_id(r.item));
    if (options.binarize) {
      e.value = 1.0;
    } else {
      if (r.rating == 0.0) {
        throw DataError("line " + std::to_string(r.line) +
                        ": zero rating is reserved for missing cells (use binarization)");
      }
      e.value = r.rating;
    }
    e.weight = r.weight.value_or(options.default_weight);
    if (e.weight < 0.0) {
      throw DataError("line " + std::to_string(r.line) + ": negative observed weight");
    }
    entries.push_back(e);
  }
  SparseRatingMatrix matrix(maps.users.size(), maps.items.size(), std::move(entries));
  return BuiltMatrix{std::move(matrix), std::move(maps)};
}

DatasetStats dataset_stats(const SparseRatingMatrix& data) {
  DatasetStats stats;
  stats.rows = data.num_rows();
  stats.cols = data.num_cols();
  stats.observed = data.num_observed();
  stats.sparsity = 1.0 - static_cast<double>(stats.observed) /
                             (static_cast<double>(stats.rows) * static_cast<double>(stats.cols));
  stats.item_counts.resize(stats.cols);
  for (std::size_t i = 0; i < stats.cols; ++i) {
    stats.item_counts[i] = data.col_entry_ids(i).size();
  }
  return stats;
}

}  // namespace eals
