#include "eals/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "eals/errors.hpp"

namespace eals {

std::string format_double(double value) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    double parsed = 0.0;
    std::sscanf(buf, "%lf", &parsed);
    if (parsed == value) break;
  }
  return buf;
}

namespace {

void write_matrix_rows(std::ostream& out, const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << format_double(row[c]);
    }
    out << '\n';
  }
}

Matrix read_matrix_rows(std::istream& in, std::size_t rows, std::size_t cols, const char* what) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (!(in >> m(r, c))) {
        throw DataError(std::string(what) + ": truncated or malformed matrix body");
      }
    }
  }
  return m;
}

}  // namespace

void save_model(const std::filesystem::path& path, const FactorModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint: " + path.string());
  out << model.num_rows() << ' ' << model.num_cols() << ' ' << model.rank() << '\n';
  write_matrix_rows(out, model.p);
  write_matrix_rows(out, model.q);
  if (!out) throw DataError("failed writing checkpoint: " + path.string());
}

FactorModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());
  std::size_t rows = 0, cols = 0, rank = 0;
  if (!(in >> rows >> cols >> rank) || rows == 0 || cols == 0 || rank == 0) {
    throw DataError("checkpoint header must be `M N K` with positive counts: " + path.string());
  }
  FactorModel model;
  model.p = read_matrix_rows(in, rows, rank, "checkpoint");
  model.q = read_matrix_rows(in, cols, rank, "checkpoint");
  return model;
}

void save_weight_model(const std::filesystem::path& path, const MissingWeightModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write weight model: " + path.string());
  out << model.rank() << ' ' << model.num_rows() << ' ' << model.num_cols() << '\n';
  write_matrix_rows(out, model.row_factors());
  write_matrix_rows(out, model.col_factors());
  if (!out) throw DataError("failed writing weight model: " + path.string());
}

MissingWeightModel load_weight_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open weight model: " + path.string());
  std::size_t rank = 0, rows = 0, cols = 0;
  if (!(in >> rank >> rows >> cols) || rank == 0 || rows == 0 || cols == 0) {
    throw DataError("weight model header must be `Z M N` with positive counts: " +
                    path.string());
  }
  Matrix a = read_matrix_rows(in, rows, rank, "weight model");
  Matrix b = read_matrix_rows(in, cols, rank, "weight model");
  return make_weight_model(std::move(a), std::move(b));
}

void save_id_map(const std::filesystem::path& path, const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write id map: " + path.string());
  for (std::size_t id = 0; id < names.size(); ++id) {
    out << id << '\t' << names[id] << '\n';
  }
  if (!out) throw DataError("failed writing id map: " + path.string());
}

}  // namespace eals
