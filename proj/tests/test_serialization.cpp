#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "eals/errors.hpp"
#include "eals/serialization.hpp"
#include "oracles.hpp"

namespace {

std::filesystem::path temp_path(const std::string& stem) {
  static int counter = 0;
  return std::filesystem::temp_directory_path() /
         ("eals_ser_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" +
          stem);
}

}  // namespace

TEST_CASE("model checkpoints round-trip exactly") {
  const auto inst = oracles::random_instance(6, 5, 1, 0.4, 700);
  const eals::FactorModel model = oracles::random_model(inst.data, 3, 701);
  const auto path = temp_path("model.ckpt");
  eals::save_model(path, model);
  const eals::FactorModel loaded = eals::load_model(path);
  CHECK(loaded.p == model.p);
  CHECK(loaded.q == model.q);
  CHECK(loaded.rhat.empty());
  std::filesystem::remove(path);
}

TEST_CASE("weight models round-trip with re-derived certification") {
  const auto inst = oracles::random_instance(5, 4, 2, 0.4, 710);
  const auto path = temp_path("weights.txt");
  eals::save_weight_model(path, inst.weights);
  const auto loaded = eals::load_weight_model(path);
  CHECK(loaded.row_factors() == inst.weights.row_factors());
  CHECK(loaded.col_factors() == inst.weights.col_factors());
  CHECK(loaded.certified_nonnegative());
  std::filesystem::remove(path);
}

TEST_CASE("truncated or corrupt files are data errors") {
  const auto path = temp_path("bad.ckpt");
  {
    std::ofstream out(path);
    out << "3 2 2\n1.0 2.0\n";  // body too short
  }
  CHECK_THROWS_AS(static_cast<void>(eals::load_model(path)), eals::DataError);
  {
    std::ofstream out(path);
    out << "0 2 2\n";
  }
  CHECK_THROWS_AS(static_cast<void>(eals::load_model(path)), eals::DataError);
  CHECK_THROWS_AS(static_cast<void>(eals::load_model(temp_path("missing.ckpt"))),
                  eals::DataError);
  std::filesystem::remove(path);
}

TEST_CASE("format_double round-trips doubles through text") {
  for (const double v : {0.0, 1.0, -2.5, 1.0 / 3.0, 6.02214076e23, 2.2250738585072014e-308,
                         0.1}) {
    const std::string text = eals::format_double(v);
    CHECK(std::stod(text) == v);
  }
}

TEST_CASE("id maps serialize as two-column lines") {
  const auto path = temp_path("ids.tsv");
  eals::save_id_map(path, {"alice", "bob"});
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "0\talice");
  std::getline(in, line);
  CHECK(line == "1\tbob");
  std::filesystem::remove(path);
}
