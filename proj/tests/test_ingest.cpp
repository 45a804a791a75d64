#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "eals/errors.hpp"
#include "eals/ingest.hpp"

using eals::BuildOptions;
using eals::RawRating;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("eals_ingest_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
            ".txt");
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("well-formed files parse with per-line separators") {
  TempFile file(
      "# comment\n"
      "u1\ti1\t4.5\t100\n"
      "u2,i1,3.0,200\n"
      "u1 i2 2.0 300\n");
  const auto raw = eals::parse_ratings(file.path);
  REQUIRE(raw.size() == 3);
  CHECK(raw[0].user == "u1");
  CHECK(raw[0].item == "i1");
  CHECK(raw[0].rating == 4.5);
  CHECK(raw[0].timestamp == 100);
  CHECK(raw[0].line == 2);
  CHECK(raw[1].user == "u2");
  CHECK(raw[2].timestamp == 300);
}

TEST_CASE("optional weight column lands in the entries") {
  TempFile file("u1,i1,4.0,100,2.5\n");
  const auto raw = eals::parse_ratings(file.path);
  REQUIRE(raw.size() == 1);
  CHECK(raw[0].weight == 2.5);
  const auto built = eals::build_matrix(raw);
  CHECK(built.matrix.entry(0).weight == 2.5);
}

TEST_CASE("parse errors carry line numbers") {
  SUBCASE("non-numeric rating") {
    TempFile file("u1,i1,notanumber\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(eals::parse_ratings(file.path)),
                         doctest::Contains("line 1"), eals::DataError);
  }
  SUBCASE("wrong field count") {
    TempFile file("u1,i1,1.0\nu2,i2\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(eals::parse_ratings(file.path)),
                         doctest::Contains("line 2"), eals::DataError);
  }
  SUBCASE("duplicate pair") {
    TempFile file("u1,i1,1.0\nu2,i1,2.0\nu1,i1,3.0\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(eals::parse_ratings(file.path)),
                         doctest::Contains("duplicate"), eals::DataError);
  }
  SUBCASE("unreadable file") {
    CHECK_THROWS_AS(static_cast<void>(eals::parse_ratings("/nonexistent/ratings.txt")),
                    eals::DataError);
  }
}

TEST_CASE("build_matrix compacts ids in first-occurrence order") {
  TempFile file(
      "bob,beta,1.0\n"
      "alice,alpha,2.0\n"
      "bob,alpha,3.0\n");
  const auto built = eals::build_matrix(eals::parse_ratings(file.path));
  CHECK(built.matrix.num_rows() == 2);
  CHECK(built.matrix.num_cols() == 2);
  CHECK(built.matrix.num_observed() == 3);
  CHECK(built.maps.users == std::vector<std::string>{"bob", "alice"});
  CHECK(built.maps.items == std::vector<std::string>{"beta", "alpha"});

  const auto stats = eals::dataset_stats(built.matrix);
  CHECK(stats.sparsity == doctest::Approx(0.25));
}

TEST_CASE("binarization and the zero-rating rule") {
  TempFile file("u1,i1,5.0\nu2,i2,0.0\n");
  const auto raw = eals::parse_ratings(file.path);
  CHECK_THROWS_WITH_AS(static_cast<void>(eals::build_matrix(raw)), doctest::Contains("zero"),
                       eals::DataError);
  BuildOptions binarize;
  binarize.binarize = true;
  const auto built = eals::build_matrix(raw, binarize);
  for (const auto& e : built.matrix.entries()) CHECK(e.value == 1.0);
}

TEST_CASE("empty input is rejected") {
  TempFile file("# only comments\n");
  const auto raw = eals::parse_ratings(file.path);
  CHECK(raw.empty());
  CHECK_THROWS_AS(static_cast<void>(eals::build_matrix(raw)), eals::DataError);
}

TEST_CASE("round-trip recovers the input multiset") {
  std::mt19937_64 rng(600);
  std::vector<RawRating> raw;
  std::map<std::pair<std::string, std::string>, double> source;
  for (int j = 0; j < 60; ++j) {
    RawRating r;
    r.user = "u" + std::to_string(rng() % 12);
    r.item = "i" + std::to_string(rng() % 15);
    if (source.count({r.user, r.item})) continue;
    r.rating = 1.0 + static_cast<double>(rng() % 5);
    source[{r.user, r.item}] = r.rating;
    raw.push_back(r);
  }
  const auto built = eals::build_matrix(raw);
  std::map<std::pair<std::string, std::string>, double> recovered;
  for (const auto& e : built.matrix.entries()) {
    recovered[{built.maps.users[e.row], built.maps.items[e.col]}] = e.value;
  }
  CHECK(recovered == source);
}

TEST_CASE("dataset stats and the frequency histogram") {
  SUBCASE("10x10 with one entry is 99% sparse") {
    const eals::SparseRatingMatrix m(10, 10, {eals::Entry{3, 4, 2.0, 1.0}});
    const auto stats = eals::dataset_stats(m);
    CHECK(stats.rows == 10);
    CHECK(stats.cols == 10);
    CHECK(stats.observed == 1);
    CHECK(stats.sparsity == doctest::Approx(0.99));
  }

  SUBCASE("zipf-like log histogram matches a counting oracle") {
    std::mt19937_64 rng(601);
    std::vector<RawRating> raw;
    std::map<std::string, std::size_t> expected;
    std::set<std::pair<std::string, std::string>> seen;
    for (int j = 0; j < 200; ++j) {
      // item popularity decays roughly harmonically
      std::size_t item = 0;
      while (item < 19 && rng() % 2 == 0) ++item;
      RawRating r;
      r.user = "u" + std::to_string(rng() % 40);
      r.item = "i" + std::to_string(item);
      if (!seen.insert({r.user, r.item}).second) continue;
      r.rating = 1.0;
      raw.push_back(r);
      ++expected[r.item];
    }
    const auto built = eals::build_matrix(raw);
    const auto stats = eals::dataset_stats(built.matrix);
    std::size_t total = 0;
    for (std::size_t i = 0; i < stats.cols; ++i) {
      CHECK(stats.item_counts[i] == expected[built.maps.items[i]]);
      total += stats.item_counts[i];
    }
    CHECK(total == built.matrix.num_observed());
  }
}
