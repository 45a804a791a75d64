#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eals/sparse_matrix.hpp"

namespace eals {

struct BenchOptions {
  std::vector<std::size_t> ks = {8};
  std::vector<std::size_t> zs = {1};
  std::size_t fast_iters = 10;
  std::size_t vanilla_iters = 2;
  std::size_t repetitions = 3;  // per cell; the best mean is reported
  bool run_vanilla = false;     // vanilla runs at Z = 1 cells only
  double lambda = 0.01;
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

struct BenchCell {
  std::string solver;  // "fast" or "vanilla"
  std::size_t k = 0;
  std::size_t z = 0;
  std::size_t iters = 0;
  double mean_iter_seconds = 0.0;
};

// Times both solvers over the (K, Z) grid on the given data. Weight models
// are seeded random rank-Z models with positive factors, so every cell
// exercises the generic weighting path.
std::vector<BenchCell> run_bench(const SparseRatingMatrix& data, const BenchOptions& options);

std::string format_bench_table(const std::vector<BenchCell>& cells);

// Consecutive-Z time ratios per K, K ratios per Z, and vanilla/fast speedups
// where both were measured.
std::string format_scaling_report(const std::vector<BenchCell>& cells);

// Ratio t(K, z_hi) / t(K, z_lo) for the fast solver; returns 0 when either
// cell is missing.
double fast_z_ratio(const std::vector<BenchCell>& cells, std::size_t k, std::size_t z_lo,
                    std::size_t z_hi);

// Ratio vanilla / fast at (K, Z); 0 when either cell is missing.
double vanilla_speedup(const std::vector<BenchCell>& cells, std::size_t k, std::size_t z);

}  // namespace eals
