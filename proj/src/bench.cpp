#include "eals/bench.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "eals/solver_fast.hpp"
#include "eals/solver_vanilla.hpp"

namespace eals {

namespace {

// Rank-Z weight model with positive factors; products average roughly c0/N
// per missing cell so the weighting stays in a realistic regime.
MissingWeightModel random_weight_model(std::size_t rows, std::size_t cols, std::size_t z,
                                       double c0, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto uniform01 = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  Matrix a(rows, z);
  Matrix b(cols, z);
  const double row_scale = c0 / static_cast<double>(z);
  for (double& v : a.values()) v = row_scale * (0.5 + uniform01());
  const double col_scale = 1.0 / static_cast<double>(cols);
  for (double& v : b.values()) v = col_scale * (0.5 + uniform01());
  return MissingWeightModel(std::move(a), std::move(b), true);
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double find_cell(const std::vector<BenchCell>& cells, const std::string& solver, std::size_t k,
                 std::size_t z) {
  for (const BenchCell& c : cells) {
    if (c.solver == solver && c.k == k && c.z == z) return c.mean_iter_seconds;
  }
  return 0.0;
}

}  // namespace

std::vector<BenchCell> run_bench(const SparseRatingMatrix& data, const BenchOptions& options) {
  std::vector<BenchCell> cells;
  for (const std::size_t k : options.ks) {
    for (const std::size_t z : options.zs) {
      const MissingWeightModel weights =
          random_weight_model(data.num_rows(), data.num_cols(), z, 1.0, options.seed + z);

      Hyperparams hp;
      hp.k = k;
      hp.weight_rank = z;
      hp.lambda = options.lambda;
      hp.seed = options.seed;
      hp.rel_tol = std::numeric_limits<double>::min();  // never stop early

      hp.max_iters = options.fast_iters;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t rep = 0; rep < std::max<std::size_t>(1, options.repetitions); ++rep) {
        const TrainResult run = train_fast(data, weights, hp, {}, options.threads);
        best = std::min(best, mean(run.iter_seconds));
      }
      cells.push_back(BenchCell{"fast", k, z, options.fast_iters, best});

      if (options.run_vanilla && z == 1) {
        hp.max_iters = options.vanilla_iters;
        const TrainResult run = train_vanilla(data, weights, hp);
        cells.push_back(
            BenchCell{"vanilla", k, z, options.vanilla_iters, mean(run.iter_seconds)});
      }
    }
  }
  return cells;
}

std::string format_bench_table(const std::vector<BenchCell>& cells) {
  std::ostringstream out;
  out << "solver,k,z,iters,mean_iter_seconds\n";
  for (const BenchCell& c : cells) {
    out << c.solver << ',' << c.k << ',' << c.z << ',' << c.iters << ',' << c.mean_iter_seconds
        << '\n';
  }
  return out.str();
}

double fast_z_ratio(const std::vector<BenchCell>& cells, std::size_t k, std::size_t z_lo,
                    std::size_t z_hi) {
  const double lo = find_cell(cells, "fast", k, z_lo);
  const double hi = find_cell(cells, "fast", k, z_hi);
  return lo > 0.0 ? hi / lo : 0.0;
}

double vanilla_speedup(const std::vector<BenchCell>& cells, std::size_t k, std::size_t z) {
  const double fast = find_cell(cells, "fast", k, z);
  const double vanilla = find_cell(cells, "vanilla", k, z);
  return fast > 0.0 ? vanilla / fast : 0.0;
}

std::string format_scaling_report(const std::vector<BenchCell>& cells) {
  std::ostringstream out;

  std::vector<std::size_t> ks, zs;
  for (const BenchCell& c : cells) {
    if (c.solver != "fast") continue;
    if (std::find(ks.begin(), ks.end(), c.k) == ks.end()) ks.push_back(c.k);
    if (std::find(zs.begin(), zs.end(), c.z) == zs.end()) zs.push_back(c.z);
  }

  for (const std::size_t k : ks) {
    for (std::size_t j = 1; j < zs.size(); ++j) {
      const double ratio = fast_z_ratio(cells, k, zs[j - 1], zs[j]);
      if (ratio > 0.0) {
        out << "z_ratio k=" << k << " t(z=" << zs[j] << ")/t(z=" << zs[j - 1] << ")=" << ratio
            << '\n';
      }
    }
  }
  for (const std::size_t z : zs) {
    for (std::size_t j = 1; j < ks.size(); ++j) {
      const double lo = find_cell(cells, "fast", ks[j - 1], z);
      const double hi = find_cell(cells, "fast", ks[j], z);
      if (lo > 0.0 && hi > 0.0) {
        out << "k_ratio z=" << z << " t(k=" << ks[j] << ")/t(k=" << ks[j - 1] << ")=" << hi / lo
            << '\n';
      }
    }
  }
  for (const std::size_t k : ks) {
    const double speedup = vanilla_speedup(cells, k, 1);
    if (speedup > 0.0) out << "speedup k=" << k << " vanilla/fast=" << speedup << '\n';
  }
  return out.str();
}

}  // namespace eals
