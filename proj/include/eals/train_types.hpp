#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "eals/factor_model.hpp"
#include "eals/hyperparams.hpp"
#include "eals/matrix.hpp"
#include "eals/weight_model.hpp"

namespace eals {

// A coordinate update whose denominator falls below this is rejected as
// singular rather than applied.
inline constexpr double kDenominatorEpsilon = 1e-12;

struct TrainOptions {
  // Explicit initial factors; Gaussian init from hp.seed otherwise.
  std::optional<std::pair<Matrix, Matrix>> init;
  // Uncertified weight models are refused unless lambda >= this guard.
  std::optional<double> uncertified_lambda_guard;
};

struct TrainResult {
  FactorModel model;
  std::vector<double> objective_trace;  // objective after each iteration
  std::vector<double> iter_seconds;     // wall time of each iteration
};

// Enforces the nonnegativity contract shared by both solvers.
void check_weight_certification(const MissingWeightModel& weights, const Hyperparams& hp,
                                const TrainOptions& options);

// Relative objective-change stopping rule.
inline bool converged(double previous, double current, double rel_tol) {
  const double diff = previous > current ? previous - current : current - previous;
  const double scale = previous < 0.0 ? -previous : previous;
  if (diff == 0.0) return true;
  return diff < rel_tol * (scale > 0.0 ? scale : 1.0);
}

}  // namespace eals
