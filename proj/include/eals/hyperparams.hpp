#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace eals {

struct Hyperparams {
  std::size_t k = 8;             // latent dimension
  std::size_t weight_rank = 1;   // rank Z of the missing-weight model
  double lambda = 0.01;          // L2 regularization strength
  std::size_t max_iters = 100;
  double rel_tol = 1e-6;         // relative objective-change stopping threshold
  std::uint64_t seed = 42;
  double init_stddev = 0.01;     // Gaussian init scale

  void validate() const {
    if (k < 1) throw std::invalid_argument("hyperparams: k must be >= 1");
    if (weight_rank < 1) throw std::invalid_argument("hyperparams: weight_rank must be >= 1");
    if (lambda < 0.0) throw std::invalid_argument("hyperparams: lambda must be >= 0");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("hyperparams: rel_tol must be > 0");
    if (!(init_stddev > 0.0)) throw std::invalid_argument("hyperparams: init_stddev must be > 0");
  }
};

}  // namespace eals
