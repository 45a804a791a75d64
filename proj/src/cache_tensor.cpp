#include "eals/cache_tensor.hpp"

#include <stdexcept>

#include "eals/parallel.hpp"

namespace eals {

namespace {

// Accumulates sum_rows w_rt x_rk x_rf over rows [begin, end) into the upper
// triangle (k <= f) of the tensor.
void accumulate_triangle(CacheTensor& tensor, const Matrix& weight_factors,
                         const Matrix& factors, std::size_t begin, std::size_t end) {
  const std::size_t z = tensor.weight_rank();
  const std::size_t k_rank = tensor.factor_rank();
  for (std::size_t r = begin; r < end; ++r) {
    const auto x = factors.row(r);
    for (std::size_t t = 0; t < z; ++t) {
      const double w = weight_factors(r, t);
      if (w == 0.0) continue;
      for (std::size_t f = 0; f < k_rank; ++f) {
        const double wx = w * x[f];
        for (std::size_t k = 0; k <= f; ++k) {
          tensor.at(t, f, k) += wx * x[k];
        }
      }
    }
  }
}

void mirror_triangle(CacheTensor& tensor) {
  for (std::size_t t = 0; t < tensor.weight_rank(); ++t) {
    for (std::size_t f = 0; f < tensor.factor_rank(); ++f) {
      for (std::size_t k = 0; k < f; ++k) {
        tensor.at(t, k, f) = tensor.at(t, f, k);
      }
    }
  }
}

CacheTensor build(CacheKind kind, const Matrix& weight_factors, const Matrix& factors,
                  unsigned threads) {
  if (weight_factors.rows() != factors.rows()) {
    throw std::invalid_argument("cache tensor: weight factors and factors disagree on rows");
  }
  CacheTensor zero(kind, weight_factors.cols(), factors.cols());
  CacheTensor tensor = parallel_reduce(
      factors.rows(), threads, zero,
      [&](CacheTensor& acc, std::size_t begin, std::size_t end) {
        accumulate_triangle(acc, weight_factors, factors, begin, end);
      },
      [](CacheTensor& acc, const CacheTensor& part) {
        auto dst = acc.values();
        auto src = part.values();
        for (std::size_t idx = 0; idx < dst.size(); ++idx) dst[idx] += src[idx];
      });
  mirror_triangle(tensor);
  return tensor;
}

}  // namespace

CacheTensor build_sq(const MissingWeightModel& weights, const FactorModel& model,
                     unsigned threads) {
  return build(CacheKind::sq, weights.col_factors(), model.q, threads);
}

CacheTensor build_sp(const MissingWeightModel& weights, const FactorModel& model,
                     unsigned threads) {
  return build(CacheKind::sp, weights.row_factors(), model.p, threads);
}

}  // namespace eals
