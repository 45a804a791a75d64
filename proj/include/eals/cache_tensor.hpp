#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eals/factor_model.hpp"
#include "eals/weight_model.hpp"

namespace eals {

enum class CacheKind { sq, sp };

// Z x K x K memoization tensor of weighted factor Gram statistics:
//   sq: S_tfk = sum_i b_it q_ik q_if    sp: S_tfk = sum_u a_ut p_uk p_uf
// Symmetric in (f, k) by definition; builders fill the upper triangle and
// mirror it, so the symmetry holds bitwise.
class CacheTensor {
 public:
  CacheTensor(CacheKind kind, std::size_t weight_rank, std::size_t factor_rank)
      : kind_(kind),
        weight_rank_(weight_rank),
        factor_rank_(factor_rank),
        values_(weight_rank * factor_rank * factor_rank, 0.0) {}

  CacheKind kind() const { return kind_; }
  std::size_t weight_rank() const { return weight_rank_; }
  std::size_t factor_rank() const { return factor_rank_; }

  double& at(std::size_t t, std::size_t f, std::size_t k) {
    return values_[(t * factor_rank_ + f) * factor_rank_ + k];
  }
  double at(std::size_t t, std::size_t f, std::size_t k) const {
    return values_[(t * factor_rank_ + f) * factor_rank_ + k];
  }

  // Contiguous slice S_tf. over k.
  std::span<const double> slice(std::size_t t, std::size_t f) const {
    return {values_.data() + (t * factor_rank_ + f) * factor_rank_, factor_rank_};
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

 private:
  CacheKind kind_;
  std::size_t weight_rank_;
  std::size_t factor_rank_;
  std::vector<double> values_;
};

// S^q from the column factors of the weight model and Q; O(N K^2 Z).
CacheTensor build_sq(const MissingWeightModel& weights, const FactorModel& model,
                     unsigned threads = 1);

// S^p from the row factors of the weight model and P; O(M K^2 Z).
CacheTensor build_sp(const MissingWeightModel& weights, const FactorModel& model,
                     unsigned threads = 1);

}  // namespace eals
