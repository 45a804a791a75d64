#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eals/factor_model.hpp"
#include "eals/ingest.hpp"
#include "eals/sparse_matrix.hpp"

namespace eals {

struct TestPair {
  std::size_t user = 0;
  std::size_t item = 0;
};

struct EvalSplit {
  SparseRatingMatrix train;
  std::vector<TestPair> test;  // one held-out item per eligible user, ascending user id
  IdMaps maps;                 // ids cover train and test alike
};

// Holds out each user's chronologically last entry (ties and missing
// timestamps resolved by file order, last occurrence wins). Users with a
// single entry stay in train only. Ids are compacted over the full input, so
// items seen only in test remain valid columns.
EvalSplit leave_one_out(const std::vector<RawRating>& raw, const BuildOptions& options = {});

// Top-n unrated items of user u by descending score, ties broken by
// ascending item id.
std::vector<std::size_t> rank_topn(const FactorModel& model, std::size_t u,
                                   const SparseRatingMatrix& train, std::size_t n);

// 1 when the held-out item appears in the ranked list.
int hr_at_n(std::span<const std::size_t> ranked, std::size_t test_item);

// 1 / log2(pos + 1) at the 1-based hit position, 0 on a miss.
double ndcg_at_n(std::span<const std::size_t> ranked, std::size_t test_item);

struct RankingReport {
  double hr = 0.0;    // mean over test users
  double ndcg = 0.0;
  std::size_t users_evaluated = 0;
  std::vector<double> per_user_hr;
  std::vector<double> per_user_ndcg;
};

RankingReport evaluate_ranking(const FactorModel& model, const EvalSplit& split, std::size_t n,
                               unsigned threads = 1);

// Mean absolute difference of the two models' predictions on observed
// entries.
double mae_between(const FactorModel& a, const FactorModel& b, const SparseRatingMatrix& data);

}  // namespace eals
