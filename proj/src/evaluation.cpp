#include "eals/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eals/errors.hpp"
#include "eals/parallel.hpp"

namespace eals {

EvalSplit leave_one_out(const std::vector<RawRating>& raw, const BuildOptions& options) {
  if (raw.empty()) throw DataError("leave_one_out: no input entries");

  IdMaps maps;
  std::vector<std::size_t> user_of(raw.size());
  std::vector<std::size_t> item_of(raw.size());
  for (std::size_t idx = 0; idx < raw.size(); ++idx) {
    user_of[idx] = maps.user_id(raw[idx].user);
    item_of[idx] = maps.item_id(raw[idx].item);
  }

  // Per user, the entry with the greatest (timestamp, file position) key.
  const std::size_t num_users = maps.users.size();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> held_out(num_users, kNone);
  std::vector<std::size_t> entry_count(num_users, 0);
  for (std::size_t idx = 0; idx < raw.size(); ++idx) {
    const std::size_t u = user_of[idx];
    ++entry_count[u];
    if (held_out[u] == kNone) {
      held_out[u] = idx;
      continue;
    }
    const auto key = [&](std::size_t e) {
      return std::pair<std::int64_t, std::size_t>(raw[e].timestamp.value_or(0), e);
    };
    if (key(idx) > key(held_out[u])) held_out[u] = idx;
  }

  std::vector<char> is_test(raw.size(), 0);
  std::vector<TestPair> test;
  for (std::size_t u = 0; u < num_users; ++u) {
    if (entry_count[u] < 2) continue;  // single-entry users stay in train
    is_test[held_out[u]] = 1;
    test.push_back(TestPair{u, item_of[held_out[u]]});
  }

  std::vector<Entry> entries;
  entries.reserve(raw.size() - test.size());
  for (std::size_t idx = 0; idx < raw.size(); ++idx) {
    if (is_test[idx]) continue;
    const RawRating& r = raw[idx];
    Entry e;
    e.row = static_cast<std::uint32_t>(user_of[idx]);
    e.col = static_cast<std::uint32_t>(item_of[idx]);
    if (options.binarize) {
      e.value = 1.0;
    } else {
      if (r.rating == 0.0) {
        throw DataError("line " + std::to_string(r.line) +
                        ": zero rating is reserved for missing cells (use binarization)");
      }
      e.value = r.rating;
    }
    e.weight = r.weight.value_or(options.default_weight);
    entries.push_back(e);
  }
  return EvalSplit{SparseRatingMatrix(num_users, maps.items.size(), std::move(entries)),
                   std::move(test), std::move(maps)};
}

std::vector<std::size_t> rank_topn(const FactorModel& model, std::size_t u,
                                   const SparseRatingMatrix& train, std::size_t n) {
  if (n < 1) throw std::invalid_argument("rank_topn: n must be >= 1");
  if (u >= train.num_rows()) throw std::out_of_range("rank_topn: user out of range");

  std::vector<char> rated(train.num_cols(), 0);
  for (const Entry& e : train.row_entries(u)) rated[e.col] = 1;

  const auto p_u = model.p.row(u);
  std::vector<std::pair<double, std::size_t>> candidates;
  candidates.reserve(train.num_cols());
  for (std::size_t i = 0; i < train.num_cols(); ++i) {
    if (rated[i]) continue;
    candidates.emplace_back(dot(p_u, model.q.row(i)), i);
  }

  const std::size_t take = std::min(n, candidates.size());
  const auto by_score_then_id = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end(), by_score_then_id);

  std::vector<std::size_t> out(take);
  for (std::size_t j = 0; j < take; ++j) out[j] = candidates[j].second;
  return out;
}

int hr_at_n(std::span<const std::size_t> ranked, std::size_t test_item) {
  return std::find(ranked.begin(), ranked.end(), test_item) != ranked.end() ? 1 : 0;
}

double ndcg_at_n(std::span<const std::size_t> ranked, std::size_t test_item) {
  const auto it = std::find(ranked.begin(), ranked.end(), test_item);
  if (it == ranked.end()) return 0.0;
  const auto pos = static_cast<double>(it - ranked.begin()) + 1.0;
  return 1.0 / std::log2(pos + 1.0);
}

RankingReport evaluate_ranking(const FactorModel& model, const EvalSplit& split, std::size_t n,
                               unsigned threads) {
  if (model.num_rows() != split.train.num_rows() ||
      model.num_cols() != split.train.num_cols()) {
    throw std::invalid_argument("evaluate_ranking: model dimensions do not match split");
  }
  RankingReport report;
  report.users_evaluated = split.test.size();
  report.per_user_hr.resize(split.test.size());
  report.per_user_ndcg.resize(split.test.size());

  parallel_chunks(split.test.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const TestPair& pair = split.test[j];
      const auto ranked = rank_topn(model, pair.user, split.train, n);
      report.per_user_hr[j] = hr_at_n(ranked, pair.item);
      report.per_user_ndcg[j] = ndcg_at_n(ranked, pair.item);
    }
  });

  for (std::size_t j = 0; j < split.test.size(); ++j) {
    report.hr += report.per_user_hr[j];
    report.ndcg += report.per_user_ndcg[j];
  }
  if (!split.test.empty()) {
    report.hr /= static_cast<double>(split.test.size());
    report.ndcg /= static_cast<double>(split.test.size());
  }
  return report;
}

double mae_between(const FactorModel& a, const FactorModel& b, const SparseRatingMatrix& data) {
  if (a.num_rows() != b.num_rows() || a.num_cols() != b.num_cols()) {
    throw std::invalid_argument("mae_between: model dimensions differ");
  }
  if (a.num_rows() != data.num_rows() || a.num_cols() != data.num_cols()) {
    throw std::invalid_argument("mae_between: model dimensions do not match data");
  }
  if (data.num_observed() == 0) return 0.0;
  double acc = 0.0;
  for (const Entry& e : data.entries()) {
    acc += std::abs(dot(a.p.row(e.row), a.q.row(e.col)) - dot(b.p.row(e.row), b.q.row(e.col)));
  }
  return acc / static_cast<double>(data.num_observed());
}

}  // namespace eals
