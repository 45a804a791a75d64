#include "eals/solver_fast.hpp"

#include <chrono>
#include <stdexcept>
#include <string>

#include "eals/errors.hpp"
#include "eals/parallel.hpp"

namespace eals {

namespace {

void check_dimensions(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                      const FactorModel& model) {
  if (weights.num_rows() != data.num_rows() || weights.num_cols() != data.num_cols()) {
    throw std::invalid_argument("solver: weight model dimensions do not match data");
  }
  if (model.num_rows() != data.num_rows() || model.num_cols() != data.num_cols()) {
    throw std::invalid_argument("solver: factor dimensions do not match data");
  }
}

// Shared body of the P-row and Q-column updates. `own` is the latent vector
// being updated, `other` the fixed factor matrix, `own_weight_factor` the
// weight factor vector on the updated side, `cross_index(j)` the fixed-side
// index of the j-th observed entry, and `cache_id(j)` the prediction-cache
// slot of that entry.
template <typename CrossIndex, typename CacheId, typename EntryAt>
void update_latent_vector(std::span<double> own, const Matrix& other,
                          std::span<const double> own_weight_factor,
                          const Matrix& other_weight_factors, const CacheTensor& cache,
                          std::size_t n_entries, CrossIndex cross_index, CacheId cache_id,
                          EntryAt entry_at, std::vector<double>& rhat, double lambda,
                          RowScratch& scratch, const char* what, std::size_t index) {
  const std::size_t k_rank = own.size();
  const std::size_t z = cache.weight_rank();

  // a_u . b_i once per entry; this keeps the update within O(|R_u| K Z).
  scratch.weight_dots.resize(n_entries);
  scratch.factor_column.resize(n_entries);
  for (std::size_t j = 0; j < n_entries; ++j) {
    scratch.weight_dots[j] = dot(own_weight_factor, other_weight_factors.row(cross_index(j)));
  }

  for (std::size_t f = 0; f < k_rank; ++f) {
    const double old_value = own[f];

    double numerator = 0.0;
    double denominator = 0.0;
    for (std::size_t j = 0; j < n_entries; ++j) {
      const double x = other(cross_index(j), f);
      scratch.factor_column[j] = x;
      const Entry& e = entry_at(j);
      const double partial = rhat[cache_id(j)] - old_value * x;
      // Observed data term, plus the correction that removes this entry from
      // the all-columns cache sums below.
      numerator += (e.value - partial) * e.weight * x + scratch.weight_dots[j] * partial * x;
      denominator += (e.weight - scratch.weight_dots[j]) * x * x;
    }

    double cache_numerator = 0.0;
    double cache_denominator = 0.0;
    for (std::size_t t = 0; t < z; ++t) {
      const auto s_tf = cache.slice(t, f);
      const double full = dot(own, s_tf);  // sum_k own_k S_tfk, including k = f
      cache_numerator += own_weight_factor[t] * (full - old_value * s_tf[f]);
      cache_denominator += own_weight_factor[t] * s_tf[f];
    }

    denominator += cache_denominator + lambda;
    if (denominator < kDenominatorEpsilon) {
      throw SingularUpdateError(std::string(what) + ": singular denominator at index " +
                                    std::to_string(index) + ", factor " + std::to_string(f),
                                denominator);
    }
    const double new_value = (numerator - cache_numerator) / denominator;
    own[f] = new_value;
    const double delta = new_value - old_value;
    for (std::size_t j = 0; j < n_entries; ++j) {
      rhat[cache_id(j)] += delta * scratch.factor_column[j];
    }
  }
}

}  // namespace

void update_p_row(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                  FactorModel& model, const CacheTensor& sq, std::size_t u, double lambda,
                  RowScratch& scratch) {
  const auto row = data.row_entries(u);
  const std::size_t base = data.row_entry_begin(u);
  update_latent_vector(
      model.p.row(u), model.q, weights.row_factor(u), weights.col_factors(), sq, row.size(),
      [&](std::size_t j) { return row[j].col; }, [&](std::size_t j) { return base + j; },
      [&](std::size_t j) -> const Entry& { return row[j]; }, model.rhat, lambda, scratch,
      "update_p_row", u);
}

void update_p_row(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                  FactorModel& model, const CacheTensor& sq, std::size_t u, double lambda) {
  RowScratch scratch;
  update_p_row(data, weights, model, sq, u, lambda, scratch);
}

void update_q_col(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                  FactorModel& model, const CacheTensor& sp, std::size_t i, double lambda,
                  RowScratch& scratch) {
  const auto ids = data.col_entry_ids(i);
  update_latent_vector(
      model.q.row(i), model.p, weights.col_factor(i), weights.row_factors(), sp, ids.size(),
      [&](std::size_t j) { return data.entry(ids[j]).row; },
      [&](std::size_t j) { return ids[j]; },
      [&](std::size_t j) -> const Entry& { return data.entry(ids[j]); }, model.rhat, lambda,
      scratch, "update_q_col", i);
}

void update_q_col(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                  FactorModel& model, const CacheTensor& sp, std::size_t i, double lambda) {
  RowScratch scratch;
  update_q_col(data, weights, model, sp, i, lambda, scratch);
}

double objective_fast(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                      const FactorModel& model, const CacheTensor& sq, double lambda,
                      unsigned threads) {
  check_dimensions(data, weights, model);

  struct Terms {
    double observed = 0.0;
    double correction = 0.0;  // sum over observed cells of (a_u . b_i) rhat^2
  };
  const Terms entry_terms = parallel_reduce(
      data.num_observed(), threads, Terms{},
      [&](Terms& acc, std::size_t begin, std::size_t end) {
        for (std::size_t id = begin; id < end; ++id) {
          const Entry& e = data.entry(id);
          const double diff = e.value - model.rhat[id];
          acc.observed += e.weight * diff * diff;
          acc.correction += weights.weight(e.row, e.col) * model.rhat[id] * model.rhat[id];
        }
      },
      [](Terms& acc, const Terms& part) {
        acc.observed += part.observed;
        acc.correction += part.correction;
      });

  // Missing-data loss over all cells: sum_u sum_t a_ut (p_u^T S^q_t p_u).
  const double all_cells = parallel_reduce(
      data.num_rows(), threads, 0.0,
      [&](double& acc, std::size_t begin, std::size_t end) {
        for (std::size_t u = begin; u < end; ++u) {
          const auto p_u = model.p.row(u);
          const auto a_u = weights.row_factor(u);
          for (std::size_t t = 0; t < sq.weight_rank(); ++t) {
            if (a_u[t] == 0.0) continue;
            double quadratic = 0.0;
            for (std::size_t f = 0; f < sq.factor_rank(); ++f) {
              quadratic += p_u[f] * dot(p_u, sq.slice(t, f));
            }
            acc += a_u[t] * quadratic;
          }
        }
      },
      [](double& acc, double part) { acc += part; });

  return entry_terms.observed + (all_cells - entry_terms.correction) +
         lambda * (squared_norm(model.p) + squared_norm(model.q));
}

TrainResult train_fast(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                       const Hyperparams& hp, const TrainOptions& options, unsigned threads) {
  hp.validate();
  check_weight_certification(weights, hp, options);

  TrainResult out;
  out.model = options.init.has_value()
                  ? init_factor_model(data, options.init->first, options.init->second)
                  : init_factor_model(data, hp);
  check_dimensions(data, weights, out.model);
  if (hp.max_iters == 0) return out;

  CacheTensor sq = build_sq(weights, out.model, threads);
  double previous = 0.0;
  for (std::size_t iter = 0; iter < hp.max_iters; ++iter) {
    const auto start = std::chrono::steady_clock::now();

    parallel_chunks(data.num_rows(), threads, [&](std::size_t begin, std::size_t end) {
      RowScratch scratch;
      for (std::size_t u = begin; u < end; ++u) {
        update_p_row(data, weights, out.model, sq, u, hp.lambda, scratch);
      }
    });

    const CacheTensor sp = build_sp(weights, out.model, threads);
    parallel_chunks(data.num_cols(), threads, [&](std::size_t begin, std::size_t end) {
      RowScratch scratch;
      for (std::size_t i = begin; i < end; ++i) {
        update_q_col(data, weights, out.model, sp, i, hp.lambda, scratch);
      }
    });

    // Fresh S^q serves the objective now and the P phase next iteration.
    sq = build_sq(weights, out.model, threads);
    const double objective = objective_fast(data, weights, out.model, sq, hp.lambda, threads);
    const auto stop = std::chrono::steady_clock::now();
    out.objective_trace.push_back(objective);
    out.iter_seconds.push_back(std::chrono::duration<double>(stop - start).count());
    if (iter > 0 && converged(previous, objective, hp.rel_tol)) break;
    previous = objective;
  }
  return out;
}

}  // namespace eals
