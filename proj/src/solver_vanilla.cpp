#include "eals/solver_vanilla.hpp"

#include <chrono>
#include <stdexcept>
#include <string>

#include "eals/errors.hpp"
#include "eals/objective.hpp"

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

}  // namespace

void check_weight_certification(const MissingWeightModel& weights, const Hyperparams& hp,
                                const TrainOptions& options) {
  if (weights.certified_nonnegative()) return;
  if (options.uncertified_lambda_guard.has_value() &&
      hp.lambda >= *options.uncertified_lambda_guard) {
    return;
  }
  throw std::invalid_argument(
      "solver: weight model is not certified nonnegative; pass an uncertified_lambda_guard "
      "<= lambda to accept it");
}

double update_p_element_direct(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                               FactorModel& model, std::size_t u, std::size_t f, double lambda) {
  check_dimensions(data, weights, model);
  const auto row = data.row_entries(u);
  const std::size_t base = data.row_entry_begin(u);
  const auto p_u = model.p.row(u);
  const double p_old = p_u[f];

  double numerator = 0.0;
  double denominator = 0.0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < data.num_cols(); ++i) {
    const double q_if = model.q(i, f);
    if (next < row.size() && row[next].col == i) {
      const double partial = model.rhat[base + next] - p_old * q_if;
      numerator += (row[next].value - partial) * row[next].weight * q_if;
      denominator += row[next].weight * q_if * q_if;
      ++next;
    } else {
      // Missing cell: target 0, prediction recomputed on the fly.
      const double partial = dot(p_u, model.q.row(i)) - p_old * q_if;
      const double w = weights.weight(u, i);
      numerator -= partial * w * q_if;
      denominator += w * q_if * q_if;
    }
  }

  denominator += lambda;
  if (denominator < kDenominatorEpsilon) {
    throw SingularUpdateError("update_p_element_direct: singular denominator at row " +
                                  std::to_string(u) + ", factor " + std::to_string(f),
                              denominator);
  }
  const double p_new = numerator / denominator;
  p_u[f] = p_new;
  for (std::size_t j = 0; j < row.size(); ++j) {
    model.rhat[base + j] += (p_new - p_old) * model.q(row[j].col, f);
  }
  return p_new;
}

double update_q_element_direct(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                               FactorModel& model, std::size_t i, std::size_t f, double lambda) {
  check_dimensions(data, weights, model);
  const auto ids = data.col_entry_ids(i);
  const auto q_i = model.q.row(i);
  const double q_old = q_i[f];

  double numerator = 0.0;
  double denominator = 0.0;
  std::size_t next = 0;
  for (std::size_t u = 0; u < data.num_rows(); ++u) {
    const double p_uf = model.p(u, f);
    if (next < ids.size() && data.entry(ids[next]).row == u) {
      const Entry& e = data.entry(ids[next]);
      const double partial = model.rhat[ids[next]] - q_old * p_uf;
      numerator += (e.value - partial) * e.weight * p_uf;
      denominator += e.weight * p_uf * p_uf;
      ++next;
    } else {
      const double partial = dot(model.p.row(u), q_i) - q_old * p_uf;
      const double w = weights.weight(u, i);
      numerator -= partial * w * p_uf;
      denominator += w * p_uf * p_uf;
    }
  }

  denominator += lambda;
  if (denominator < kDenominatorEpsilon) {
    throw SingularUpdateError("update_q_element_direct: singular denominator at column " +
                                  std::to_string(i) + ", factor " + std::to_string(f),
                              denominator);
  }
  const double q_new = numerator / denominator;
  q_i[f] = q_new;
  for (const std::uint32_t id : ids) {
    model.rhat[id] += (q_new - q_old) * model.p(data.entry(id).row, f);
  }
  return q_new;
}

namespace {

// One row's f-sweep with a running prediction buffer over all columns. The
// buffer costs O(N K) to fill once per row and O(N) per factor afterwards,
// which keeps the whole sweep at the O(M N K) the algorithm is annotated
// with; recomputing missing-cell predictions per element would square the K
// term.
void sweep_p_row_direct(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                        FactorModel& model, std::size_t u, std::size_t k_rank, double lambda,
                        std::vector<double>& pred) {
  const auto row = data.row_entries(u);
  const std::size_t base = data.row_entry_begin(u);
  const auto p_u = model.p.row(u);

  pred.resize(data.num_cols());
  for (std::size_t i = 0; i < data.num_cols(); ++i) pred[i] = dot(p_u, model.q.row(i));
  for (std::size_t j = 0; j < row.size(); ++j) pred[row[j].col] = model.rhat[base + j];

  for (std::size_t f = 0; f < k_rank; ++f) {
    const double p_old = p_u[f];
    double numerator = 0.0;
    double denominator = 0.0;
    std::size_t next = 0;
    for (std::size_t i = 0; i < data.num_cols(); ++i) {
      const double q_if = model.q(i, f);
      const double partial = pred[i] - p_old * q_if;
      if (next < row.size() && row[next].col == i) {
        numerator += (row[next].value - partial) * row[next].weight * q_if;
        denominator += row[next].weight * q_if * q_if;
        ++next;
      } else {
        const double w = weights.weight(u, i);
        numerator -= partial * w * q_if;
        denominator += w * q_if * q_if;
      }
    }
    denominator += lambda;
    if (denominator < kDenominatorEpsilon) {
      throw SingularUpdateError("train_vanilla: singular denominator at row " +
                                    std::to_string(u) + ", factor " + std::to_string(f),
                                denominator);
    }
    const double p_new = numerator / denominator;
    p_u[f] = p_new;
    const double delta = p_new - p_old;
    for (std::size_t i = 0; i < data.num_cols(); ++i) pred[i] += delta * model.q(i, f);
  }
  for (std::size_t j = 0; j < row.size(); ++j) model.rhat[base + j] = pred[row[j].col];
}

void sweep_q_col_direct(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                        FactorModel& model, std::size_t i, std::size_t k_rank, double lambda,
                        std::vector<double>& pred) {
  const auto ids = data.col_entry_ids(i);
  const auto q_i = model.q.row(i);

  pred.resize(data.num_rows());
  for (std::size_t u = 0; u < data.num_rows(); ++u) pred[u] = dot(model.p.row(u), q_i);
  for (const std::uint32_t id : ids) pred[data.entry(id).row] = model.rhat[id];

  for (std::size_t f = 0; f < k_rank; ++f) {
    const double q_old = q_i[f];
    double numerator = 0.0;
    double denominator = 0.0;
    std::size_t next = 0;
    for (std::size_t u = 0; u < data.num_rows(); ++u) {
      const double p_uf = model.p(u, f);
      const double partial = pred[u] - q_old * p_uf;
      if (next < ids.size() && data.entry(ids[next]).row == u) {
        const Entry& e = data.entry(ids[next]);
        numerator += (e.value - partial) * e.weight * p_uf;
        denominator += e.weight * p_uf * p_uf;
        ++next;
      } else {
        const double w = weights.weight(u, i);
        numerator -= partial * w * p_uf;
        denominator += w * p_uf * p_uf;
      }
    }
    denominator += lambda;
    if (denominator < kDenominatorEpsilon) {
      throw SingularUpdateError("train_vanilla: singular denominator at column " +
                                    std::to_string(i) + ", factor " + std::to_string(f),
                                denominator);
    }
    const double q_new = numerator / denominator;
    q_i[f] = q_new;
    const double delta = q_new - q_old;
    for (std::size_t u = 0; u < data.num_rows(); ++u) pred[u] += delta * model.p(u, f);
  }
  for (const std::uint32_t id : ids) model.rhat[id] = pred[data.entry(id).row];
}

}  // namespace

TrainResult train_vanilla(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                          const Hyperparams& hp, const TrainOptions& options) {
  hp.validate();
  check_weight_certification(weights, hp, options);

  TrainResult out;
  out.model = options.init.has_value()
                  ? init_factor_model(data, options.init->first, options.init->second)
                  : init_factor_model(data, hp);
  check_dimensions(data, weights, out.model);

  std::vector<double> pred;
  double previous = 0.0;
  for (std::size_t iter = 0; iter < hp.max_iters; ++iter) {
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t u = 0; u < data.num_rows(); ++u) {
      sweep_p_row_direct(data, weights, out.model, u, hp.k, hp.lambda, pred);
    }
    for (std::size_t i = 0; i < data.num_cols(); ++i) {
      sweep_q_col_direct(data, weights, out.model, i, hp.k, hp.lambda, pred);
    }
    const double objective = objective_direct(data, weights, out.model, hp.lambda);
    const auto stop = std::chrono::steady_clock::now();
    out.objective_trace.push_back(objective);
    out.iter_seconds.push_back(std::chrono::duration<double>(stop - start).count());
    if (iter > 0 && converged(previous, objective, hp.rel_tol)) break;
    previous = objective;
  }
  return out;
}

}  // namespace eals
