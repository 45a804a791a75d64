#include "eals/objective.hpp"

#include <stdexcept>

namespace eals {

double objective_direct(const SparseRatingMatrix& data, const MissingWeightModel& weights,
                        const FactorModel& model, double lambda) {
  if (weights.num_rows() != data.num_rows() || weights.num_cols() != data.num_cols()) {
    throw std::invalid_argument("objective_direct: weight model dimensions do not match data");
  }
  if (model.num_rows() != data.num_rows() || model.num_cols() != data.num_cols()) {
    throw std::invalid_argument("objective_direct: factor dimensions do not match data");
  }

  double loss = 0.0;
  for (std::size_t u = 0; u < data.num_rows(); ++u) {
    const auto row = data.row_entries(u);
    std::size_t next = 0;  // row entries are in ascending column order
    for (std::size_t i = 0; i < data.num_cols(); ++i) {
      const double phat = dot(model.p.row(u), model.q.row(i));
      if (next < row.size() && row[next].col == i) {
        const double diff = row[next].value - phat;
        loss += row[next].weight * diff * diff;
        ++next;
      } else {
        loss += weights.weight(u, i) * phat * phat;
      }
    }
  }
  return loss + lambda * (squared_norm(model.p) + squared_norm(model.q));
}

}  // namespace eals
