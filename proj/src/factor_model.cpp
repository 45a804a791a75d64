#include "eals/factor_model.hpp"

#include <cmath>
#include <stdexcept>

#include "eals/rng.hpp"

namespace eals {

double predict(const FactorModel& model, std::size_t u, std::size_t i) {
  if (u >= model.p.rows()) throw std::out_of_range("predict: row index out of range");
  if (i >= model.q.rows()) throw std::out_of_range("predict: column index out of range");
  return dot(model.p.row(u), model.q.row(i));
}

FactorModel init_factor_model(const SparseRatingMatrix& data, const Hyperparams& hp) {
  hp.validate();
  FactorModel model;
  model.p = Matrix(data.num_rows(), hp.k);
  model.q = Matrix(data.num_cols(), hp.k);
  GaussianSampler gauss(hp.seed, hp.init_stddev);
  for (double& v : model.p.values()) v = gauss();
  for (double& v : model.q.values()) v = gauss();
  rhat_rebuild(data, model);
  return model;
}

FactorModel init_factor_model(const SparseRatingMatrix& data, Matrix p, Matrix q) {
  if (p.rows() != data.num_rows() || q.rows() != data.num_cols() || p.cols() != q.cols()) {
    throw std::invalid_argument("init_factor_model: factor dimensions do not match data");
  }
  FactorModel model{std::move(p), std::move(q), {}};
  rhat_rebuild(data, model);
  return model;
}

void rhat_rebuild(const SparseRatingMatrix& data, FactorModel& model) {
  model.rhat.resize(data.num_observed());
  for (std::size_t id = 0; id < data.num_observed(); ++id) {
    const Entry& e = data.entry(id);
    model.rhat[id] = dot(model.p.row(e.row), model.q.row(e.col));
  }
}

double max_rhat_drift(const SparseRatingMatrix& data, const FactorModel& model) {
  double worst = 0.0;
  for (std::size_t id = 0; id < data.num_observed(); ++id) {
    const Entry& e = data.entry(id);
    const double fresh = dot(model.p.row(e.row), model.q.row(e.col));
    const double drift = std::abs(model.rhat[id] - fresh) / (1.0 + std::abs(model.rhat[id]));
    worst = std::max(worst, drift);
  }
  return worst;
}

}  // namespace eals
