#include "eals/weight_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "eals/errors.hpp"

namespace eals {

namespace {

constexpr std::size_t kCertificationScanLimit = 4'000'000;  // cells

constexpr double kSvdTolerance = 1e-12;   // relative change of sigma
constexpr std::size_t kSvdMaxIters = 10'000;

bool all_nonnegative(const Matrix& m) {
  for (double v : m.values()) {
    if (v < 0.0) return false;
  }
  return true;
}

double frobenius_norm(const Matrix& m) { return std::sqrt(squared_norm(m)); }

}  // namespace

MissingWeightModel::MissingWeightModel(Matrix row_factors, Matrix col_factors,
                                       bool certified_nonnegative)
    : row_factors_(std::move(row_factors)),
      col_factors_(std::move(col_factors)),
      certified_nonnegative_(certified_nonnegative) {
  if (row_factors_.cols() != col_factors_.cols()) {
    throw std::invalid_argument("weight model: row/column factor ranks differ");
  }
  if (row_factors_.cols() == 0) {
    throw std::invalid_argument("weight model: rank must be >= 1");
  }
  for (double v : row_factors_.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("weight model: non-finite row factor");
  }
  for (double v : col_factors_.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("weight model: non-finite column factor");
  }
}

MissingWeightModel make_weight_model(Matrix row_factors, Matrix col_factors) {
  bool certified = all_nonnegative(row_factors) && all_nonnegative(col_factors);
  if (!certified && row_factors.rows() * col_factors.rows() <= kCertificationScanLimit) {
    certified = true;
    for (std::size_t u = 0; u < row_factors.rows() && certified; ++u) {
      for (std::size_t i = 0; i < col_factors.rows(); ++i) {
        if (dot(row_factors.row(u), col_factors.row(i)) < 0.0) {
          certified = false;
          break;
        }
      }
    }
  }
  return MissingWeightModel(std::move(row_factors), std::move(col_factors), certified);
}

MissingWeightModel uniform_missing(std::size_t num_rows, std::size_t num_cols, double c0) {
  if (c0 < 0.0) throw std::domain_error("uniform_missing: c0 must be >= 0");
  Matrix a(num_rows, 1, c0);
  Matrix b(num_cols, 1, 1.0);
  return MissingWeightModel(std::move(a), std::move(b), true);
}

MissingWeightModel popularity_missing(const SparseRatingMatrix& data, double c0, double alpha) {
  if (c0 < 0.0) throw std::domain_error("popularity_missing: c0 must be >= 0");
  const std::size_t n = data.num_cols();
  const double total = static_cast<double>(data.num_observed());
  if (total == 0.0) {
    throw std::domain_error("popularity_missing: item frequencies need observed entries");
  }

  std::vector<double> powered(n, 0.0);
  double normalizer = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double freq = static_cast<double>(data.col_entry_ids(i).size()) / total;
    if (freq == 0.0) {
      if (alpha < 0.0) {
        throw std::domain_error("popularity_missing: alpha < 0 with an unseen item (0^negative)");
      }
      powered[i] = alpha == 0.0 ? 1.0 : 0.0;
    } else {
      powered[i] = std::pow(freq, alpha);
    }
    normalizer += powered[i];
  }

  Matrix a(data.num_rows(), 1, c0);
  Matrix b(n, 1);
  for (std::size_t i = 0; i < n; ++i) b(i, 0) = powered[i] / normalizer;
  return MissingWeightModel(std::move(a), std::move(b), true);
}

MissingWeightModel user_oriented_missing(const SparseRatingMatrix& data,
                                         std::span<const double> per_row_weight) {
  if (per_row_weight.size() != data.num_rows()) {
    throw std::invalid_argument("user_oriented_missing: weight vector length must equal row count");
  }
  Matrix a(data.num_rows(), 1);
  for (std::size_t u = 0; u < data.num_rows(); ++u) {
    if (!(per_row_weight[u] >= 0.0)) {
      throw std::domain_error("user_oriented_missing: weights must be >= 0");
    }
    a(u, 0) = per_row_weight[u];
  }
  Matrix b(data.num_cols(), 1, 1.0);
  return MissingWeightModel(std::move(a), std::move(b), true);
}

namespace {

// One deflation step of power iteration on `residual`, returning the top
// singular triplet (sigma, u, v). A zero residual yields sigma = 0. The
// singular value alone converges twice as fast as the vectors, so both the
// sigma change and the iterate change must fall below tolerance before we
// accept a triplet; deflating with unconverged vectors would poison every
// later triplet.
struct SingularTriplet {
  double sigma = 0.0;
  std::vector<double> u, v;
};

SingularTriplet top_triplet(const Matrix& residual) {
  const std::size_t m = residual.rows();
  const std::size_t n = residual.cols();
  SingularTriplet out;
  out.u.assign(m, 0.0);
  out.v.assign(n, 0.0);

  // Start from the unit vector of the heaviest column.
  std::size_t pivot = 0;
  double pivot_norm = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double nrm = 0.0;
    for (std::size_t i = 0; i < m; ++i) nrm += residual(i, j) * residual(i, j);
    if (nrm > pivot_norm) {
      pivot_norm = nrm;
      pivot = j;
    }
  }
  if (pivot_norm == 0.0) return out;  // rank exhausted

  std::vector<double> v(n, 0.0);
  v[pivot] = 1.0;
  std::vector<double> u(m, 0.0);
  std::vector<double> v_next(n, 0.0);
  double sigma = 0.0;

  for (std::size_t iter = 0; iter < kSvdMaxIters; ++iter) {
    // u <- W v, normalized
    double unorm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += residual(i, j) * v[j];
      u[i] = acc;
      unorm += acc * acc;
    }
    unorm = std::sqrt(unorm);
    if (unorm == 0.0) return out;
    for (double& x : u) x /= unorm;

    // v <- W^T u; its norm is the sigma estimate
    double vnorm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += residual(i, j) * u[i];
      v_next[j] = acc;
      vnorm += acc * acc;
    }
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) return out;
    for (double& x : v_next) x /= vnorm;

    double drift = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double diff = v_next[j] - v[j];
      drift += diff * diff;
    }
    v.swap(v_next);
    const bool sigma_stable =
        iter > 0 && std::abs(vnorm - sigma) <= kSvdTolerance * vnorm;
    sigma = vnorm;
    if (sigma_stable && std::sqrt(drift) <= kSvdTolerance) {
      out.sigma = sigma;
      out.u = u;
      out.v = v;
      return out;
    }
  }
  throw ConvergenceError("truncated_svd: power iteration exceeded " +
                             std::to_string(kSvdMaxIters) + " iterations",
                         frobenius_norm(residual));
}

}  // namespace

TruncatedSvdResult truncated_svd(const Matrix& w, std::size_t rank) {
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  if (rank < 1 || rank > std::min(m, n)) {
    throw std::invalid_argument("truncated_svd: rank must be in [1, min(rows, cols)]");
  }

  Matrix residual = w;
  Matrix a(m, rank);
  Matrix b(n, rank);
  std::size_t nonzero_triplets = 0;
  double sigma_max = 0.0;

  for (std::size_t z = 0; z < rank; ++z) {
    const SingularTriplet triplet = top_triplet(residual);
    // Stop once the residual spectrum is deflation noise; the remaining
    // factor columns stay zero.
    if (triplet.sigma <= 1e-11 * sigma_max) break;
    sigma_max = std::max(sigma_max, triplet.sigma);
    ++nonzero_triplets;
    const double scale = std::sqrt(triplet.sigma);
    for (std::size_t i = 0; i < m; ++i) a(i, z) = triplet.u[i] * scale;
    for (std::size_t j = 0; j < n; ++j) b(j, z) = triplet.v[j] * scale;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        residual(i, j) -= triplet.sigma * triplet.u[i] * triplet.v[j];
      }
    }
  }

  TruncatedSvdResult out{make_weight_model(std::move(a), std::move(b)),
                         frobenius_norm(residual), std::nullopt};
  if (out.residual <= 1e-10 * frobenius_norm(w)) out.exact_rank = nonzero_triplets;
  return out;
}

}  // namespace eals
