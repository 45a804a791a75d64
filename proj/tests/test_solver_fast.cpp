#include <cmath>

#include "doctest.h"
#include "eals/errors.hpp"
#include "eals/objective.hpp"
#include "eals/solver_fast.hpp"
#include "eals/solver_vanilla.hpp"
#include "oracles.hpp"

using eals::Entry;
using eals::FactorModel;
using eals::Hyperparams;
using eals::Matrix;
using eals::SparseRatingMatrix;

TEST_CASE("row update on the hand instance matches the direct solver") {
  // 1x2, observed (0,0): r=1, c=1; missing weight 0.5 via a=(1), b=(0.5, 0.5).
  SparseRatingMatrix data(1, 2, {Entry{0, 0, 1.0, 1.0}});
  Matrix a(1, 1, 1.0);
  Matrix b(2, 1, 0.5);
  const eals::MissingWeightModel weights(std::move(a), std::move(b), true);

  FactorModel model = eals::init_factor_model(data, Matrix(1, 1), Matrix(2, 1, 1.0));
  const auto sq = eals::build_sq(weights, model);
  CHECK(sq.at(0, 0, 0) == doctest::Approx(1.0));  // 0.5*1*1 + 0.5*1*1

  eals::update_p_row(data, weights, model, sq, 0, 0.0);
  CHECK(model.p(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("empty row with positive lambda stays at zero") {
  SparseRatingMatrix data(2, 2, {Entry{1, 0, 2.0, 1.0}});  // row 0 has no entries
  const auto weights = eals::uniform_missing(2, 2, 0.4);
  FactorModel model = eals::init_factor_model(data, Matrix(2, 3), Matrix(2, 3));
  const auto sq = eals::build_sq(weights, model);
  eals::update_p_row(data, weights, model, sq, 0, 0.1);
  for (std::size_t f = 0; f < 3; ++f) CHECK(model.p(0, f) == 0.0);
}

TEST_CASE("empty column with positive lambda stays at zero") {
  SparseRatingMatrix data(2, 2, {Entry{0, 0, 2.0, 1.0}});  // column 1 empty
  const auto weights = eals::uniform_missing(2, 2, 0.4);
  FactorModel model = eals::init_factor_model(data, Matrix(2, 2), Matrix(2, 2));
  const auto sp = eals::build_sp(weights, model);
  eals::update_q_col(data, weights, model, sp, 1, 0.1);
  for (std::size_t f = 0; f < 2; ++f) CHECK(model.q(1, f) == 0.0);
}

TEST_CASE("row and column updates match the direct element sweep") {
  const auto inst = oracles::random_instance(12, 10, 3, 0.3, 400);
  const FactorModel start = oracles::random_model(inst.data, 4, 401);
  const double lambda = 0.03;

  FactorModel fast = start;
  FactorModel direct = start;

  const auto sq = eals::build_sq(inst.weights, fast);
  for (std::size_t u = 0; u < 12; ++u) {
    eals::update_p_row(inst.data, inst.weights, fast, sq, u, lambda);
    for (std::size_t f = 0; f < 4; ++f) {
      eals::update_p_element_direct(inst.data, inst.weights, direct, u, f, lambda);
    }
  }
  for (std::size_t u = 0; u < 12; ++u) {
    for (std::size_t f = 0; f < 4; ++f) {
      CHECK(oracles::approx_rel(fast.p(u, f), direct.p(u, f), 1e-9));
    }
  }

  const auto sp = eals::build_sp(inst.weights, fast);
  for (std::size_t i = 0; i < 10; ++i) {
    eals::update_q_col(inst.data, inst.weights, fast, sp, i, lambda);
    for (std::size_t f = 0; f < 4; ++f) {
      eals::update_q_element_direct(inst.data, inst.weights, direct, i, f, lambda);
    }
  }
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t f = 0; f < 4; ++f) {
      CHECK(oracles::approx_rel(fast.q(i, f), direct.q(i, f), 1e-9));
    }
  }
  CHECK(eals::max_rhat_drift(inst.data, fast) <= 1e-12);
}

TEST_CASE("fast objective on hand and random instances") {
  SUBCASE("zero factors leave the observed term only") {
    const auto inst = oracles::random_instance(5, 6, 2, 0.4, 410);
    const FactorModel model = eals::init_factor_model(inst.data, Matrix(5, 2), Matrix(6, 2));
    const auto sq = eals::build_sq(inst.weights, model);
    double expected = 0.0;
    for (const Entry& e : inst.data.entries()) expected += e.weight * e.value * e.value;
    CHECK(eals::objective_fast(inst.data, inst.weights, model, sq, 0.0) ==
          doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("matches the direct objective") {
    const auto inst = oracles::random_instance(8, 7, 2, 0.35, 411);
    const FactorModel model = oracles::random_model(inst.data, 3, 412);
    const auto sq = eals::build_sq(inst.weights, model);
    const double fast = eals::objective_fast(inst.data, inst.weights, model, sq, 0.05);
    const double direct = eals::objective_direct(inst.data, inst.weights, model, 0.05);
    CHECK(oracles::approx_rel(fast, direct, 1e-9));
  }

  SUBCASE("uniform unit weights at lambda 0 equal the dense Frobenius residual") {
    const auto inst = oracles::random_instance(6, 5, 1, 0.4, 413);
    std::vector<Entry> unit_entries(inst.data.entries().begin(), inst.data.entries().end());
    for (Entry& e : unit_entries) e.weight = 1.0;
    const SparseRatingMatrix data(6, 5, std::move(unit_entries));
    const auto ones = eals::uniform_missing(6, 5, 1.0);
    const FactorModel model = oracles::random_model(data, 2, 414);
    const auto sq = eals::build_sq(ones, model);

    double dense = 0.0;
    const auto mirror = oracles::densify(data, ones);
    for (std::size_t u = 0; u < 6; ++u) {
      for (std::size_t i = 0; i < 5; ++i) {
        const double diff = mirror.value[u][i] - eals::predict(model, u, i);
        dense += diff * diff;
      }
    }
    CHECK(oracles::approx_rel(eals::objective_fast(data, ones, model, sq, 0.0), dense, 1e-9));
  }
}

TEST_CASE("fast and vanilla solvers agree iterate for iterate") {
  const auto inst = oracles::random_instance(16, 12, 2, 0.25, 420);
  Hyperparams hp;
  hp.k = 3;
  hp.lambda = 0.02;
  hp.max_iters = 1;
  hp.rel_tol = 1e-15;

  const FactorModel start = oracles::random_model(inst.data, 3, 421);
  Matrix vp = start.p, vq = start.q;
  Matrix fp = start.p, fq = start.q;

  for (int iter = 0; iter < 8; ++iter) {
    eals::TrainOptions vanilla_options;
    vanilla_options.init = {vp, vq};
    const auto vanilla = eals::train_vanilla(inst.data, inst.weights, hp, vanilla_options);
    eals::TrainOptions fast_options;
    fast_options.init = {fp, fq};
    const auto fast = eals::train_fast(inst.data, inst.weights, hp, fast_options);

    REQUIRE(vanilla.objective_trace.size() == 1);
    REQUIRE(fast.objective_trace.size() == 1);
    CHECK(oracles::approx_rel(fast.objective_trace[0], vanilla.objective_trace[0], 1e-8));
    for (std::size_t idx = 0; idx < vp.values().size(); ++idx) {
      CHECK(oracles::approx_rel(fast.model.p.values()[idx], vanilla.model.p.values()[idx],
                                1e-8, 1e-10));
    }
    for (std::size_t idx = 0; idx < vq.values().size(); ++idx) {
      CHECK(oracles::approx_rel(fast.model.q.values()[idx], vanilla.model.q.values()[idx],
                                1e-8, 1e-10));
    }
    vp = vanilla.model.p;
    vq = vanilla.model.q;
    fp = fast.model.p;
    fq = fast.model.q;
  }
}

TEST_CASE("thread count does not change the result beyond reduction order") {
  const auto inst = oracles::random_instance(30, 24, 2, 0.2, 430);
  Hyperparams hp;
  hp.k = 4;
  hp.lambda = 0.05;
  hp.max_iters = 12;
  hp.rel_tol = 1e-15;
  hp.seed = 431;
  const auto serial = eals::train_fast(inst.data, inst.weights, hp, {}, 1);
  const auto threaded = eals::train_fast(inst.data, inst.weights, hp, {}, 8);
  REQUIRE(serial.objective_trace.size() == threaded.objective_trace.size());
  CHECK(oracles::approx_rel(threaded.objective_trace.back(), serial.objective_trace.back(),
                            1e-8));
}

TEST_CASE("max_iters = 0 returns the initialization unchanged") {
  const auto inst = oracles::random_instance(6, 5, 1, 0.4, 440);
  Hyperparams hp;
  hp.k = 2;
  hp.max_iters = 0;
  hp.seed = 441;
  const auto result = eals::train_fast(inst.data, inst.weights, hp);
  const FactorModel fresh = eals::init_factor_model(inst.data, hp);
  CHECK(result.objective_trace.empty());
  CHECK(result.model.p == fresh.p);
  CHECK(result.model.q == fresh.q);
}

TEST_CASE("monotone objective and bounded cache drift across training") {
  const auto inst = oracles::random_instance(25, 20, 3, 0.2, 450);
  Hyperparams hp;
  hp.k = 5;
  hp.lambda = 0.02;
  hp.max_iters = 20;
  hp.rel_tol = 1e-15;
  hp.seed = 451;
  const auto result = eals::train_fast(inst.data, inst.weights, hp);
  for (std::size_t t = 1; t < result.objective_trace.size(); ++t) {
    CHECK(result.objective_trace[t] <= result.objective_trace[t - 1] * (1.0 + 1e-10));
  }
  CHECK(eals::max_rhat_drift(inst.data, result.model) <= 1e-9);
}

TEST_CASE("a zero second weight component reproduces the rank-1 trace") {
  const auto inst = oracles::random_instance(14, 11, 1, 0.3, 460);

  // widen to rank 2 with an all-zero second row component
  Matrix a2(14, 2);
  Matrix b2(11, 2);
  for (std::size_t u = 0; u < 14; ++u) a2(u, 0) = inst.weights.row_factor(u)[0];
  for (std::size_t i = 0; i < 11; ++i) {
    b2(i, 0) = inst.weights.col_factor(i)[0];
    b2(i, 1) = 0.25;  // irrelevant: paired row component is zero
  }
  const eals::MissingWeightModel wide(std::move(a2), std::move(b2), true);

  Hyperparams hp;
  hp.k = 3;
  hp.lambda = 0.01;
  hp.max_iters = 10;
  hp.rel_tol = 1e-15;
  hp.seed = 461;
  const auto narrow_run = eals::train_fast(inst.data, inst.weights, hp);
  const auto wide_run = eals::train_fast(inst.data, wide, hp);
  REQUIRE(narrow_run.objective_trace.size() == wide_run.objective_trace.size());
  for (std::size_t t = 0; t < narrow_run.objective_trace.size(); ++t) {
    CHECK(oracles::approx_rel(wide_run.objective_trace[t], narrow_run.objective_trace[t],
                              1e-10));
  }
}

TEST_CASE("caches stay fresh across composed phases") {
  const auto inst = oracles::random_instance(10, 9, 2, 0.3, 470);
  FactorModel model = oracles::random_model(inst.data, 3, 471);
  const double lambda = 0.02;

  const auto sq = eals::build_sq(inst.weights, model);
  for (std::size_t u = 0; u < 10; ++u) {
    eals::update_p_row(inst.data, inst.weights, model, sq, u, lambda);
  }
  // After the P phase, a fresh S^p must match what the Q phase uses.
  const auto sp_used = eals::build_sp(inst.weights, model);
  const auto sp_rebuilt = eals::build_sp(inst.weights, model);
  for (std::size_t idx = 0; idx < sp_used.values().size(); ++idx) {
    CHECK(sp_used.values()[idx] == sp_rebuilt.values()[idx]);
  }
  for (std::size_t i = 0; i < 9; ++i) {
    eals::update_q_col(inst.data, inst.weights, model, sp_used, i, lambda);
  }
  CHECK(eals::max_rhat_drift(inst.data, model) <= 1e-10);
}

TEST_CASE("zero weights with zero lambda are a singular update") {
  SparseRatingMatrix data(2, 2, {Entry{0, 0, 1.0, 0.0}});
  const auto weights = eals::uniform_missing(2, 2, 0.0);
  FactorModel model = oracles::random_model(data, 2, 480);
  const auto sq = eals::build_sq(weights, model);
  CHECK_THROWS_AS(eals::update_p_row(data, weights, model, sq, 0, 0.0),
                  eals::SingularUpdateError);
}

TEST_CASE("hyperparameter validation rejects degenerate settings") {
  const auto inst = oracles::random_instance(4, 4, 1, 0.5, 490);
  Hyperparams hp;
  hp.k = 0;
  CHECK_THROWS_AS(eals::train_fast(inst.data, inst.weights, hp), std::invalid_argument);
  hp.k = 2;
  hp.rel_tol = 0.0;
  CHECK_THROWS_AS(eals::train_fast(inst.data, inst.weights, hp), std::invalid_argument);
  hp.rel_tol = 1e-6;
  hp.lambda = -0.1;
  CHECK_THROWS_AS(eals::train_fast(inst.data, inst.weights, hp), std::invalid_argument);
  hp.lambda = 0.01;
  hp.init_stddev = 0.0;
  CHECK_THROWS_AS(eals::train_fast(inst.data, inst.weights, hp), std::invalid_argument);
}

TEST_CASE("uncertified weights require the lambda guard") {
  SparseRatingMatrix data(2, 2, {Entry{0, 0, 1.0, 1.0}});
  Matrix a(2, 1);
  a(0, 0) = 1.0;
  a(1, 0) = -1.0;
  Matrix b(2, 1, 1.0);
  const auto weights = eals::make_weight_model(std::move(a), std::move(b));
  Hyperparams hp;
  hp.k = 1;
  hp.lambda = 1.0;
  hp.max_iters = 1;
  CHECK_THROWS_AS(eals::train_fast(data, weights, hp), std::invalid_argument);
  eals::TrainOptions options;
  options.uncertified_lambda_guard = 2.0;  // lambda below the guard: still refused
  CHECK_THROWS_AS(eals::train_fast(data, weights, hp, options), std::invalid_argument);
}
