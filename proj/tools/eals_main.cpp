#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eals/bench.hpp"
#include "eals/errors.hpp"
#include "eals/evaluation.hpp"
#include "eals/ingest.hpp"
#include "eals/serialization.hpp"
#include "eals/solver_fast.hpp"
#include "eals/solver_vanilla.hpp"
#include "eals/synthetic.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonTrainFlags {
  std::string data_path;
  std::string solver = "fast";
  std::size_t k = 8;
  double lambda = 0.01;
  std::size_t iters = 100;
  double tol = 1e-6;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  std::string scheme = "uniform";
  double c0 = 1.0;
  std::optional<double> alpha;
  std::string weights_file;
  bool binarize = false;
  double obs_weight = 1.0;
};

void add_train_flags(CLI::App& cmd, CommonTrainFlags& flags, bool with_solver) {
  cmd.add_option("--data", flags.data_path, "ratings file")->required();
  if (with_solver) {
    cmd.add_option("--solver", flags.solver, "vanilla or fast")
        ->check(CLI::IsMember({"vanilla", "fast"}));
  }
  cmd.add_option("--k", flags.k, "latent dimension");
  cmd.add_option("--lambda", flags.lambda, "L2 regularization");
  cmd.add_option("--iters", flags.iters, "iteration budget");
  cmd.add_option("--tol", flags.tol, "relative objective-change stopping threshold");
  cmd.add_option("--seed", flags.seed, "RNG seed");
  cmd.add_option("--threads", flags.threads, "fast-solver phase parallelism");
  cmd.add_flag("--binarize", flags.binarize, "treat every observed entry as 1");
  cmd.add_option("--obs-weight", flags.obs_weight,
                 "observed-entry weight when the file has no weight column");
}

void add_scheme_flags(CLI::App& cmd, CommonTrainFlags& flags) {
  cmd.add_option("--scheme", flags.scheme, "missing-weight scheme")
      ->check(CLI::IsMember({"uniform", "popularity", "user", "file"}));
  cmd.add_option("--c0", flags.c0, "overall missing-data weight mass");
  cmd.add_option("--alpha", flags.alpha, "popularity exponent");
  cmd.add_option("--weights-file", flags.weights_file,
                 "weight model file (scheme file) or per-user weights, one per line (scheme user)");
}

eals::Hyperparams to_hyperparams(const CommonTrainFlags& flags) {
  eals::Hyperparams hp;
  hp.k = flags.k;
  hp.lambda = flags.lambda;
  hp.max_iters = flags.iters;
  hp.rel_tol = flags.tol;
  hp.seed = flags.seed;
  return hp;
}

eals::MissingWeightModel build_scheme(const CommonTrainFlags& flags,
                                      const eals::SparseRatingMatrix& data) {
  if (flags.scheme != "popularity" && flags.alpha.has_value()) {
    throw UsageError("--alpha requires --scheme popularity");
  }
  if (flags.scheme == "uniform" || flags.scheme == "popularity") {
    if (!flags.weights_file.empty()) {
      throw UsageError("--weights-file requires --scheme user or file");
    }
  }
  if (flags.scheme == "uniform") {
    return eals::uniform_missing(data.num_rows(), data.num_cols(), flags.c0);
  }
  if (flags.scheme == "popularity") {
    return eals::popularity_missing(data, flags.c0, flags.alpha.value_or(0.0));
  }
  if (flags.weights_file.empty()) {
    throw UsageError("--scheme " + flags.scheme + " requires --weights-file");
  }
  if (flags.scheme == "user") {
    std::ifstream in(flags.weights_file);
    if (!in) throw eals::DataError("cannot open per-user weights: " + flags.weights_file);
    std::vector<double> per_user;
    double value = 0.0;
    while (in >> value) per_user.push_back(value);
    return eals::user_oriented_missing(data, per_user);
  }
  return eals::load_weight_model(flags.weights_file);
}

eals::TrainResult run_solver(const CommonTrainFlags& flags, const eals::SparseRatingMatrix& data,
                             const eals::MissingWeightModel& weights) {
  const eals::Hyperparams hp = to_hyperparams(flags);
  if (flags.solver == "vanilla") return eals::train_vanilla(data, weights, hp);
  return eals::train_fast(data, weights, hp, {}, flags.threads);
}

int cmd_train(const CommonTrainFlags& flags, const std::string& out_path,
              const std::string& log_path, bool holdout_last) {
  const std::vector<eals::RawRating> raw = eals::parse_ratings(flags.data_path);
  const eals::BuildOptions build_options{flags.binarize, flags.obs_weight};

  std::optional<eals::BuiltMatrix> built;
  std::optional<eals::EvalSplit> split;
  if (holdout_last) {
    split = eals::leave_one_out(raw, build_options);
  } else {
    built = eals::build_matrix(raw, build_options);
  }
  const eals::SparseRatingMatrix& data = holdout_last ? split->train : built->matrix;
  const eals::IdMaps& maps = holdout_last ? split->maps : built->maps;

  const eals::MissingWeightModel weights = build_scheme(flags, data);
  const eals::TrainResult result = run_solver(flags, data, weights);

  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path);
    if (!log) throw eals::DataError("cannot write log: " + log_path);
  }
  for (std::size_t iter = 0; iter < result.objective_trace.size(); ++iter) {
    const std::string line = std::to_string(iter + 1) + "," +
                             eals::format_double(result.objective_trace[iter]) + "," +
                             eals::format_double(result.iter_seconds[iter]);
    std::cout << line << '\n';
    if (log.is_open()) log << line << '\n';
  }

  eals::save_model(out_path, result.model);
  eals::save_id_map(out_path + ".users.tsv", maps.users);
  eals::save_id_map(out_path + ".items.tsv", maps.items);
  return 0;
}

int cmd_eval(const std::string& data_path, const std::string& checkpoint_path, std::size_t topn,
             bool binarize) {
  const std::vector<eals::RawRating> raw = eals::parse_ratings(data_path);
  const eals::EvalSplit split = eals::leave_one_out(raw, eals::BuildOptions{binarize, 1.0});
  const eals::FactorModel model = eals::load_model(checkpoint_path);
  if (model.num_rows() != split.train.num_rows() ||
      model.num_cols() != split.train.num_cols()) {
    throw eals::DataError("checkpoint dimensions " + std::to_string(model.num_rows()) + "x" +
                          std::to_string(model.num_cols()) + " do not match data " +
                          std::to_string(split.train.num_rows()) + "x" +
                          std::to_string(split.train.num_cols()));
  }
  const eals::RankingReport report = eals::evaluate_ranking(model, split, topn);
  std::cout << "HR@" << topn << "=" << eals::format_double(report.hr) << '\n'
            << "NDCG@" << topn << "=" << eals::format_double(report.ndcg) << '\n'
            << "users_evaluated=" << report.users_evaluated << '\n';
  return 0;
}

int cmd_bench(const std::string& data_path, const std::vector<double>& synthetic,
              eals::BenchOptions options, bool with_vanilla) {
  options.run_vanilla = with_vanilla;
  std::optional<eals::SparseRatingMatrix> data;
  if (!synthetic.empty()) {
    if (synthetic.size() != 4) {
      throw UsageError("--synthetic expects M N DENSITY SEED");
    }
    data = eals::synthetic_matrix(static_cast<std::size_t>(synthetic[0]),
                                  static_cast<std::size_t>(synthetic[1]), synthetic[2],
                                  static_cast<std::uint64_t>(synthetic[3]));
  } else if (!data_path.empty()) {
    data = eals::build_matrix(eals::parse_ratings(data_path)).matrix;
  } else {
    throw UsageError("bench needs --data or --synthetic");
  }
  const std::vector<eals::BenchCell> cells = eals::run_bench(*data, options);
  std::cout << eals::format_bench_table(cells) << eals::format_scaling_report(cells);
  return 0;
}

int cmd_sweep(const CommonTrainFlags& flags, const std::vector<double>& c0_grid,
              const std::vector<double>& alpha_grid, std::size_t topn,
              const std::string& out_path) {
  const std::vector<eals::RawRating> raw = eals::parse_ratings(flags.data_path);
  const eals::EvalSplit split =
      eals::leave_one_out(raw, eals::BuildOptions{flags.binarize, flags.obs_weight});

  std::ostringstream csv;
  csv << "c0,alpha,hr,ndcg\n";
  for (const double c0 : c0_grid) {
    for (const double alpha : alpha_grid) {
      const eals::MissingWeightModel weights =
          eals::popularity_missing(split.train, c0, alpha);
      CommonTrainFlags cell = flags;
      cell.c0 = c0;
      const eals::TrainResult result = run_solver(cell, split.train, weights);
      const eals::RankingReport report = eals::evaluate_ranking(result.model, split, topn);
      csv << eals::format_double(c0) << ',' << eals::format_double(alpha) << ','
          << eals::format_double(report.hr) << ',' << eals::format_double(report.ndcg) << '\n';
    }
  }

  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw eals::DataError("cannot write sweep CSV: " + out_path);
    out << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted matrix factorization with non-uniform missing-data weights"};
  app.require_subcommand(1);

  CommonTrainFlags train_flags;
  std::string train_out = "model.ckpt";
  std::string train_log;
  bool holdout_last = false;
  CLI::App* train = app.add_subcommand("train", "train a model and write a checkpoint");
  add_train_flags(*train, train_flags, true);
  add_scheme_flags(*train, train_flags);
  train->add_option("--out", train_out, "checkpoint path");
  train->add_option("--log", train_log, "also write per-iteration log lines to this file");
  train->add_flag("--holdout-last", holdout_last,
                  "train on the leave-one-out training split instead of the full file");

  std::string eval_data, eval_checkpoint;
  std::size_t eval_topn = 100;
  bool eval_binarize = false;
  CLI::App* eval = app.add_subcommand("eval", "leave-one-out ranking metrics for a checkpoint");
  eval->add_option("--data", eval_data, "ratings file")->required();
  eval->add_option("--checkpoint", eval_checkpoint, "model checkpoint")->required();
  eval->add_option("--topn", eval_topn, "list length");
  eval->add_flag("--binarize", eval_binarize, "treat every observed entry as 1");

  std::string bench_data;
  std::vector<double> bench_synthetic;
  eals::BenchOptions bench_options;
  bool bench_vanilla = false;
  CLI::App* bench = app.add_subcommand("bench", "per-iteration timing over a (K, Z) grid");
  bench->add_option("--data", bench_data, "ratings file");
  bench->add_option("--synthetic", bench_synthetic, "M N DENSITY SEED")->expected(4);
  bench->add_option("--grid-k", bench_options.ks, "latent dimensions")->delimiter(',');
  bench->add_option("--grid-z", bench_options.zs, "weight ranks")->delimiter(',');
  bench->add_option("--iters", bench_options.fast_iters, "fast-solver iterations per cell");
  bench->add_option("--vanilla-iters", bench_options.vanilla_iters,
                    "vanilla iterations per cell");
  bench->add_option("--reps", bench_options.repetitions, "repetitions per cell");
  bench->add_option("--seed", bench_options.seed, "RNG seed");
  bench->add_option("--threads", bench_options.threads, "fast-solver phase parallelism");
  bench->add_flag("--vanilla", bench_vanilla, "also time the vanilla solver at Z=1");

  CommonTrainFlags sweep_flags;
  std::vector<double> c0_grid{1.0};
  std::vector<double> alpha_grid{0.0};
  std::size_t sweep_topn = 100;
  std::string sweep_out;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "train and evaluate the popularity scheme over a (c0, alpha) grid");
  add_train_flags(*sweep, sweep_flags, true);
  sweep->add_option("--c0-grid", c0_grid, "c0 values")->delimiter(',');
  sweep->add_option("--alpha-grid", alpha_grid, "alpha values")->delimiter(',');
  sweep->add_option("--topn", sweep_topn, "list length");
  sweep->add_option("--out", sweep_out, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(train_flags, train_out, train_log, holdout_last);
    if (eval->parsed()) {
      return cmd_eval(eval_data, eval_checkpoint, eval_topn, eval_binarize);
    }
    if (bench->parsed()) return cmd_bench(bench_data, bench_synthetic, bench_options, bench_vanilla);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, c0_grid, alpha_grid, sweep_topn, sweep_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const eals::SingularUpdateError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const eals::ConvergenceError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const eals::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::domain_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::out_of_range& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
