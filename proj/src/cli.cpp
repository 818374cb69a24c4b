#include "acca/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "acca/align.hpp"
#include "acca/driver.hpp"
#include "acca/errors.hpp"
#include "acca/io.hpp"
#include "acca/metrics.hpp"
#include "acca/synth.hpp"

namespace acca {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

void ensure_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
}

std::vector<std::size_t> default_k_values(std::size_t n) {
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k <= std::min<std::size_t>(5, n); ++k) ks.push_back(k);
  return ks;
}

ordered_json topk_json(const TopKReport& report) {
  ordered_json out;
  out["k"] = report.k_values;
  out["accuracy_mean"] = report.accuracy_mean;
  out["accuracy_std"] = report.accuracy_std;
  out["baseline"] = report.baseline;
  out["replicates"] = report.replicates;
  return out;
}

ordered_json feasibility_json(const AlignmentMatrix& alignment) {
  ordered_json out;
  out["max_row_sum_dev"] = alignment.report.max_row_sum_dev;
  out["min_entry"] = alignment.report.min_entry;
  out["max_entry"] = alignment.report.max_entry;
  out["max_row_entropy"] = alignment.report.max_row_entropy;
  out["entropy_bound"] = alignment.entropy_bound;
  return out;
}

std::string shape_of(const Mat& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

struct GenFlags {
  GenConfig config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", config.n, "Number of samples N")->capture_default_str();
    cmd->add_option("--dbar", config.dbar, "Latent dimension of the shared samples")
        ->capture_default_str();
    cmd->add_option("--dx", config.dx, "Rows of view X")->capture_default_str();
    cmd->add_option("--dy", config.dy, "Rows of view Y")->capture_default_str();
    cmd->add_option("--noise", config.noise_sigma,
                    "Additive Gaussian noise level on both views")
        ->capture_default_str();
  }
};

struct HyperFlags {
  HyperParams hp;

  void attach(CLI::App* cmd) {
    cmd->add_option("--d", hp.d, "Shared embedding dimension d")
        ->capture_default_str();
    cmd->add_option("--gamma1", hp.gamma1, "Weight of the P P^T orthogonality penalty")
        ->capture_default_str();
    cmd->add_option("--gamma2", hp.gamma2, "Weight of the P^T P orthogonality penalty")
        ->capture_default_str();
    cmd->add_option("--max-iters", hp.outer_max_iters, "Outer iteration cap")
        ->capture_default_str();
    cmd->add_option("--loss-threshold", hp.loss_threshold,
                    "Stop once the objective falls below this value")
        ->capture_default_str();
    cmd->add_option("--rank-rtol", hp.rank_rtol,
                    "Relative eigenvalue cutoff for pseudo-inverses")
        ->capture_default_str();
    cmd->add_option("--p-max-inner", hp.p_step.max_inner_iters,
                    "Inner iteration cap of the P-step solver")
        ->capture_default_str();
  }
};

ordered_json hyper_json(const HyperParams& hp, double lambda) {
  ordered_json out;
  out["d"] = hp.d;
  out["gamma1"] = hp.gamma1;
  out["gamma2"] = hp.gamma2;
  out["lambda"] = lambda;
  out["max_iters"] = hp.outer_max_iters;
  out["loss_threshold"] = hp.loss_threshold;
  out["loss_rel_tol"] = hp.loss_rel_tol;
  out["rank_rtol"] = hp.rank_rtol;
  out["p_max_inner"] = hp.p_step.max_inner_iters;
  out["init_max_inner"] = hp.init_step.max_inner_iters;
  out["seed"] = hp.seed;
  return out;
}

ordered_json gen_json(const GenConfig& config) {
  ordered_json out;
  out["n"] = config.n;
  out["dbar"] = config.dbar;
  out["dx"] = config.dx;
  out["dy"] = config.dy;
  out["noise"] = config.noise_sigma;
  out["seed"] = config.seed;
  return out;
}

std::string loss_trace_csv(const std::vector<double>& trace) {
  std::string out = "iteration,loss\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += format_double(trace[i]);
    out += '\n';
  }
  return out;
}

int cmd_generate(const GenFlags& gen, std::uint64_t seed, const fs::path& out_dir) {
  GenConfig config = gen.config;
  config.seed = seed;
  config.validate();
  ensure_out_dir(out_dir);

  const SyntheticInstance inst = generate(config);
  write_csv_matrix(out_dir / "X.csv", inst.data.x);
  write_csv_matrix(out_dir / "Y.csv", inst.data.y);
  write_csv_matrix(out_dir / "P_true.csv", inst.p_true);

  ordered_json manifest;
  manifest["config"] = gen_json(config);
  manifest["centered"] = true;
  manifest["files"] = {{"x", "X.csv"}, {"y", "Y.csv"}, {"p_true", "P_true.csv"}};
  atomic_write(out_dir / "manifest.json", manifest.dump(2) + "\n");

  std::cout << "wrote " << shape_of(inst.data.x) << " X, " << shape_of(inst.data.y)
            << " Y, " << shape_of(inst.p_true) << " P_true to " << out_dir.string()
            << "\n";
  return 0;
}

struct FitInputs {
  DatasetPair data;
  std::optional<Mat> p_true;
  ordered_json source;
};

FitInputs load_fit_inputs(bool synthetic, const std::string& x_path,
                          const std::string& y_path, const std::string& p_true_path,
                          const GenFlags& gen, std::uint64_t seed) {
  FitInputs inputs;
  if (synthetic) {
    GenConfig config = gen.config;
    config.seed = seed;
    const SyntheticInstance inst = generate(config);
    inputs.data = inst.data;
    inputs.p_true = inst.p_true;
    inputs.source = gen_json(config);
    inputs.source["synthetic"] = true;
    return inputs;
  }
  if (x_path.empty() || y_path.empty()) {
    throw ParamError("provide --x and --y, or pass --synthetic");
  }
  Mat x = read_csv_matrix(x_path);
  Mat y = read_csv_matrix(y_path);
  if (x.cols() != y.cols()) {
    throw ParamError("views disagree on sample count: X is " + shape_of(x) +
                     ", Y is " + shape_of(y));
  }
  inputs.data = make_centered_pair(std::move(x), std::move(y));
  inputs.source = ordered_json{{"x", x_path}, {"y", y_path}};
  inputs.source["synthetic"] = false;
  if (!p_true_path.empty()) {
    inputs.p_true = read_csv_matrix(p_true_path);
    inputs.source["p_true"] = p_true_path;
  }
  return inputs;
}

int cmd_fit(bool synthetic, const std::string& x_path, const std::string& y_path,
            const std::string& p_true_path, const GenFlags& gen, HyperParams hp,
            double lambda, std::uint64_t seed, const fs::path& out_dir) {
  hp.entropy_bound = lambda;
  hp.seed = seed;
  ensure_out_dir(out_dir);

  const auto t_start = clock_type::now();
  FitInputs inputs = load_fit_inputs(synthetic, x_path, y_path, p_true_path, gen, seed);
  const double t_load = seconds_since(t_start);

  const std::size_t n = inputs.data.samples();
  hp.validate(n);

  const auto t_init_start = clock_type::now();
  const AlignmentMatrix init = initialize_alignment(
      inputs.data, hp.gamma1, hp.gamma2, hp.entropy_bound, hp.rank_rtol,
      InitOptions{.raw_views = false, .settings = hp.init_step});
  const double t_init = seconds_since(t_init_start);

  const auto t_fit_start = clock_type::now();
  const FitResult fit = fit_acca(inputs.data, hp, init);
  const double t_fit = seconds_since(t_fit_start);

  write_csv_matrix(out_dir / "P_est.csv", fit.alignment.p);
  write_pgm(out_dir / "P_est.pgm", fit.alignment.p);
  atomic_write(out_dir / "loss_trace.csv", loss_trace_csv(fit.loss_trace));

  ordered_json report;
  report["command"] = "fit";
  report["source"] = inputs.source;
  report["n"] = n;
  report["hyperparams"] = hyper_json(hp, lambda);
  report["result"]["iterations_run"] = fit.iterations_run;
  report["result"]["stop_reason"] = to_string(fit.stop_reason);
  report["result"]["final_loss"] = fit.loss_trace.back();
  report["result"]["initial_loss"] = fit.loss_trace.front();
  report["result"]["feasibility"] = feasibility_json(fit.alignment);
  if (inputs.p_true) {
    const std::vector<std::size_t> ks = default_k_values(n);
    TopKReport topk;
    topk.k_values = ks;
    topk.replicates = 1;
    for (std::size_t k : ks) {
      topk.accuracy_mean.push_back(topk_accuracy(fit.alignment.p, *inputs.p_true, k));
      topk.accuracy_std.push_back(0.0);
      topk.baseline.push_back(baseline_accuracy(n, k));
    }
    report["result"]["topk"] = topk_json(topk);
  } else {
    report["result"]["topk"] = nullptr;
  }
  report["artifacts"] = {{"p_est", "P_est.csv"},
                         {"p_est_image", "P_est.pgm"},
                         {"loss_trace", "loss_trace.csv"}};
  atomic_write(out_dir / "report.json", report.dump(2) + "\n");

  ordered_json timings;
  timings["load_seconds"] = t_load;
  timings["init_seconds"] = t_init;
  timings["fit_seconds"] = t_fit;
  timings["total_seconds"] = seconds_since(t_start);
  atomic_write(out_dir / "timings.json", timings.dump(2) + "\n");

  std::cout << "fit: " << fit.iterations_run << " iterations, stop reason "
            << to_string(fit.stop_reason) << ", final loss "
            << format_double(fit.loss_trace.back()) << "\n";
  return 0;
}

int cmd_sweep(const std::vector<double>& lambdas, std::size_t replicates,
              const GenFlags& gen, HyperParams hp, std::uint64_t seed,
              const fs::path& out_dir) {
  if (lambdas.empty()) throw ParamError("sweep needs at least one --lambdas value");
  if (replicates < 1) throw ParamError("--replicates must be at least 1");
  GenConfig config = gen.config;
  config.seed = seed;
  config.validate();
  hp.seed = seed;
  for (double lambda : lambdas) {
    hp.entropy_bound = lambda;
    hp.validate(config.n);
  }
  ensure_out_dir(out_dir);

  const std::vector<std::size_t> ks = default_k_values(config.n);
  const auto t_start = clock_type::now();

  std::string sweep_csv = "lambda,k,mean,std,baseline\n";
  ordered_json timings;
  for (double lambda : lambdas) {
    hp.entropy_bound = lambda;
    const auto t_lambda = clock_type::now();
    const MonteCarloResult mc = monte_carlo(hp, config, replicates, ks);
    const fs::path sub_dir = out_dir / ("lambda_" + format_double(lambda));
    ensure_out_dir(sub_dir);

    std::string topk_csv = "k,mean,std,baseline\n";
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      topk_csv += std::to_string(ks[ki]) + ',' +
                  format_double(mc.topk.accuracy_mean[ki]) + ',' +
                  format_double(mc.topk.accuracy_std[ki]) + ',' +
                  format_double(mc.topk.baseline[ki]) + '\n';
      sweep_csv += format_double(lambda) + ',' + std::to_string(ks[ki]) + ',' +
                   format_double(mc.topk.accuracy_mean[ki]) + ',' +
                   format_double(mc.topk.accuracy_std[ki]) + ',' +
                   format_double(mc.topk.baseline[ki]) + '\n';
    }
    atomic_write(sub_dir / "topk.csv", topk_csv);
    if (!mc.first_alignment.empty()) {
      write_pgm(sub_dir / "P_est.pgm", mc.first_alignment);
    }

    ordered_json report;
    report["command"] = "sweep";
    report["lambda"] = lambda;
    report["config"] = gen_json(config);
    report["hyperparams"] = hyper_json(hp, lambda);
    report["replicates"] = replicates;
    report["aborted"] = mc.aborted;
    report["topk"] = topk_json(mc.topk);
    report["mean_final_loss"] = mc.mean_final_loss;
    report["mean_row_entropy"] = mc.mean_row_entropy;
    report["loss_mean"] = mc.loss.mean;
    report["loss_std"] = mc.loss.std_dev;
    atomic_write(sub_dir / "report.json", report.dump(2) + "\n");
    timings["lambda_" + format_double(lambda) + "_seconds"] = seconds_since(t_lambda);

    std::cout << "lambda " << format_double(lambda) << ": top-k means";
    for (double a : mc.topk.accuracy_mean) std::cout << ' ' << format_double(a);
    std::cout << "\n";
  }
  atomic_write(out_dir / "sweep.csv", sweep_csv);
  timings["total_seconds"] = seconds_since(t_start);
  atomic_write(out_dir / "timings.json", timings.dump(2) + "\n");
  return 0;
}

int cmd_eval(const std::string& p_est_path, const std::string& p_true_path,
             std::vector<std::size_t> ks, const fs::path& out_dir) {
  const Mat p_est = read_csv_matrix(p_est_path);
  const Mat p_true = read_csv_matrix(p_true_path);
  if (p_est.rows() != p_est.cols()) {
    throw ParamError("P estimate must be square, got " + shape_of(p_est));
  }
  if (!p_est.same_shape(p_true)) {
    throw ParamError("shape mismatch: estimate " + shape_of(p_est) + ", truth " +
                     shape_of(p_true));
  }
  const std::size_t n = p_est.rows();
  if (ks.empty()) ks = default_k_values(n);

  std::string csv = "k,accuracy,baseline\n";
  std::cout << "k\taccuracy\tbaseline\n";
  for (std::size_t k : ks) {
    const double acc = topk_accuracy(p_est, p_true, k);
    const double base = baseline_accuracy(n, k);
    csv += std::to_string(k) + ',' + format_double(acc) + ',' +
           format_double(base) + '\n';
    std::cout << k << '\t' << format_double(acc) << '\t' << format_double(base)
              << "\n";
  }
  ensure_out_dir(out_dir);
  atomic_write(out_dir / "topk.csv", csv);
  return 0;
}

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Aligned canonical correlation analysis: joint two-view "
               "embedding and column alignment"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Base RNG seed")->capture_default_str();

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic benchmark pair");
  GenFlags gen_gen;
  gen_gen.attach(gen_cmd);
  std::string gen_out = ".";
  gen_cmd->add_option("--out", gen_out, "Output directory")->capture_default_str();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit ACCA on a data pair");
  GenFlags fit_gen;
  fit_gen.attach(fit_cmd);
  HyperFlags fit_hyper;
  fit_hyper.attach(fit_cmd);
  bool fit_synthetic = false;
  std::string fit_x, fit_y, fit_p_true, fit_out = ".";
  double fit_lambda = 0.1;
  fit_cmd->add_flag("--synthetic", fit_synthetic,
                    "Generate the pair instead of reading files");
  fit_cmd->add_option("--x", fit_x, "CSV of view X (D_x rows, N columns)");
  fit_cmd->add_option("--y", fit_y, "CSV of view Y (D_y rows, N columns)");
  fit_cmd->add_option("--p-true", fit_p_true,
                      "Optional CSV of the true permutation for scoring");
  fit_cmd->add_option("--lambda", fit_lambda, "Row entropy bound (nats)")
      ->capture_default_str();
  fit_cmd->add_option("--out", fit_out, "Output directory")->capture_default_str();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over entropy bounds");
  GenFlags sweep_gen;
  sweep_gen.attach(sweep_cmd);
  HyperFlags sweep_hyper;
  sweep_hyper.attach(sweep_cmd);
  std::vector<double> sweep_lambdas;
  std::size_t sweep_replicates = 10;
  std::string sweep_out = ".";
  sweep_cmd->add_option("--lambdas", sweep_lambdas, "Entropy bounds to sweep")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--replicates", sweep_replicates, "Monte Carlo replicates")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Output directory")->capture_default_str();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score an estimated alignment");
  std::string eval_p_est, eval_p_true, eval_out = ".";
  std::vector<std::size_t> eval_ks;
  eval_cmd->add_option("--p-est", eval_p_est, "CSV of the estimated alignment")
      ->required();
  eval_cmd->add_option("--p-true", eval_p_true, "CSV of the true permutation")
      ->required();
  eval_cmd->add_option("--k", eval_ks, "k values (default 1..5)")->delimiter(',');
  eval_cmd->add_option("--out", eval_out, "Output directory for topk.csv")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  }

  if (gen_cmd->parsed()) return cmd_generate(gen_gen, seed, gen_out);
  if (fit_cmd->parsed()) {
    return cmd_fit(fit_synthetic, fit_x, fit_y, fit_p_true, fit_gen, fit_hyper.hp,
                   fit_lambda, seed, fit_out);
  }
  if (sweep_cmd->parsed()) {
    return cmd_sweep(sweep_lambdas, sweep_replicates, sweep_gen, sweep_hyper.hp, seed,
                     sweep_out);
  }
  if (eval_cmd->parsed()) return cmd_eval(eval_p_est, eval_p_true, eval_ks, eval_out);
  return 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  try {
    return dispatch(argc, argv);
  } catch (const ParamError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 4;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("acca");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace acca
