// Command-line front end: train / compare / gradcheck / verify.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dagnet/autoencoder.hpp"
#include "dagnet/metrics.hpp"
#include "dagnet/run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Flag values shared by the subcommands; only the ones the user passed
// override the config file.
struct Overrides {
  std::optional<double> eta;
  std::optional<double> s;
  std::optional<long> iterations;
  std::optional<long> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> optimizer;
  std::optional<long> data_seed;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--eta", ov.eta, "Learning rate (overrides the config)");
  cmd->add_option("--s", ov.s, "Momentum scale in (0, 1)");
  cmd->add_option("--iterations", ov.iterations, "Training iterations");
  cmd->add_option("--seed", ov.seed, "Weight initialization seed");
  cmd->add_option("--out-dir", ov.out_dir, "Output directory");
  cmd->add_option("--optimizer", ov.optimizer, "adaptive or fixed");
  cmd->add_option("--data-seed", ov.data_seed, "Dataset generation seed");
}

void apply(const Overrides& ov, dagnet::RunConfig& cfg) {
  if (ov.eta) cfg.eta = *ov.eta;
  if (ov.s) cfg.s = *ov.s;
  if (ov.iterations) cfg.iterations = *ov.iterations;
  if (ov.seed) cfg.seed = static_cast<std::uint64_t>(*ov.seed);
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
  if (ov.optimizer) cfg.optimizer = *ov.optimizer;
  if (ov.data_seed) cfg.data_seed = static_cast<std::uint64_t>(*ov.data_seed);
}

json verdict_to_json(const dagnet::ConvergenceVerdict& v, double eta, double s,
                     std::uint64_t config_hash, const std::string& method) {
  json j;
  j["config_hash"] = dagnet::hash_hex(config_hash);
  j["method"] = method;
  j["eta"] = eta;
  j["s"] = s;
  j["records"] = v.records_used;
  j["monotone_descent"] = v.monotone_descent;
  j["first_increase"] = v.first_increase;
  j["descent_inequality_ok"] = v.descent_inequality_ok;
  j["first_inequality_violation"] = v.first_inequality_violation;
  j["update_bound_ok"] = v.update_bound_ok;
  j["first_update_bound_violation"] = v.first_update_bound_violation;
  j["tail_max_grad_norm"] = v.tail_max_grad_norm;
  j["tail_ok"] = v.tail_ok;
  j["curvature_estimated"] = v.curvature_estimated;
  if (v.curvature_estimated) {
    j["estimated_C"] = v.estimated_C;
    if (std::isfinite(v.max_eta_for_C)) {
      j["max_eta_for_C"] = v.max_eta_for_C;
    }
    j["eta_within_bound"] = v.eta_within_bound;
  }
  j["final_error"] = v.final_error;
  j["converged"] = v.converged();
  return j;
}

void print_verdict(const dagnet::ConvergenceVerdict& v) {
  std::printf("records:                %ld\n", v.records_used);
  std::printf("monotone descent:       %s", v.monotone_descent ? "yes" : "NO");
  if (!v.monotone_descent) {
    std::printf(" (first increase at k=%ld)", v.first_increase);
  }
  std::printf("\n");
  std::printf("descent inequality:     %s",
              v.descent_inequality_ok ? "holds" : "VIOLATED");
  if (!v.descent_inequality_ok) {
    std::printf(" (first at k=%ld)", v.first_inequality_violation);
  }
  std::printf("\n");
  std::printf("update-size bound:      %s",
              v.update_bound_ok ? "holds" : "VIOLATED");
  if (!v.update_bound_ok) {
    std::printf(" (first at k=%ld)", v.first_update_bound_violation);
  }
  std::printf("\n");
  std::printf("tail max gradient norm: %.6g (%s)\n", v.tail_max_grad_norm,
              v.tail_ok ? "below threshold" : "above threshold");
  if (v.curvature_estimated) {
    std::printf("estimated curvature C:  %.6g\n", v.estimated_C);
    std::printf("guaranteed-rate bound:  %.6g (eta %s)\n", v.max_eta_for_C,
                v.eta_within_bound ? "inside" : "outside");
  } else {
    std::printf("estimated curvature C:  (not estimable from this run)\n");
  }
  std::printf("final error:            %.10g\n", v.final_error);
}

struct EvaluatedModel {
  double mean_psnr = 0.0;
  double mean_nrmse = 0.0;
  double mean_ssim = 0.0;
  double final_train_error = 0.0;
};

// Scores reconstructions of the test images (clamped to pixel range).
EvaluatedModel evaluate_on_test(const dagnet::DagTopology& t,
                                const dagnet::WeightSet& w,
                                const dagnet::Activation& act,
                                const dagnet::Dataset& test) {
  EvaluatedModel ev;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const dagnet::Vector y =
        dagnet::forward(t, w, act, test.samples[i]).output();
    dagnet::Matrix rec(static_cast<std::size_t>(test.rows),
                       static_cast<std::size_t>(test.cols));
    std::copy(y.begin(), y.end(), rec.data());
    const dagnet::ImagePair pair(test.as_image(i),
                                 dagnet::clamp_to_range(rec));
    ev.mean_psnr += dagnet::psnr(pair);
    ev.mean_nrmse += dagnet::nrmse(pair);
    ev.mean_ssim += dagnet::ssim(pair);
  }
  const double n = static_cast<double>(test.size());
  ev.mean_psnr /= n;
  ev.mean_nrmse /= n;
  ev.mean_ssim /= n;
  return ev;
}

int cmd_train(const std::string& config_path, const Overrides& ov) {
  dagnet::RunConfig cfg = dagnet::config_from_file(config_path);
  apply(ov, cfg);
  dagnet::RunSetup setup = dagnet::prepare_run(cfg);

  std::printf("training: %zu samples, %zu weights, eta=%g, s=%g, %s\n",
              setup.inputs.size(), setup.topology.weight_count(), cfg.eta,
              cfg.s, cfg.optimizer.c_str());
  const dagnet::TrainResult result = dagnet::train(
      setup.topology, setup.activation, setup.inputs, setup.targets,
      setup.options);
  std::printf("ran %ld iterations%s, final error %.10g\n",
              result.iterations_run,
              result.stopped_early ? " (stopped early)" : "",
              result.final_error);

  fs::create_directories(cfg.out_dir);
  const std::string base = cfg.out_dir + "/";
  {
    // Canonical text first (the hash input), then the hash itself.
    std::ofstream out(base + "run_config.txt");
    out << dagnet::canonical_config_text(cfg, setup.topology);
    out << "config_hash = " << dagnet::hash_hex(setup.config_hash) << "\n";
  }
  dagnet::save_topology(base + "topology.txt", setup.topology);
  dagnet::save_matrices(base + "weights.txt", result.weights,
                        dagnet::topology_hash(setup.topology));
  dagnet::save_trajectory(base + "trajectory.csv", result.trajectory,
                          setup.config_hash, cfg.eta, cfg.s);

  const bool adaptive = cfg.optimizer == "adaptive";
  const dagnet::ConvergenceVerdict verdict = dagnet::verify_theorem(
      result.trajectory, cfg.eta, cfg.s, setup.options.thresholds);
  {
    std::ofstream out(base + "verdict.json");
    out << verdict_to_json(verdict, cfg.eta, cfg.s, setup.config_hash,
                           cfg.optimizer)
               .dump(2)
        << "\n";
  }
  print_verdict(verdict);
  std::printf("artifacts in %s\n", cfg.out_dir.c_str());

  if (!adaptive) {
    // The fixed-momentum baseline claims no guarantee; producing the run is
    // the whole job.
    return 0;
  }
  return verdict.converged() ? 0 : 3;
}

int cmd_compare(const std::string& config_a, const std::string& config_b,
                const std::string& out_csv) {
  dagnet::RunConfig a = dagnet::config_from_file(config_a);
  dagnet::RunConfig b = dagnet::config_from_file(config_b);

  // A comparison is only meaningful on identical data, budget and seeds.
  auto differs = [](const auto& x, const auto& y) { return !(x == y); };
  if (differs(a.data, b.data) || differs(a.data_count, b.data_count) ||
      differs(a.data_rows, b.data_rows) || differs(a.data_cols, b.data_cols) ||
      differs(a.data_seed, b.data_seed) ||
      differs(a.train_count, b.train_count) ||
      differs(a.split_seed, b.split_seed) || differs(a.targets, b.targets) ||
      differs(a.iterations, b.iterations) || differs(a.eta, b.eta) ||
      differs(a.s, b.s) || differs(a.seed, b.seed) ||
      differs(a.activation, b.activation) ||
      differs(a.optimizer, b.optimizer)) {
    throw dagnet::DomainError(
        "the two configs must share data, targets, budget, rates and seeds; "
        "only the architecture may differ");
  }

  struct Side {
    std::string name;
    dagnet::RunSetup setup;
    EvaluatedModel ev;
  };
  if (a.arch == b.arch) {
    throw dagnet::DomainError(
        "the two configs use the same architecture (" + a.arch +
        "); comparing them would not be informative");
  }

  std::vector<Side> sides;
  for (const auto* cfg : {&a, &b}) {
    Side side{cfg->arch, dagnet::prepare_run(*cfg), {}};
    std::printf("training %s (%zu weights)...\n", side.name.c_str(),
                side.setup.topology.weight_count());
    const dagnet::TrainResult result = dagnet::train(
        side.setup.topology, side.setup.activation, side.setup.inputs,
        side.setup.targets, side.setup.options);
    side.ev = evaluate_on_test(side.setup.topology, result.weights,
                               side.setup.activation, side.setup.test_data);
    side.ev.final_train_error = result.final_error;
    sides.push_back(std::move(side));
  }

  std::printf("\n%-28s %10s %10s %10s %14s\n", "model", "psnr", "nrmse",
              "ssim", "train error");
  for (const Side& side : sides) {
    std::printf("%-28s %10.4f %10.4f %10.4f %14.6g\n", side.name.c_str(),
                side.ev.mean_psnr, side.ev.mean_nrmse, side.ev.mean_ssim,
                side.ev.final_train_error);
  }
  const EvaluatedModel& ea = sides[0].ev;
  const EvaluatedModel& eb = sides[1].ev;
  std::printf("\npsnr  difference (first - second): %+.4f dB\n",
              ea.mean_psnr - eb.mean_psnr);
  std::printf("nrmse difference (first - second): %+.4f\n",
              ea.mean_nrmse - eb.mean_nrmse);

  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) throw dagnet::IoFailure("cannot create " + out_csv);
    out << "model,psnr,nrmse,ssim,train_error\n";
    for (const Side& side : sides) {
      out << side.name << "," << dagnet::format_double(side.ev.mean_psnr)
          << "," << dagnet::format_double(side.ev.mean_nrmse) << ","
          << dagnet::format_double(side.ev.mean_ssim) << ","
          << dagnet::format_double(side.ev.final_train_error) << "\n";
    }
    std::printf("table written to %s\n", out_csv.c_str());
  }
  return 0;
}

int cmd_gradcheck(const std::string& config_path, double h, double threshold,
                  long sample_cap) {
  dagnet::RunConfig cfg = dagnet::config_from_file(config_path);
  dagnet::RunSetup setup = dagnet::prepare_run(cfg);

  std::vector<dagnet::Vector> inputs = setup.inputs;
  std::vector<dagnet::Vector> targets = setup.targets;
  if (sample_cap > 0 && static_cast<std::size_t>(sample_cap) < inputs.size()) {
    inputs.resize(static_cast<std::size_t>(sample_cap));
    targets.resize(static_cast<std::size_t>(sample_cap));
  }

  const dagnet::WeightSet w =
      setup.options.initial_weights
          ? *setup.options.initial_weights
          : dagnet::init_random(setup.topology, cfg.seed, cfg.init_gain);

  const dagnet::GradientSet adjoint = dagnet::batch_gradients(
      setup.topology, w, setup.activation, inputs, targets);
  const dagnet::GradientSet fd = dagnet::finite_difference_gradients(
      setup.topology, w, setup.activation, inputs, targets, h);

  std::printf("%-10s %14s %14s %12s\n", "edge", "|adjoint|", "|numeric|",
              "rel. diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < adjoint.count(); ++i) {
    const dagnet::Edge& e = adjoint.edges()[i];
    const double na = dagnet::frobenius(adjoint.mat(i));
    const double nf = dagnet::frobenius(fd.mat(i));
    double diff_sq = 0.0;
    for (std::size_t k = 0; k < adjoint.mat(i).size(); ++k) {
      const double d = adjoint.mat(i).data()[k] - fd.mat(i).data()[k];
      diff_sq += d * d;
    }
    const double rel = std::sqrt(diff_sq) / std::max(nf, 1e-10);
    worst = std::max(worst, rel);
    std::printf("(%d, %d)%*s %14.6e %14.6e %12.3e\n", e.src, e.dst,
                e.src > 9 || e.dst > 9 ? 2 : 4, "", na, nf, rel);
  }
  std::printf("largest relative difference: %.3e (threshold %.1e)\n", worst,
              threshold);
  return worst < threshold ? 0 : 4;
}

int cmd_verify(const std::string& trajectory_path, std::optional<double> eta,
               std::optional<double> s, double tail_threshold,
               int tail_window, const std::string& out_json) {
  const dagnet::TrajectoryFile tf = dagnet::load_trajectory(trajectory_path);
  const double use_eta = eta.value_or(tf.eta);
  const double use_s = s.value_or(tf.s);
  if (!(use_eta > 0.0) || !(use_s > 0.0 && use_s < 1.0)) {
    throw dagnet::DomainError(
        "trajectory header carries no usable eta/s; pass --eta and --s");
  }
  dagnet::VerdictThresholds thresholds;
  thresholds.tail_threshold = tail_threshold;
  thresholds.tail_window = tail_window;

  const dagnet::ConvergenceVerdict verdict =
      dagnet::verify_theorem(tf.records, use_eta, use_s, thresholds);
  std::printf("trajectory: %s (%zu records, eta=%g, s=%g)\n",
              trajectory_path.c_str(), tf.records.size(), use_eta, use_s);
  print_verdict(verdict);

  if (!out_json.empty()) {
    std::ofstream out(out_json);
    if (!out) throw dagnet::IoFailure("cannot create " + out_json);
    out << verdict_to_json(verdict, use_eta, use_s, tf.config_hash, "recorded")
               .dump(2)
        << "\n";
  }
  return verdict.converged() && verdict.descent_inequality_ok &&
                 verdict.update_bound_ok
             ? 0
             : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Feed-forward networks on layered DAGs with skip connections, trained "
      "by backpropagation with norm-adaptive momentum"};
  app.require_subcommand(1);

  std::string config_path, config_b, out_csv, out_json, trajectory_path;
  Overrides ov;
  double h = 1e-6, threshold = 1e-6, tail_threshold = 1e-4;
  int tail_window = 10;
  long sample_cap = 0;
  std::optional<double> verify_eta, verify_s;

  CLI::App* train = app.add_subcommand(
      "train", "Train a network and record its convergence trajectory");
  train->add_option("config", config_path, "Run configuration file")
      ->required();
  add_override_flags(train, ov);

  CLI::App* compare = app.add_subcommand(
      "compare",
      "Train two architectures on identical data/budget and score "
      "test-set reconstructions");
  compare->add_option("config_a", config_path, "First run configuration")
      ->required();
  compare->add_option("config_b", config_b, "Second run configuration")
      ->required();
  compare->add_option("--out", out_csv, "Write the comparison table as CSV");

  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck",
      "Compare the adjoint gradient against central finite differences");
  gradcheck->add_option("config", config_path, "Run configuration file")
      ->required();
  gradcheck->add_option("--step", h, "Finite-difference step (default 1e-6)");
  gradcheck->add_option("--threshold", threshold,
                        "Pass/fail bound on the relative difference");
  gradcheck->add_option("--samples", sample_cap,
                        "Use only the first N training samples");

  CLI::App* verify = app.add_subcommand(
      "verify", "Re-check the descent guarantees over a saved trajectory");
  verify->add_option("trajectory", trajectory_path, "trajectory.csv to check")
      ->required();
  verify->add_option("--eta", verify_eta, "Override the recorded rate");
  verify->add_option("--s", verify_s, "Override the recorded momentum scale");
  verify->add_option("--tail-threshold", tail_threshold,
                     "Gradient-norm level the tail must reach");
  verify->add_option("--tail-window", tail_window,
                     "Records forming the tail (default 10)");
  verify->add_option("--out", out_json, "Write the verdict as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, ov);
    if (compare->parsed()) return cmd_compare(config_path, config_b, out_csv);
    if (gradcheck->parsed()) {
      return cmd_gradcheck(config_path, h, threshold, sample_cap);
    }
    if (verify->parsed()) {
      return cmd_verify(trajectory_path, verify_eta, verify_s, tail_threshold,
                        tail_window, out_json);
    }
  } catch (const dagnet::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
