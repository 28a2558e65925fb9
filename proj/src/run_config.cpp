#include "dagnet/run_config.hpp"

#include <algorithm>
#include <sstream>

#include "dagnet/autoencoder.hpp"

namespace dagnet {

namespace {

const std::vector<std::string> kKnownKeys = {
    "topology",       "widths",      "arch",        "code_layer",
    "activation",     "allow_linear", "init_gain",  "data",
    "data_count",     "data_rows",   "data_cols",   "data_seed",
    "train_count",    "split_seed",  "targets",     "teacher_jitter",
    "teacher_seed",   "eta",         "s",           "iterations",
    "seed",           "optimizer",   "beta",        "early_stop",
    "tail_threshold", "tail_window", "out_dir"};

std::uint64_t get_seed(const KeyValueFile& kv, const std::string& key,
                       std::uint64_t fallback) {
  if (!kv.has(key)) return fallback;
  const long v = kv.get_int(key);
  if (v < 0) throw DomainError("seed \"" + key + "\" must be non-negative");
  return static_cast<std::uint64_t>(v);
}

DagTopology build_topology(const RunConfig& cfg) {
  if (!cfg.topology_path.empty()) {
    if (!cfg.widths.empty()) {
      throw DomainError("give either a topology file or inline widths, not both");
    }
    return load_topology(cfg.topology_path);
  }
  if (cfg.widths.empty()) {
    throw DomainError("no architecture: set `topology` or `widths`");
  }
  const int L = static_cast<int>(cfg.widths.size()) - 1;
  if (cfg.arch == "cross") {
    const int code = cfg.code_layer >= 0 ? cfg.code_layer : (L + 1) / 2;
    return crossencoder_topology(cfg.widths, code);
  }
  std::optional<int> code;
  if (cfg.code_layer >= 0) code = cfg.code_layer;
  if (cfg.arch == "sequential") {
    std::vector<Edge> chain;
    for (int j = 0; j < L; ++j) chain.push_back({j, j + 1});
    return DagTopology(cfg.widths, std::move(chain), code);
  }
  if (cfg.arch == "dense") {
    std::vector<Edge> all;
    for (int i = 0; i < L; ++i) {
      for (int j = i + 1; j <= L; ++j) all.push_back({i, j});
    }
    return DagTopology(cfg.widths, std::move(all), code);
  }
  throw DomainError("unknown arch \"" + cfg.arch +
                    "\" (expected cross, sequential or dense)");
}

}  // namespace

RunConfig config_from_kv(const KeyValueFile& kv) {
  kv.require_known(kKnownKeys);
  RunConfig cfg;
  cfg.topology_path = kv.get_string("topology", "");
  if (kv.has("widths")) cfg.widths = kv.get_int_list("widths");
  cfg.arch = kv.get_string("arch", cfg.arch);
  cfg.code_layer = static_cast<int>(kv.get_int("code_layer", cfg.code_layer));
  cfg.activation = kv.get_string("activation", cfg.activation);
  cfg.allow_linear = kv.get_bool("allow_linear", cfg.allow_linear);
  cfg.init_gain = kv.get_real("init_gain", cfg.init_gain);
  cfg.data = kv.get_string("data", cfg.data);
  cfg.data_count = kv.get_int("data_count", cfg.data_count);
  cfg.data_rows = static_cast<int>(kv.get_int("data_rows", cfg.data_rows));
  cfg.data_cols = static_cast<int>(kv.get_int("data_cols", cfg.data_cols));
  cfg.data_seed = get_seed(kv, "data_seed", cfg.data_seed);
  cfg.train_count = kv.get_int("train_count", cfg.train_count);
  cfg.split_seed = get_seed(kv, "split_seed", cfg.split_seed);
  cfg.targets = kv.get_string("targets", cfg.targets);
  cfg.teacher_jitter = kv.get_real("teacher_jitter", cfg.teacher_jitter);
  cfg.teacher_seed = get_seed(kv, "teacher_seed", cfg.teacher_seed);
  cfg.eta = kv.get_real("eta", cfg.eta);
  cfg.s = kv.get_real("s", cfg.s);
  cfg.iterations = kv.get_int("iterations", cfg.iterations);
  cfg.seed = get_seed(kv, "seed", cfg.seed);
  cfg.optimizer = kv.get_string("optimizer", cfg.optimizer);
  cfg.beta = kv.get_real("beta", cfg.beta);
  cfg.early_stop = kv.get_bool("early_stop", cfg.early_stop);
  cfg.tail_threshold = kv.get_real("tail_threshold", cfg.tail_threshold);
  cfg.tail_window = static_cast<int>(kv.get_int("tail_window", cfg.tail_window));
  cfg.out_dir = kv.get_string("out_dir", cfg.out_dir);
  return cfg;
}

RunConfig config_from_file(const std::string& path) {
  return config_from_kv(KeyValueFile::load(path));
}

std::string canonical_config_text(const RunConfig& cfg, const DagTopology& t) {
  std::ostringstream out;
  out << "activation = " << cfg.activation << "\n";
  out << "allow_linear = " << (cfg.allow_linear ? "true" : "false") << "\n";
  out << "beta = " << format_double(cfg.beta) << "\n";
  out << "data = " << cfg.data << "\n";
  out << "data_cols = " << cfg.data_cols << "\n";
  out << "data_count = " << cfg.data_count << "\n";
  out << "data_rows = " << cfg.data_rows << "\n";
  out << "data_seed = " << cfg.data_seed << "\n";
  out << "early_stop = " << (cfg.early_stop ? "true" : "false") << "\n";
  out << "eta = " << format_double(cfg.eta) << "\n";
  out << "init_gain = " << format_double(cfg.init_gain) << "\n";
  out << "iterations = " << cfg.iterations << "\n";
  out << "optimizer = " << cfg.optimizer << "\n";
  out << "s = " << format_double(cfg.s) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "split_seed = " << cfg.split_seed << "\n";
  out << "tail_threshold = " << format_double(cfg.tail_threshold) << "\n";
  out << "tail_window = " << cfg.tail_window << "\n";
  out << "targets = " << cfg.targets << "\n";
  out << "teacher_jitter = " << format_double(cfg.teacher_jitter) << "\n";
  out << "teacher_seed = " << cfg.teacher_seed << "\n";
  out << "topology_hash = " << hash_hex(topology_hash(t)) << "\n";
  out << "train_count = " << cfg.train_count << "\n";
  return out.str();
}

RunSetup prepare_run(const RunConfig& cfg) {
  DagTopology topology = build_topology(cfg);
  const Activation act = Activation::from_name(cfg.activation);
  if (!act.bounded() && !cfg.allow_linear) {
    throw DomainError(
        "the linear activation has unbounded derivatives and voids the "
        "convergence guarantees; set allow_linear = true to use it anyway");
  }
  if (cfg.optimizer != "adaptive" && cfg.optimizer != "fixed") {
    throw DomainError("unknown optimizer \"" + cfg.optimizer +
                      "\" (expected adaptive or fixed)");
  }

  // For generated data the requested counts must leave both split halves
  // non-empty; for directory data the split itself checks against the real
  // file count.
  const bool generated = cfg.data == "synthetic" || cfg.data == "uniform";
  if (generated) {
    if (cfg.data_count < 2) {
      throw DomainError("data_count must leave room for a train/test split");
    }
    if (cfg.train_count < 1 || cfg.train_count >= cfg.data_count) {
      throw DomainError("train_count must lie in [1, data_count)");
    }
  }

  Dataset full;
  if (cfg.data == "synthetic") {
    full = synthetic_faces(static_cast<std::size_t>(cfg.data_count),
                           cfg.data_rows, cfg.data_cols, cfg.data_seed);
  } else if (cfg.data == "uniform") {
    // Plain input vectors on (-1, 1), one row; used by the convergence
    // experiments where no image structure is wanted.
    full.rows = 1;
    full.cols = topology.width(0);
    full.tag = "uniform";
    Rng rng(cfg.data_seed);
    for (long n = 0; n < cfg.data_count; ++n) {
      Vector x(static_cast<std::size_t>(topology.width(0)));
      for (double& v : x) v = rng.uniform(-1.0, 1.0);
      full.samples.push_back(std::move(x));
    }
  } else {
    full = load_pgm_directory(cfg.data);
  }

  if (full.dim() != topology.width(0)) {
    throw DomainError("data dimension " + std::to_string(full.dim()) +
                      " does not match input width " +
                      std::to_string(topology.width(0)));
  }

  RunSetup setup{std::move(topology), act, {}, {}, {}, {}, {}, 0};
  std::tie(setup.train_data, setup.test_data) =
      split(full, static_cast<std::size_t>(cfg.train_count), cfg.split_seed);
  setup.inputs = setup.train_data.samples;

  TrainOptions& opt = setup.options;
  opt.eta = cfg.eta;
  opt.s = cfg.s;
  opt.iterations = cfg.iterations;
  opt.seed = cfg.seed;
  opt.init_gain = cfg.init_gain;
  opt.method = cfg.optimizer == "adaptive" ? TrainOptions::Method::Adaptive
                                           : TrainOptions::Method::FixedMomentum;
  opt.beta = cfg.beta;
  opt.early_stop = cfg.early_stop;
  opt.thresholds.tail_threshold = cfg.tail_threshold;
  opt.thresholds.tail_window = cfg.tail_window;

  if (cfg.targets == "inputs") {
    const int out_w = setup.topology.width(setup.topology.last_layer());
    if (out_w != setup.topology.width(0)) {
      throw DomainError("reconstruction targets need matching input and "
                        "output widths, got " +
                        std::to_string(setup.topology.width(0)) + " and " +
                        std::to_string(out_w));
    }
    setup.targets = setup.inputs;
  } else if (cfg.targets == "teacher") {
    const WeightSet base =
        init_random(setup.topology, cfg.seed, cfg.init_gain);
    const std::uint64_t tseed =
        cfg.teacher_seed != 0 ? cfg.teacher_seed : cfg.seed + 7777;
    setup.targets = teacher_targets(setup.topology, act, base, setup.inputs,
                                    cfg.teacher_jitter, tseed);
    opt.initial_weights = base;
  } else {
    throw DomainError("unknown targets \"" + cfg.targets +
                      "\" (expected inputs or teacher)");
  }

  setup.config_hash =
      fnv1a64(canonical_config_text(cfg, setup.topology));
  return setup;
}

}  // namespace dagnet
