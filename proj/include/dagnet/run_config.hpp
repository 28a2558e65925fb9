#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dagnet/activation.hpp"
#include "dagnet/data.hpp"
#include "dagnet/io.hpp"
#include "dagnet/train.hpp"

namespace dagnet {

// Everything a training run depends on, resolved from a `key = value`
// config file plus command-line overrides.  Defaults are the desk-scale
// compression experiment; every field is part of the run fingerprint.
struct RunConfig {
  // Architecture: either a topology file, or inline widths with a pattern.
  std::string topology_path;
  std::vector<int> widths;
  // "cross": every intra-block pair around the code layer;
  // "sequential": chain; "dense": every forward pair (no code required).
  std::string arch = "cross";
  int code_layer = -1;  // -1 means none declared

  std::string activation = "tanh";
  // The linear activation voids the convergence guarantees; using it
  // requires this explicit acknowledgement.
  bool allow_linear = false;
  double init_gain = 1.0;

  // Data: "synthetic" (soft-bump images), "uniform" (plain uniform input
  // vectors matching the input width), or a directory of .pgm files.
  std::string data = "synthetic";
  long data_count = 240;
  int data_rows = 16;
  int data_cols = 16;
  std::uint64_t data_seed = 7;
  long train_count = 200;
  std::uint64_t split_seed = 1;

  // "inputs": reconstruct the inputs (autoencoding).  "teacher": regress on
  // outputs of a jittered copy of the initial network.
  std::string targets = "inputs";
  double teacher_jitter = 0.003;
  std::uint64_t teacher_seed = 0;  // 0 derives one from `seed`

  double eta = 0.01;
  double s = 0.5;
  long iterations = 2000;
  std::uint64_t seed = 1;
  std::string optimizer = "adaptive";  // or "fixed" (baseline momentum)
  double beta = 0.9;
  bool early_stop = false;
  double tail_threshold = 1e-4;
  int tail_window = 10;

  std::string out_dir = "out";
};

// Reads a config file; unknown keys are rejected so typos fail loudly.
RunConfig config_from_file(const std::string& path);
RunConfig config_from_kv(const KeyValueFile& kv);

// A run ready to execute: resolved topology, data, targets and options.
struct RunSetup {
  DagTopology topology;
  Activation activation;
  Dataset train_data;
  Dataset test_data;
  std::vector<Vector> inputs;
  std::vector<Vector> targets;
  TrainOptions options;
  // FNV fingerprint of the effective configuration (resolved topology
  // included), stamped into trajectory files.
  std::uint64_t config_hash = 0;
};

// Validates and materializes a config: builds the topology, generates or
// loads the data, splits it, resolves targets, and computes the fingerprint.
// Throws DomainError for inconsistent settings (e.g. reconstruction targets
// with mismatched input/output widths, linear activation without the
// opt-in).
RunSetup prepare_run(const RunConfig& cfg);

// The canonical serialization the fingerprint is computed from: every
// effective field, sorted by key, with the resolved topology's own hash in
// place of any file path.
std::string canonical_config_text(const RunConfig& cfg, const DagTopology& t);

}  // namespace dagnet
