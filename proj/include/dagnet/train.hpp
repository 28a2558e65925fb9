#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dagnet/convergence.hpp"
#include "dagnet/gradients.hpp"
#include "dagnet/network.hpp"
#include "dagnet/optimizer.hpp"

namespace dagnet {

struct TrainOptions {
  double eta = 1e-2;
  // Momentum scale in (0, 1); tau = s * eta.
  double s = 0.5;
  long iterations = 1000;
  // Seeds the weight initialization (unless initial_weights overrides it).
  std::uint64_t seed = 1;
  double init_gain = 1.0;

  enum class Method { Adaptive, FixedMomentum };
  Method method = Method::Adaptive;
  // Only used by the fixed-momentum baseline.
  double beta = 0.9;

  // When set, stop once every gradient norm in the trailing window sits
  // under the threshold; otherwise run the full budget.
  bool early_stop = false;
  VerdictThresholds thresholds{};

  // Start from these weights instead of a fresh initialization.
  std::optional<WeightSet> initial_weights;
};

struct TrainResult {
  WeightSet weights;
  std::vector<IterationRecord> trajectory;
  long iterations_run = 0;
  bool stopped_early = false;
  // Error at the final weights (one forward pass past the last step).
  double final_error = 0.0;
};

// Full-batch training with complete per-transition records.  Each iteration
// runs one forward sweep over all samples and one backward sweep; the
// forward sweep doing double duty — it finishes the previous record (realized
// error change and layer displacement need the new outputs) before its
// gradients drive the next step.  One extra forward sweep after the loop
// completes the last record.  Sample order, edge order and accumulation
// order are all fixed, so a given topology + data + options reproduces the
// trajectory exactly.
TrainResult train(const DagTopology& t, const Activation& act,
                  const std::vector<Vector>& inputs,
                  const std::vector<Vector>& targets,
                  const TrainOptions& opts);

// Targets produced by a "teacher" network: a copy of `base` with every
// weight independently shifted by uniform(-jitter, jitter), evaluated on the
// inputs.  Training toward a teacher near the starting point keeps the
// problem inside the reach of plain gradient descent, which makes it the
// standard setup for exercising the convergence guarantees end to end.
std::vector<Vector> teacher_targets(const DagTopology& t, const Activation& act,
                                    const WeightSet& base,
                                    const std::vector<Vector>& inputs,
                                    double jitter, std::uint64_t seed);

}  // namespace dagnet
