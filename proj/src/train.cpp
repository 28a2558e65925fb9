#include "dagnet/train.hpp"

#include <cmath>
#include <utility>

namespace dagnet {

namespace {

double sum_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

// Completes record r with what only the next forward sweep can tell:
// the realized error change and the per-layer output displacement.
void finalize_record(IterationRecord& r, double next_error,
                     const std::vector<ForwardTrace>& prev,
                     const std::vector<ForwardTrace>& cur, int layers) {
  r.error_change = next_error - r.error;
  r.dh_norm_sq.assign(static_cast<std::size_t>(layers) + 1, 0.0);
  for (std::size_t p = 0; p < cur.size(); ++p) {
    for (int j = 1; j <= layers; ++j) {
      const Vector& a = prev[p].out[static_cast<std::size_t>(j)];
      const Vector& b = cur[p].out[static_cast<std::size_t>(j)];
      double acc = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = b[i] - a[i];
        acc += d * d;
      }
      r.dh_norm_sq[static_cast<std::size_t>(j)] += acc;
    }
  }
  r.dh_sq_total = sum_of(r.dh_norm_sq);
}

}  // namespace

TrainResult train(const DagTopology& t, const Activation& act,
                  const std::vector<Vector>& inputs,
                  const std::vector<Vector>& targets,
                  const TrainOptions& opts) {
  if (inputs.empty()) throw DomainError("training needs at least one sample");
  if (inputs.size() != targets.size()) {
    throw DimensionMismatch("sample count differs between inputs and targets");
  }
  if (opts.iterations < 1) {
    throw DomainError("iteration budget must be at least 1");
  }

  WeightSet w = opts.initial_weights
                    ? *opts.initial_weights
                    : init_random(t, opts.seed, opts.init_gain);
  w.require_matches(t);

  std::optional<OptimizerState> adaptive;
  std::optional<FixedMomentumState> fixed;
  if (opts.method == TrainOptions::Method::Adaptive) {
    adaptive.emplace(t, opts.eta, opts.s);
  } else {
    fixed.emplace(t, opts.eta, opts.beta);
  }

  const int L = t.last_layer();
  const std::size_t P = inputs.size();
  std::vector<ForwardTrace> cur(P), prev(P);

  TrainResult result;
  result.trajectory.reserve(static_cast<std::size_t>(opts.iterations));

  GradientSet q(t);
  const std::size_t window = static_cast<std::size_t>(
      std::max(1, opts.thresholds.tail_window));

  for (long k = 0; k < opts.iterations; ++k) {
    double error = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      cur[p] = forward(t, w, act, inputs[p]);
      error += sample_error(cur[p], targets[p]);
    }
    if (k > 0) {
      finalize_record(result.trajectory.back(), error, prev, cur, L);
    }
    result.final_error = error;

    if (opts.early_stop && result.trajectory.size() >= window) {
      bool quiet = true;
      for (std::size_t i = result.trajectory.size() - window;
           i < result.trajectory.size(); ++i) {
        if (std::sqrt(result.trajectory[i].q_sq_total) >=
            opts.thresholds.tail_threshold) {
          quiet = false;
          break;
        }
      }
      if (quiet) {
        result.stopped_early = true;
        break;
      }
    }

    // Backward sweep reusing the traces just computed.
    q = GradientSet(t);
    for (std::size_t p = 0; p < P; ++p) {
      backward_accumulate(t, w, act, cur[p], targets[p], q);
    }

    IterationRecord rec;
    rec.k = k;
    rec.error = error;
    rec.q_norm_sq = per_edge_norm_sq(q);
    rec.q_sq_total = sum_of(rec.q_norm_sq);

    const EdgeMatrices* delta = nullptr;
    if (adaptive) {
      adaptive->step(w, q);
      rec.dv_norm_sq = adaptive->prev_delta_norm_sq();
      delta = &adaptive->prev_delta();
    } else {
      fixed->step(w, q);
      rec.dv_norm_sq = fixed->prev_delta_norm_sq();
      delta = &fixed->prev_delta();
    }
    rec.dv_sq_total = sum_of(rec.dv_norm_sq);
    rec.predictor = first_order_predictor(q, *delta);
    rec.max_abs_weight = w.max_abs_entry();
    result.trajectory.push_back(std::move(rec));

    std::swap(prev, cur);
  }

  // A completed budget leaves the last record waiting for one more sweep.
  if (!result.stopped_early && !result.trajectory.empty()) {
    double error = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      cur[p] = forward(t, w, act, inputs[p]);
      error += sample_error(cur[p], targets[p]);
    }
    finalize_record(result.trajectory.back(), error, prev, cur, L);
    result.final_error = error;
  }

  result.weights = std::move(w);
  result.iterations_run = static_cast<long>(result.trajectory.size());
  return result;
}

std::vector<Vector> teacher_targets(const DagTopology& t, const Activation& act,
                                    const WeightSet& base,
                                    const std::vector<Vector>& inputs,
                                    double jitter, std::uint64_t seed) {
  if (!(jitter >= 0.0) || !std::isfinite(jitter)) {
    throw DomainError("teacher jitter must be non-negative and finite");
  }
  WeightSet teacher = base;
  teacher.require_matches(t);
  Rng rng(seed);
  for (std::size_t idx = 0; idx < teacher.count(); ++idx) {
    Matrix& m = teacher.mat(idx);
    for (std::size_t i = 0; i < m.size(); ++i) {
      m.data()[i] += rng.uniform(-jitter, jitter);
    }
  }
  std::vector<Vector> targets;
  targets.reserve(inputs.size());
  for (const Vector& x : inputs) {
    targets.push_back(forward(t, teacher, act, x).output());
  }
  return targets;
}

}  // namespace dagnet
