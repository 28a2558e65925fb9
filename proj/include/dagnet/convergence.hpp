#pragma once

#include <vector>

#include "dagnet/gradients.hpp"
#include "dagnet/optimizer.hpp"
#include "dagnet/topology.hpp"

namespace dagnet {

// Everything measured about one optimizer transition v^k -> v^{k+1}.  The
// record at index k holds the error and gradient evaluated at v^k, the
// update produced by step k, and the observed consequences of that update
// (error change, layer-output displacement).  Filling error_change and the
// displacement needs the forward pass at v^{k+1}, so the trainer completes
// record k while working on step k+1 (and runs one extra forward after the
// last step).
struct IterationRecord {
  long k = 0;
  // E^k: total error at v^k.
  double error = 0.0;
  // Per-edge ||q^k||_F^2 (canonical edge order); empty when parsed from a
  // trajectory file, which stores only totals.
  std::vector<double> q_norm_sq;
  // Per-edge ||Delta v^{k+1}||_F^2: the update this step produced.
  std::vector<double> dv_norm_sq;
  // Per-layer (index 1..L; entry 0 unused) displacement
  // sum over samples of ||H_j(v^{k+1}) - H_j(v^k)||^2.
  std::vector<double> dh_norm_sq;
  // Totals of the three vectors above; always present.
  double q_sq_total = 0.0;
  double dv_sq_total = 0.0;
  double dh_sq_total = 0.0;
  // Q^k: first-order prediction of the error change, <q^k, Delta v^{k+1}>.
  double predictor = 0.0;
  // dE = E^{k+1} - E^k, the realized change.
  double error_change = 0.0;
  // Largest |weight| after the step, a cheap health indicator.
  double max_abs_weight = 0.0;
};

// <q, dv> summed over edges in canonical order: the first-order Taylor
// prediction of the error change caused by applying `next_delta`.
double first_order_predictor(const GradientSet& q,
                             const EdgeMatrices& next_delta);

// The guaranteed-descent inequality for one transition:
//   Q^k <= (tau - eta) * sum_e ||q^k||^2,   tau = s * eta,
// checked with slack 1e-12 * (1 + |Q^k|).  A violation beyond slack means
// the update rule was not applied correctly, so this doubles as a cheap
// invariant check on every recorded step.
bool check_descent_inequality(const IterationRecord& r, double eta, double s);

// Per-edge companion bound ||Delta v^{k+1}|| <= (eta + tau) ||q^k||, which
// the update rule satisfies exactly by construction (Cauchy-Schwarz turns
// the momentum term into at most tau * ||q||).  Requires per-edge data.
bool check_update_bound(const IterationRecord& r, double eta, double s);

// Second-order mismatch ratio of one transition:
//   |error_change - Q^k| / (dh_sq_total + dv_sq_total),
// i.e. the empirical curvature constant the Taylor-remainder bound needs.
// Transitions with a zero denominator and zero numerator carry no
// information and are skipped by the aggregators below.
struct CurvatureRatio {
  long k;
  double ratio;
};
std::vector<CurvatureRatio> curvature_ratios(
    const std::vector<IterationRecord>& records);

// Smallest constant C that makes the Taylor-remainder bound hold over the
// whole trajectory: the supremum of curvature_ratios.  Throws
// InsufficientData when fewer than two transitions carry information and
// UnboundedRatio when some transition changed the error without moving any
// weight or layer output.
double estimate_C(const std::vector<IterationRecord>& records);

// Per-layer empirical constant in the displacement bound
//   ||dH_j|| <= C' * (eta + tau) * sum over incoming edges ||q||:
// returns, for each layer 1..L (index 0 unused), the supremum over
// transitions of the measured ratio.  Layers whose ratio never got a
// nonzero denominator report 0.
std::vector<double> layer_displacement_ratios(
    const std::vector<IterationRecord>& records, const DagTopology& t,
    double eta, double s);

struct VerdictThresholds {
  // The gradient-norm level the tail of the run must stay under.
  double tail_threshold = 1e-4;
  // How many final records form the tail.
  int tail_window = 10;
};

// Aggregate judgement over a recorded trajectory.  Monotone descent and the
// gradient tail decide converged(); the remaining fields report how the run
// relates to the descent guarantee (inequality violations, estimated
// curvature, whether the learning rate sat inside the guaranteed range).
struct ConvergenceVerdict {
  long records_used = 0;
  bool monotone_descent = false;
  long first_increase = -1;
  bool descent_inequality_ok = false;
  long first_inequality_violation = -1;
  bool update_bound_ok = false;
  long first_update_bound_violation = -1;
  double tail_max_grad_norm = 0.0;
  bool tail_ok = false;
  double estimated_C = 0.0;
  bool curvature_estimated = false;
  double max_eta_for_C = 0.0;
  bool eta_within_bound = false;
  double final_error = 0.0;

  bool converged() const { return monotone_descent && tail_ok; }
};

// Runs every check above over a trajectory.  Throws InsufficientData for an
// empty trajectory; curvature estimation failures are folded into the
// verdict (curvature_estimated = false) rather than thrown, because a
// perfectly linear run is a legitimate outcome.
ConvergenceVerdict verify_theorem(const std::vector<IterationRecord>& records,
                                  double eta, double s,
                                  const VerdictThresholds& thresholds = {});

}  // namespace dagnet
