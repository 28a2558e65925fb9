#include "dagnet/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dagnet {

namespace {

// One slack convention everywhere: absolute 1e-12 plus the same amount
// relative to the left-hand side.
double slack_for(double lhs) { return 1e-12 * (1.0 + std::abs(lhs)); }

void require_per_edge(const IterationRecord& r) {
  if (r.q_norm_sq.empty() || r.dv_norm_sq.empty()) {
    throw InsufficientData(
        "record " + std::to_string(r.k) +
        " carries only totals; per-edge checks need an in-memory trajectory");
  }
}

}  // namespace

double first_order_predictor(const GradientSet& q,
                             const EdgeMatrices& next_delta) {
  q.require_same_keys(next_delta);
  double acc = 0.0;
  for (std::size_t idx = 0; idx < q.count(); ++idx) {
    const Matrix& qm = q.mat(idx);
    const Matrix& dm = next_delta.mat(idx);
    const double* qp = qm.data();
    const double* dp = dm.data();
    for (std::size_t i = 0; i < qm.size(); ++i) acc += qp[i] * dp[i];
  }
  return acc;
}

bool check_descent_inequality(const IterationRecord& r, double eta, double s) {
  const double lhs = r.predictor;
  const double rhs = (s * eta - eta) * r.q_sq_total;
  return lhs <= rhs + slack_for(lhs);
}

bool check_update_bound(const IterationRecord& r, double eta, double s) {
  require_per_edge(r);
  const double factor = eta + s * eta;
  for (std::size_t e = 0; e < r.dv_norm_sq.size(); ++e) {
    const double lhs = std::sqrt(r.dv_norm_sq[e]);
    const double rhs = factor * std::sqrt(r.q_norm_sq[e]);
    if (lhs > rhs + slack_for(lhs)) return false;
  }
  return true;
}

std::vector<CurvatureRatio> curvature_ratios(
    const std::vector<IterationRecord>& records) {
  std::vector<CurvatureRatio> out;
  out.reserve(records.size());
  for (const IterationRecord& r : records) {
    const double num = std::abs(r.error_change - r.predictor);
    const double den = r.dh_sq_total + r.dv_sq_total;
    if (den == 0.0) {
      if (num == 0.0) continue;  // nothing moved, nothing changed
      throw UnboundedRatio("transition " + std::to_string(r.k) +
                           " changed the error without moving any weight or "
                           "layer output");
    }
    out.push_back({r.k, num / den});
  }
  return out;
}

double estimate_C(const std::vector<IterationRecord>& records) {
  const std::vector<CurvatureRatio> ratios = curvature_ratios(records);
  if (ratios.size() < 2) {
    throw InsufficientData("curvature estimation needs at least two "
                           "informative transitions, got " +
                           std::to_string(ratios.size()));
  }
  double sup = 0.0;
  for (const CurvatureRatio& cr : ratios) sup = std::max(sup, cr.ratio);
  return sup;
}

std::vector<double> layer_displacement_ratios(
    const std::vector<IterationRecord>& records, const DagTopology& t,
    double eta, double s) {
  const double factor = eta + s * eta;
  std::vector<double> sup(static_cast<std::size_t>(t.last_layer()) + 1, 0.0);
  for (const IterationRecord& r : records) {
    require_per_edge(r);
    if (r.dh_norm_sq.empty()) {
      throw InsufficientData("record " + std::to_string(r.k) +
                             " has no per-layer displacement data");
    }
    for (int j = 1; j <= t.last_layer(); ++j) {
      double incoming_q = 0.0;
      for (std::size_t idx : t.incoming(j)) {
        incoming_q += std::sqrt(r.q_norm_sq[idx]);
      }
      const double den = factor * incoming_q;
      if (den == 0.0) continue;  // layer can still move via upstream layers
      const double num = std::sqrt(r.dh_norm_sq[static_cast<std::size_t>(j)]);
      sup[static_cast<std::size_t>(j)] =
          std::max(sup[static_cast<std::size_t>(j)], num / den);
    }
  }
  return sup;
}

ConvergenceVerdict verify_theorem(const std::vector<IterationRecord>& records,
                                  double eta, double s,
                                  const VerdictThresholds& thresholds) {
  if (records.empty()) {
    throw InsufficientData("cannot judge an empty trajectory");
  }
  ConvergenceVerdict v;
  v.records_used = static_cast<long>(records.size());

  v.monotone_descent = true;
  for (const IterationRecord& r : records) {
    if (r.error_change > slack_for(r.error)) {
      v.monotone_descent = false;
      v.first_increase = r.k;
      break;
    }
  }

  v.descent_inequality_ok = true;
  for (const IterationRecord& r : records) {
    if (!check_descent_inequality(r, eta, s)) {
      v.descent_inequality_ok = false;
      v.first_inequality_violation = r.k;
      break;
    }
  }

  // Per-edge data when the trajectory is in memory; the summed version (the
  // per-edge bound squared and added up) when only totals survived.
  v.update_bound_ok = true;
  const double factor = eta + s * eta;
  for (const IterationRecord& r : records) {
    bool ok;
    if (!r.dv_norm_sq.empty()) {
      ok = check_update_bound(r, eta, s);
    } else {
      const double lhs = std::sqrt(r.dv_sq_total);
      ok = lhs <= factor * std::sqrt(r.q_sq_total) + slack_for(lhs);
    }
    if (!ok) {
      v.update_bound_ok = false;
      v.first_update_bound_violation = r.k;
      break;
    }
  }

  const std::size_t n = records.size();
  const std::size_t window =
      std::min<std::size_t>(n, static_cast<std::size_t>(
                                   std::max(1, thresholds.tail_window)));
  double tail_max = 0.0;
  for (std::size_t i = n - window; i < n; ++i) {
    tail_max = std::max(tail_max, std::sqrt(records[i].q_sq_total));
  }
  v.tail_max_grad_norm = tail_max;
  v.tail_ok = tail_max < thresholds.tail_threshold;

  try {
    v.estimated_C = estimate_C(records);
    v.curvature_estimated = true;
  } catch (const Error&) {
    v.estimated_C = 0.0;
    v.curvature_estimated = false;
  }
  if (v.curvature_estimated) {
    if (v.estimated_C > 0.0) {
      v.max_eta_for_C = max_eta(s, v.estimated_C);
    } else {
      v.max_eta_for_C = std::numeric_limits<double>::infinity();
    }
    v.eta_within_bound = eta < v.max_eta_for_C;
  }

  v.final_error = records.back().error + records.back().error_change;
  return v;
}

}  // namespace dagnet
