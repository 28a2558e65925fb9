#pragma once

#include <cstdint>
#include <vector>

#include "dagnet/gradients.hpp"
#include "dagnet/network.hpp"

namespace dagnet {

// Gradient descent with norm-adaptive momentum.  The update per edge is
//
//   dv_new = coef * dv_prev - eta * q,
//   coef   = tau * ||q||_F / ||dv_prev||_F   (0 when dv_prev is zero),
//
// with tau = s * eta, s in (0, 1).  The coefficient is evaluated per edge
// matrix, so every edge's momentum term is scaled by its own gradient-to-
// step ratio; by construction ||dv_new|| <= (eta + tau) ||q|| on every edge,
// which is what keeps the method inside the descent regime analysed in
// max_eta().
class OptimizerState {
 public:
  OptimizerState(const DagTopology& t, double eta, double s);

  double eta() const { return eta_; }
  double s() const { return s_; }
  double tau() const { return s_ * eta_; }
  long completed_steps() const { return k_; }

  // Delta v produced by the most recent step (zero before the first one).
  const EdgeMatrices& prev_delta() const { return prev_delta_; }
  // Per-edge ||Delta v||_F^2 of prev_delta, cached by step().
  const std::vector<double>& prev_delta_norm_sq() const {
    return prev_delta_norm_sq_;
  }

  // Applies one update to `w` in place and advances the state.  Throws
  // KeyMismatch / DimensionMismatch when `w` or `q` do not match the
  // topology this state was built for, and NonFiniteUpdate if any updated
  // entry stops being finite.
  void step(WeightSet& w, const GradientSet& q);

 private:
  double eta_;
  double s_;
  long k_ = 0;
  EdgeMatrices prev_delta_;
  std::vector<double> prev_delta_norm_sq_;
};

// The momentum factor for one edge: tau * ||q|| / ||dv_prev||, with the
// zero-history convention.  Norms are passed already extracted so the rule
// itself stays a two-liner shared by code and tests.
double momentum_coefficient(double tau, double q_norm, double prev_delta_norm);

// Largest learning rate covered by the descent guarantee for momentum scale
// s and curvature constant C: (1 - s) / (C * (s^2 + 1)).  Throws DomainError
// unless 0 < s < 1 and C > 0.
double max_eta(double s, double C);

// Classical fixed-coefficient momentum, kept as a labelled comparison
// baseline.  It carries no descent guarantee and is excluded from every
// convergence check.
class FixedMomentumState {
 public:
  FixedMomentumState(const DagTopology& t, double eta, double beta);

  double eta() const { return eta_; }
  double beta() const { return beta_; }
  long completed_steps() const { return k_; }
  const EdgeMatrices& prev_delta() const { return prev_delta_; }
  const std::vector<double>& prev_delta_norm_sq() const {
    return prev_delta_norm_sq_;
  }

  void step(WeightSet& w, const GradientSet& q);

 private:
  double eta_;
  double beta_;
  long k_ = 0;
  EdgeMatrices prev_delta_;
  std::vector<double> prev_delta_norm_sq_;
};

// Per-edge squared Frobenius norms, in canonical edge order.
std::vector<double> per_edge_norm_sq(const EdgeMatrices& m);

}  // namespace dagnet
