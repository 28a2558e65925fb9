#pragma once

#include <vector>

#include "dagnet/network.hpp"

namespace dagnet {

// Error gradient dE/dV, one matrix per edge in canonical order, plus the
// per-layer adjoint vectors of the most recent single-sample pass (useful
// for inspecting the recursion; batch sums leave them empty).
struct GradientSet : EdgeMatrices {
  using EdgeMatrices::EdgeMatrices;

  // adjoints[j] = delta_j = dE/dS_j for layers 1..L; adjoints[0] stays empty.
  std::vector<Vector> adjoints;
};

// Adjoint (reverse) pass for one sample, given its forward trace:
//   delta_L = g'(S_L) * (y - d)            (elementwise)
//   delta_j = g'(S_j) * sum over outgoing edges (j, n) of V_(j,n) delta_n
//   q_(i,j) = H_i delta_j^T                (outer product)
// Outgoing edges are visited in ascending destination order, so the
// accumulation order is fixed.  Throws TraceMismatch when the trace does not
// fit the topology and DimensionMismatch for a wrong target length.
GradientSet backward(const DagTopology& t, const WeightSet& w,
                     const Activation& act, const ForwardTrace& trace,
                     const Vector& target);

// Like backward(), but adds this sample's contribution into `into` (which
// must match the topology) instead of allocating; adjoint vectors are not
// stored.  This is the train-loop workhorse.
void backward_accumulate(const DagTopology& t, const WeightSet& w,
                         const Activation& act, const ForwardTrace& trace,
                         const Vector& target, GradientSet& into);

// Batch gradient: the per-sample gradients summed in sample order.
GradientSet batch_gradients(const DagTopology& t, const WeightSet& w,
                            const Activation& act,
                            const std::vector<Vector>& inputs,
                            const std::vector<Vector>& targets);

// Independent check oracle: central finite differences of batch_error with
// step h, one entry at a time.  O(weight_count * samples) forward passes, so
// it refuses networks above `max_weights` entries with
// TooLargeForFiniteDifference.
GradientSet finite_difference_gradients(const DagTopology& t, const WeightSet& w,
                                        const Activation& act,
                                        const std::vector<Vector>& inputs,
                                        const std::vector<Vector>& targets,
                                        double h = 1e-6,
                                        std::size_t max_weights = 10000);

// Sum over edges of ||q_(i,j)||_F^2.
double gradient_norm_sq(const GradientSet& g);

// Largest per-edge relative difference max_e ||a_e - b_e||_F / ||b_e||_F,
// with the denominator floored at `floor` so exactly-zero reference blocks
// compare by absolute size.
double max_relative_error(const EdgeMatrices& a, const EdgeMatrices& b,
                          double floor = 1e-10);

}  // namespace dagnet
