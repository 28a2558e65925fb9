#pragma once

#include <cstdint>
#include <vector>

#include "dagnet/activation.hpp"
#include "dagnet/common.hpp"
#include "dagnet/topology.hpp"

namespace dagnet {

// One matrix per topology edge, stored in the topology's canonical edge
// order.  The edge (i, j) carries an l_i x l_j matrix: row a holds the
// weights leaving unit a of layer i.  Weights and gradients share this
// structure.
class EdgeMatrices {
 public:
  EdgeMatrices() = default;
  explicit EdgeMatrices(const DagTopology& t);

  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t count() const { return mats_.size(); }

  Matrix& mat(std::size_t edge_index) { return mats_[edge_index]; }
  const Matrix& mat(std::size_t edge_index) const { return mats_[edge_index]; }

  // Lookup by edge key; throws KeyMismatch if the edge is absent.
  Matrix& at(const Edge& e);
  const Matrix& at(const Edge& e) const;

  // True when the other container has the same edges with the same shapes.
  bool same_keys(const EdgeMatrices& other) const;
  // Throws KeyMismatch / DimensionMismatch describing the first difference.
  void require_same_keys(const EdgeMatrices& other) const;
  // Checks this container matches the topology's edges and layer widths.
  void require_matches(const DagTopology& t) const;

  double max_abs_entry() const;
  // Sum over edges of the squared Frobenius norm.
  double total_norm_sq() const;

  bool operator==(const EdgeMatrices& other) const {
    return edges_ == other.edges_ && mats_ == other.mats_;
  }

 protected:
  std::vector<Edge> edges_;
  std::vector<Matrix> mats_;
};

class WeightSet : public EdgeMatrices {
 public:
  using EdgeMatrices::EdgeMatrices;
};

// All intermediate state of one forward evaluation: pre[j] is the summed
// input S_j of layer j (empty for the input layer), out[j] the activation
// H_j.  Kept because the backward pass and the convergence diagnostics both
// re-read it.
struct ForwardTrace {
  std::vector<Vector> pre;
  std::vector<Vector> out;

  const Vector& output() const { return out.back(); }
};

// Evaluate the network on one input vector.  Each layer j >= 1 accumulates
// S_j = sum over incoming edges (i, j) of H_i * V_(i,j), edges taken in
// ascending source order and each product accumulated row by row, so the
// floating-point result is reproducible exactly.  Throws DimensionMismatch
// for a wrong input length, NonFiniteInput for non-finite input entries and
// NonFiniteValue if an accumulated S_j overflows.
ForwardTrace forward(const DagTopology& t, const WeightSet& w,
                     const Activation& act, const Vector& x);

// The layer loop of forward() for layers first..last, writing into a trace
// whose needed earlier outputs are already present.  Exposed so that the
// encode and decode halves of a compression model run the exact same
// arithmetic as the full pass — equality is then bitwise, not approximate.
// No argument validation; callers vet dimensions first.
void forward_range(const DagTopology& t, const WeightSet& w,
                   const Activation& act, ForwardTrace& trace, int first,
                   int last);

// Squared-residual error of one trace against its target: ||d - y||^2 / 2.
double sample_error(const ForwardTrace& trace, const Vector& target);

// Total error over a sample set: sum_p ||d_p - y_p||^2 / 2, accumulated in
// sample order.
double batch_error(const DagTopology& t, const WeightSet& w,
                   const Activation& act, const std::vector<Vector>& inputs,
                   const std::vector<Vector>& targets);

// Fresh weights with every entry uniform on (-a, a), where
// a = gain * sqrt(3 / fan_in_total(dst)); entries are drawn edge by edge in
// canonical order, row-major within each matrix, so a seed fixes the weights
// exactly.
WeightSet init_random(const DagTopology& t, std::uint64_t seed,
                      double gain = 1.0);

}  // namespace dagnet
