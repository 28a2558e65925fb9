#pragma once

#include <vector>

#include "dagnet/network.hpp"

namespace dagnet {

// A trained (or in-training) compression network: a topology with a declared
// code layer, its weights, and the activation it runs under.  The code layer
// being a cut of the graph (enforced at topology construction) is what lets
// the network split into an encoder half (input .. code) and a decoder half
// (code .. output) with no information bypassing the bottleneck.
struct CompressionModel {
  DagTopology topology;
  WeightSet weights;
  Activation activation;

  // Throws DomainError when the topology has no code layer and the usual
  // KeyMismatch / DimensionMismatch when the weights do not fit.
  CompressionModel(DagTopology t, WeightSet w, Activation act);

  int code_layer() const { return *topology.code_layer(); }
  int code_width() const { return topology.width(code_layer()); }
};

// Runs the encoder half: layers 1..code on input x, returning H_code.
Vector encode(const CompressionModel& m, const Vector& x);

// Runs the decoder half: layers code+1..L starting from a code vector.
// decode(m, encode(m, x)) equals the full forward pass output bit for bit,
// because both halves execute the same layer loop the full pass uses.
Vector decode(const CompressionModel& m, const Vector& code);

// Total reconstruction error sum_p ||x_p - decode(encode(x_p))||^2 / 2.
double reconstruction_error(const CompressionModel& m,
                            const std::vector<Vector>& samples);

// The skip-connected compression architecture used throughout: given layer
// widths and the code position, connects every ordered layer pair within the
// encoder block (0..code) and every pair within the decoder block
// (code..L).  Chain edges, plus every intra-block skip; never across the
// code.
DagTopology crossencoder_topology(const std::vector<int>& widths,
                                  int code_layer);

}  // namespace dagnet
