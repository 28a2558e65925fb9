#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dagnet/common.hpp"

namespace dagnet {

// Directed connection from layer `src` to layer `dst`.  `dst > src` always;
// `dst > src + 1` is a skip connection.
struct Edge {
  int src = 0;
  int dst = 0;
  auto operator<=>(const Edge&) const = default;
};

// Layered DAG architecture: layers 0..L with fixed widths, plus an explicit
// edge set.  Layer 0 is the input, layer L the output; every edge points
// forward.  An optional code layer marks the bottleneck of a compression
// model; when present, no edge may jump across it, so the code is a cut of
// the graph and the strict encode/decode split is well defined.
//
// Construction validates everything once; instances are immutable afterwards,
// and the edge list is kept sorted by (src, dst) so that iteration order --
// and therefore every accumulation in the library -- is canonical.
class DagTopology {
 public:
  DagTopology(std::vector<int> layer_widths, std::vector<Edge> edges,
              std::optional<int> code_layer = std::nullopt);

  int num_layers() const { return static_cast<int>(widths_.size()); }
  // Index of the output layer (layers run 0..last_layer()).
  int last_layer() const { return static_cast<int>(widths_.size()) - 1; }
  const std::vector<int>& layer_widths() const { return widths_; }
  int width(int layer) const { return widths_[static_cast<std::size_t>(layer)]; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::optional<int> code_layer() const { return code_layer_; }

  // Indices into edges() of the edges ending at / starting from a layer,
  // each sorted by the far endpoint.
  const std::vector<std::size_t>& incoming(int layer) const {
    return incoming_[static_cast<std::size_t>(layer)];
  }
  const std::vector<std::size_t>& outgoing(int layer) const {
    return outgoing_[static_cast<std::size_t>(layer)];
  }

  bool has_edge(const Edge& e) const;
  // Position of an edge in edges(); throws KeyMismatch if absent.
  std::size_t edge_index(const Edge& e) const;

  // Sum of source widths over all edges ending at `layer` (the full fan-in,
  // counting skip connections), used to scale weight initialization.
  int fan_in_total(int layer) const;

  // Total number of scalar weights across all edge matrices.
  std::size_t weight_count() const;

  // Same layer widths and code layer, but only the chain edges (j, j+1):
  // the skip-free architecture used as a comparison baseline.
  DagTopology sequential_counterpart() const;

 private:
  std::vector<int> widths_;
  std::vector<Edge> edges_;
  std::optional<int> code_layer_;
  std::vector<std::vector<std::size_t>> incoming_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

}  // namespace dagnet
