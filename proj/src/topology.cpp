#include "dagnet/topology.hpp"

#include <algorithm>

namespace dagnet {

DagTopology::DagTopology(std::vector<int> layer_widths, std::vector<Edge> edges,
                         std::optional<int> code_layer)
    : widths_(std::move(layer_widths)),
      edges_(std::move(edges)),
      code_layer_(code_layer) {
  if (widths_.size() < 2) {
    throw BadTopology("a network needs at least an input and an output layer");
  }
  for (std::size_t i = 0; i < widths_.size(); ++i) {
    if (widths_[i] <= 0) {
      throw BadTopology("layer " + std::to_string(i) + " has non-positive width " +
                        std::to_string(widths_[i]));
    }
  }
  const int L = last_layer();

  std::sort(edges_.begin(), edges_.end());
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
    if (edges_[i] == edges_[i + 1]) {
      throw BadTopology("duplicate edge (" + std::to_string(edges_[i].src) + ", " +
                        std::to_string(edges_[i].dst) + ")");
    }
  }
  for (const Edge& e : edges_) {
    if (e.src < 0 || e.dst > L) {
      throw BadTopology("edge (" + std::to_string(e.src) + ", " +
                        std::to_string(e.dst) + ") is outside layers 0.." +
                        std::to_string(L));
    }
    if (e.src >= e.dst) {
      throw CyclicOrBackwardEdge("edge (" + std::to_string(e.src) + ", " +
                                 std::to_string(e.dst) +
                                 ") does not point to a later layer");
    }
  }

  incoming_.assign(widths_.size(), {});
  outgoing_.assign(widths_.size(), {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    incoming_[static_cast<std::size_t>(edges_[i].dst)].push_back(i);
    outgoing_[static_cast<std::size_t>(edges_[i].src)].push_back(i);
  }
  // edges_ is sorted by (src, dst), so each outgoing list is already ordered
  // by destination; order the incoming lists by source.
  for (auto& list : incoming_) {
    std::sort(list.begin(), list.end(), [this](std::size_t a, std::size_t b) {
      return edges_[a].src < edges_[b].src;
    });
  }

  for (int j = 1; j <= L; ++j) {
    if (incoming(j).empty()) {
      throw DeadLayer("layer " + std::to_string(j) + " has no incoming edge");
    }
  }
  for (int i = 0; i < L; ++i) {
    if (outgoing(i).empty()) {
      throw DeadLayer("layer " + std::to_string(i) + " has no outgoing edge");
    }
  }

  if (code_layer_) {
    const int c = *code_layer_;
    if (c <= 0 || c >= L) {
      throw CodeDimension("code layer " + std::to_string(c) +
                          " must be a hidden layer (1.." + std::to_string(L - 1) +
                          ")");
    }
    if (width(c) >= width(0)) {
      throw CodeDimension("code width " + std::to_string(width(c)) +
                          " does not compress input width " +
                          std::to_string(width(0)));
    }
    for (const Edge& e : edges_) {
      if (e.src < c && e.dst > c) {
        throw CodeCutViolation("edge (" + std::to_string(e.src) + ", " +
                               std::to_string(e.dst) +
                               ") bypasses the code layer " + std::to_string(c));
      }
    }
  }
}

bool DagTopology::has_edge(const Edge& e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::size_t DagTopology::edge_index(const Edge& e) const {
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || !(*it == e)) {
    throw KeyMismatch("edge (" + std::to_string(e.src) + ", " +
                      std::to_string(e.dst) + ") is not in the topology");
  }
  return static_cast<std::size_t>(it - edges_.begin());
}

int DagTopology::fan_in_total(int layer) const {
  int total = 0;
  for (std::size_t idx : incoming(layer)) total += width(edges_[idx].src);
  return total;
}

std::size_t DagTopology::weight_count() const {
  std::size_t total = 0;
  for (const Edge& e : edges_) {
    total += static_cast<std::size_t>(width(e.src)) *
             static_cast<std::size_t>(width(e.dst));
  }
  return total;
}

DagTopology DagTopology::sequential_counterpart() const {
  std::vector<Edge> chain;
  chain.reserve(widths_.size() - 1);
  for (int j = 0; j < last_layer(); ++j) chain.push_back({j, j + 1});
  return DagTopology(widths_, std::move(chain), code_layer_);
}

}  // namespace dagnet
