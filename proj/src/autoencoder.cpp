#include "dagnet/autoencoder.hpp"

#include <cmath>
#include <string>

namespace dagnet {

CompressionModel::CompressionModel(DagTopology t, WeightSet w, Activation act)
    : topology(std::move(t)), weights(std::move(w)), activation(act) {
  if (!topology.code_layer()) {
    throw DomainError("compression model needs a topology with a code layer");
  }
  weights.require_matches(topology);
}

namespace {

ForwardTrace empty_trace(const DagTopology& t) {
  ForwardTrace trace;
  trace.pre.resize(static_cast<std::size_t>(t.last_layer()) + 1);
  trace.out.resize(static_cast<std::size_t>(t.last_layer()) + 1);
  return trace;
}

void check_vector(const Vector& v, std::size_t want, const char* what) {
  if (v.size() != want) {
    throw DimensionMismatch(std::string(what) + " has " +
                            std::to_string(v.size()) + " entries, expected " +
                            std::to_string(want));
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw NonFiniteInput(std::string("non-finite ") + what);
    }
  }
}

}  // namespace

Vector encode(const CompressionModel& m, const Vector& x) {
  check_vector(x, static_cast<std::size_t>(m.topology.width(0)), "input");
  ForwardTrace trace = empty_trace(m.topology);
  trace.out[0] = x;
  forward_range(m.topology, m.weights, m.activation, trace, 1, m.code_layer());
  return trace.out[static_cast<std::size_t>(m.code_layer())];
}

Vector decode(const CompressionModel& m, const Vector& code) {
  check_vector(code, static_cast<std::size_t>(m.code_width()), "code");
  ForwardTrace trace = empty_trace(m.topology);
  // Thanks to the cut property every edge feeding layers code+1..L starts at
  // the code layer or later, so seeding H_code is enough.
  trace.out[static_cast<std::size_t>(m.code_layer())] = code;
  forward_range(m.topology, m.weights, m.activation, trace, m.code_layer() + 1,
                m.topology.last_layer());
  return trace.out.back();
}

double reconstruction_error(const CompressionModel& m,
                            const std::vector<Vector>& samples) {
  double acc = 0.0;
  for (const Vector& x : samples) {
    const Vector y = decode(m, encode(m, x));
    check_vector(x, y.size(), "sample");
    double sample = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double r = x[i] - y[i];
      sample += r * r;
    }
    acc += sample / 2.0;
  }
  return acc;
}

DagTopology crossencoder_topology(const std::vector<int>& widths,
                                  int code_layer) {
  const int L = static_cast<int>(widths.size()) - 1;
  if (code_layer <= 0 || code_layer >= L) {
    throw CodeDimension("code layer " + std::to_string(code_layer) +
                        " must be a hidden layer");
  }
  std::vector<Edge> edges;
  for (int i = 0; i <= code_layer; ++i) {
    for (int j = i + 1; j <= code_layer; ++j) edges.push_back({i, j});
  }
  for (int i = code_layer; i <= L; ++i) {
    for (int j = i + 1; j <= L; ++j) edges.push_back({i, j});
  }
  return DagTopology(widths, std::move(edges), code_layer);
}

}  // namespace dagnet
