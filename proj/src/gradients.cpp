#include "dagnet/gradients.hpp"

#include <cmath>
#include <string>

namespace dagnet {

namespace {

void check_trace(const DagTopology& t, const ForwardTrace& trace) {
  const std::size_t layers = static_cast<std::size_t>(t.last_layer()) + 1;
  if (trace.pre.size() != layers || trace.out.size() != layers) {
    throw TraceMismatch("trace layer count does not match the topology");
  }
  for (std::size_t j = 0; j < layers; ++j) {
    const std::size_t lj = static_cast<std::size_t>(t.width(static_cast<int>(j)));
    if (trace.out[j].size() != lj || (j > 0 && trace.pre[j].size() != lj)) {
      throw TraceMismatch("trace layer " + std::to_string(j) +
                          " does not match the layer width");
    }
  }
}

// Core recursion shared by the allocating and accumulating entry points.
// `deltas` is resized and overwritten; gradients are added into `into`.
void run_backward(const DagTopology& t, const WeightSet& w,
                  const Activation& act, const ForwardTrace& trace,
                  const Vector& target, GradientSet& into,
                  std::vector<Vector>& deltas) {
  const int L = t.last_layer();
  deltas.assign(static_cast<std::size_t>(L) + 1, Vector{});

  {
    const Vector& y = trace.output();
    if (target.size() != y.size()) {
      throw DimensionMismatch("target has " + std::to_string(target.size()) +
                              " entries, output has " +
                              std::to_string(y.size()));
    }
    Vector& d = deltas[static_cast<std::size_t>(L)];
    const Vector& s = trace.pre[static_cast<std::size_t>(L)];
    d.resize(y.size());
    for (std::size_t b = 0; b < y.size(); ++b) {
      d[b] = act.derivative(s[b]) * (y[b] - target[b]);
    }
  }

  for (int j = L - 1; j >= 1; --j) {
    Vector& d = deltas[static_cast<std::size_t>(j)];
    d.assign(static_cast<std::size_t>(t.width(j)), 0.0);
    for (std::size_t idx : t.outgoing(j)) {
      const Matrix& v = w.mat(idx);
      const Vector& dn = deltas[static_cast<std::size_t>(t.edges()[idx].dst)];
      for (std::size_t a = 0; a < v.rows(); ++a) {
        const double* row = v.row(a);
        double acc = 0.0;
        for (std::size_t b = 0; b < v.cols(); ++b) acc += row[b] * dn[b];
        d[a] += acc;
      }
    }
    const Vector& s = trace.pre[static_cast<std::size_t>(j)];
    for (std::size_t a = 0; a < d.size(); ++a) d[a] *= act.derivative(s[a]);
  }

  for (std::size_t idx = 0; idx < into.count(); ++idx) {
    const Edge& e = t.edges()[idx];
    const Vector& h = trace.out[static_cast<std::size_t>(e.src)];
    const Vector& d = deltas[static_cast<std::size_t>(e.dst)];
    Matrix& q = into.mat(idx);
    for (std::size_t a = 0; a < q.rows(); ++a) {
      const double ha = h[a];
      double* row = q.row(a);
      for (std::size_t b = 0; b < q.cols(); ++b) row[b] += ha * d[b];
    }
  }
}

}  // namespace

GradientSet backward(const DagTopology& t, const WeightSet& w,
                     const Activation& act, const ForwardTrace& trace,
                     const Vector& target) {
  w.require_matches(t);
  check_trace(t, trace);
  GradientSet g(t);
  run_backward(t, w, act, trace, target, g, g.adjoints);
  return g;
}

void backward_accumulate(const DagTopology& t, const WeightSet& w,
                         const Activation& act, const ForwardTrace& trace,
                         const Vector& target, GradientSet& into) {
  w.require_matches(t);
  into.require_matches(t);
  check_trace(t, trace);
  std::vector<Vector> deltas;
  run_backward(t, w, act, trace, target, into, deltas);
}

GradientSet batch_gradients(const DagTopology& t, const WeightSet& w,
                            const Activation& act,
                            const std::vector<Vector>& inputs,
                            const std::vector<Vector>& targets) {
  if (inputs.size() != targets.size()) {
    throw DimensionMismatch("sample count differs between inputs and targets");
  }
  w.require_matches(t);
  GradientSet g(t);
  std::vector<Vector> deltas;
  for (std::size_t p = 0; p < inputs.size(); ++p) {
    const ForwardTrace trace = forward(t, w, act, inputs[p]);
    run_backward(t, w, act, trace, targets[p], g, deltas);
  }
  return g;
}

GradientSet finite_difference_gradients(const DagTopology& t, const WeightSet& w,
                                        const Activation& act,
                                        const std::vector<Vector>& inputs,
                                        const std::vector<Vector>& targets,
                                        double h, std::size_t max_weights) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw DomainError("finite-difference step must be positive and finite");
  }
  if (t.weight_count() > max_weights) {
    throw TooLargeForFiniteDifference(
        "network has " + std::to_string(t.weight_count()) +
        " weights, finite differences allow " + std::to_string(max_weights));
  }
  w.require_matches(t);

  WeightSet probe = w;
  GradientSet g(t);
  for (std::size_t idx = 0; idx < g.count(); ++idx) {
    Matrix& pm = probe.mat(idx);
    Matrix& gm = g.mat(idx);
    for (std::size_t k = 0; k < pm.size(); ++k) {
      const double saved = pm.data()[k];
      pm.data()[k] = saved + h;
      const double plus = batch_error(t, probe, act, inputs, targets);
      pm.data()[k] = saved - h;
      const double minus = batch_error(t, probe, act, inputs, targets);
      pm.data()[k] = saved;
      gm.data()[k] = (plus - minus) / (2.0 * h);
    }
  }
  return g;
}

double gradient_norm_sq(const GradientSet& g) { return g.total_norm_sq(); }

double max_relative_error(const EdgeMatrices& a, const EdgeMatrices& b,
                          double floor) {
  a.require_same_keys(b);
  double worst = 0.0;
  for (std::size_t idx = 0; idx < a.count(); ++idx) {
    const Matrix& am = a.mat(idx);
    const Matrix& bm = b.mat(idx);
    double diff_sq = 0.0;
    for (std::size_t k = 0; k < am.size(); ++k) {
      const double d = am.data()[k] - bm.data()[k];
      diff_sq += d * d;
    }
    const double denom = std::max(frobenius(bm), floor);
    worst = std::max(worst, std::sqrt(diff_sq) / denom);
  }
  return worst;
}

}  // namespace dagnet
