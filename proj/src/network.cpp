#include "dagnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dagnet {

namespace {

std::string edge_name(const Edge& e) {
  return "(" + std::to_string(e.src) + ", " + std::to_string(e.dst) + ")";
}

}  // namespace

EdgeMatrices::EdgeMatrices(const DagTopology& t) : edges_(t.edges()) {
  mats_.reserve(edges_.size());
  for (const Edge& e : edges_) {
    mats_.emplace_back(static_cast<std::size_t>(t.width(e.src)),
                       static_cast<std::size_t>(t.width(e.dst)));
  }
}

Matrix& EdgeMatrices::at(const Edge& e) {
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || !(*it == e)) {
    throw KeyMismatch("no matrix for edge " + edge_name(e));
  }
  return mats_[static_cast<std::size_t>(it - edges_.begin())];
}

const Matrix& EdgeMatrices::at(const Edge& e) const {
  return const_cast<EdgeMatrices*>(this)->at(e);
}

bool EdgeMatrices::same_keys(const EdgeMatrices& other) const {
  if (edges_ != other.edges_) return false;
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    if (!mats_[i].same_shape(other.mats_[i])) return false;
  }
  return true;
}

void EdgeMatrices::require_same_keys(const EdgeMatrices& other) const {
  if (edges_ != other.edges_) {
    throw KeyMismatch("edge sets differ between matrix containers");
  }
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    if (!mats_[i].same_shape(other.mats_[i])) {
      throw DimensionMismatch("matrix shapes differ on edge " +
                              edge_name(edges_[i]));
    }
  }
}

void EdgeMatrices::require_matches(const DagTopology& t) const {
  if (edges_ != t.edges()) {
    throw KeyMismatch("matrix container does not cover the topology's edges");
  }
  for (std::size_t i = 0; i < mats_.size(); ++i) {
    const Edge& e = edges_[i];
    if (mats_[i].rows() != static_cast<std::size_t>(t.width(e.src)) ||
        mats_[i].cols() != static_cast<std::size_t>(t.width(e.dst))) {
      throw DimensionMismatch("matrix on edge " + edge_name(e) +
                              " does not match the layer widths");
    }
  }
}

double EdgeMatrices::max_abs_entry() const {
  double acc = 0.0;
  for (const Matrix& m : mats_) acc = std::max(acc, max_abs(m));
  return acc;
}

double EdgeMatrices::total_norm_sq() const {
  double acc = 0.0;
  for (const Matrix& m : mats_) acc += frobenius_sq(m);
  return acc;
}

void forward_range(const DagTopology& t, const WeightSet& w,
                   const Activation& act, ForwardTrace& trace, int first,
                   int last) {
  for (int j = first; j <= last; ++j) {
    Vector& s = trace.pre[static_cast<std::size_t>(j)];
    s.assign(static_cast<std::size_t>(t.width(j)), 0.0);
    for (std::size_t idx : t.incoming(j)) {
      const Matrix& v = w.mat(idx);
      const Vector& h = trace.out[static_cast<std::size_t>(t.edges()[idx].src)];
      for (std::size_t a = 0; a < v.rows(); ++a) {
        const double ha = h[a];
        const double* row = v.row(a);
        for (std::size_t b = 0; b < v.cols(); ++b) s[b] += ha * row[b];
      }
    }
    for (double sv : s) {
      if (!std::isfinite(sv)) {
        throw NonFiniteValue("layer " + std::to_string(j) +
                             " produced a non-finite pre-activation");
      }
    }
    act.apply(s, trace.out[static_cast<std::size_t>(j)]);
  }
}

ForwardTrace forward(const DagTopology& t, const WeightSet& w,
                     const Activation& act, const Vector& x) {
  w.require_matches(t);
  if (x.size() != static_cast<std::size_t>(t.width(0))) {
    throw DimensionMismatch("input has " + std::to_string(x.size()) +
                            " entries, input layer has width " +
                            std::to_string(t.width(0)));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw NonFiniteInput("non-finite network input");
  }

  const int L = t.last_layer();
  ForwardTrace trace;
  trace.pre.resize(static_cast<std::size_t>(L) + 1);
  trace.out.resize(static_cast<std::size_t>(L) + 1);
  trace.out[0] = x;
  forward_range(t, w, act, trace, 1, L);
  return trace;
}

double sample_error(const ForwardTrace& trace, const Vector& target) {
  const Vector& y = trace.output();
  if (target.size() != y.size()) {
    throw DimensionMismatch("target has " + std::to_string(target.size()) +
                            " entries, output has " + std::to_string(y.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = target[i] - y[i];
    acc += r * r;
  }
  return acc / 2.0;
}

double batch_error(const DagTopology& t, const WeightSet& w,
                   const Activation& act, const std::vector<Vector>& inputs,
                   const std::vector<Vector>& targets) {
  if (inputs.size() != targets.size()) {
    throw DimensionMismatch("sample count differs between inputs and targets");
  }
  double acc = 0.0;
  for (std::size_t p = 0; p < inputs.size(); ++p) {
    acc += sample_error(forward(t, w, act, inputs[p]), targets[p]);
  }
  return acc;
}

WeightSet init_random(const DagTopology& t, std::uint64_t seed, double gain) {
  if (!(gain > 0.0) || !std::isfinite(gain)) {
    throw DomainError("init gain must be positive and finite");
  }
  WeightSet w(t);
  Rng rng(seed);
  for (std::size_t i = 0; i < w.count(); ++i) {
    const Edge& e = t.edges()[i];
    const double a = gain * std::sqrt(3.0 / t.fan_in_total(e.dst));
    Matrix& m = w.mat(i);
    double* p = m.data();
    for (std::size_t k = 0; k < m.size(); ++k) p[k] = rng.uniform(-a, a);
  }
  return w;
}

}  // namespace dagnet
