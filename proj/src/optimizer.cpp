#include "dagnet/optimizer.hpp"

#include <cmath>
#include <string>

namespace dagnet {

namespace {

void check_rate(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("learning rate must be positive and finite");
  }
}

}  // namespace

OptimizerState::OptimizerState(const DagTopology& t, double eta, double s)
    : eta_(eta), s_(s), prev_delta_(t) {
  check_rate(eta);
  if (!(s > 0.0 && s < 1.0)) {
    throw DomainError("momentum scale s must lie strictly between 0 and 1");
  }
  prev_delta_norm_sq_.assign(prev_delta_.count(), 0.0);
}

double momentum_coefficient(double tau, double q_norm, double prev_delta_norm) {
  if (prev_delta_norm == 0.0) return 0.0;
  return tau * q_norm / prev_delta_norm;
}

void OptimizerState::step(WeightSet& w, const GradientSet& q) {
  w.require_same_keys(prev_delta_);
  q.require_same_keys(prev_delta_);

  const double t = tau();
  for (std::size_t idx = 0; idx < prev_delta_.count(); ++idx) {
    const Matrix& qm = q.mat(idx);
    Matrix& dv = prev_delta_.mat(idx);
    Matrix& wm = w.mat(idx);

    const double coef = momentum_coefficient(
        t, frobenius(qm), std::sqrt(prev_delta_norm_sq_[idx]));
    if (!std::isfinite(coef)) {
      throw NonFiniteUpdate("momentum coefficient overflowed on edge index " +
                            std::to_string(idx));
    }

    double dv_sq = 0.0;
    double* d = dv.data();
    double* wp = wm.data();
    const double* qp = qm.data();
    for (std::size_t k = 0; k < dv.size(); ++k) {
      const double nd = coef * d[k] - eta_ * qp[k];
      d[k] = nd;
      wp[k] += nd;
      dv_sq += nd * nd;
    }
    if (!std::isfinite(dv_sq)) {
      throw NonFiniteUpdate("update became non-finite on edge index " +
                            std::to_string(idx));
    }
    prev_delta_norm_sq_[idx] = dv_sq;
  }
  ++k_;
}

double max_eta(double s, double C) {
  if (!(s > 0.0 && s < 1.0)) {
    throw DomainError("momentum scale s must lie strictly between 0 and 1");
  }
  if (!(C > 0.0) || !std::isfinite(C)) {
    throw DomainError("curvature constant C must be positive and finite");
  }
  return (1.0 - s) / (C * (s * s + 1.0));
}

FixedMomentumState::FixedMomentumState(const DagTopology& t, double eta,
                                       double beta)
    : eta_(eta), beta_(beta), prev_delta_(t) {
  check_rate(eta);
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw DomainError("momentum factor beta must lie in [0, 1)");
  }
  prev_delta_norm_sq_.assign(prev_delta_.count(), 0.0);
}

void FixedMomentumState::step(WeightSet& w, const GradientSet& q) {
  w.require_same_keys(prev_delta_);
  q.require_same_keys(prev_delta_);

  for (std::size_t idx = 0; idx < prev_delta_.count(); ++idx) {
    const Matrix& qm = q.mat(idx);
    Matrix& dv = prev_delta_.mat(idx);
    Matrix& wm = w.mat(idx);

    double dv_sq = 0.0;
    double* d = dv.data();
    double* wp = wm.data();
    const double* qp = qm.data();
    for (std::size_t k = 0; k < dv.size(); ++k) {
      const double nd = beta_ * d[k] - eta_ * qp[k];
      d[k] = nd;
      wp[k] += nd;
      dv_sq += nd * nd;
    }
    if (!std::isfinite(dv_sq)) {
      throw NonFiniteUpdate("update became non-finite on edge index " +
                            std::to_string(idx));
    }
    prev_delta_norm_sq_[idx] = dv_sq;
  }
  ++k_;
}

std::vector<double> per_edge_norm_sq(const EdgeMatrices& m) {
  std::vector<double> out(m.count());
  for (std::size_t i = 0; i < m.count(); ++i) out[i] = frobenius_sq(m.mat(i));
  return out;
}

}  // namespace dagnet
