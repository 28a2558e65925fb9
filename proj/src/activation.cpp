#include "dagnet/activation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dagnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double s) {
  if (!std::isfinite(s)) {
    throw NonFiniteInput("activation evaluated at non-finite argument");
  }
}

}  // namespace

Activation Activation::from_name(const std::string& name) {
  if (name == "tanh") return Activation(ActivationKind::Tanh, name);
  if (name == "logistic") return Activation(ActivationKind::Logistic, name);
  if (name == "atan") return Activation(ActivationKind::Atan, name);
  if (name == "linear") return Activation(ActivationKind::Linear, name);
  throw DomainError("unknown activation \"" + name +
                    "\" (expected tanh, logistic, atan or linear)");
}

double Activation::value_bound() const {
  switch (kind_) {
    case ActivationKind::Tanh:
    case ActivationKind::Logistic:
    case ActivationKind::Atan:
      return 1.0;
    case ActivationKind::Linear:
      return kInf;
  }
  return kInf;
}

double Activation::derivative_bound() const {
  switch (kind_) {
    case ActivationKind::Tanh:
      return 1.0;
    case ActivationKind::Logistic:
      return 0.25;
    case ActivationKind::Atan:
      return 2.0 / std::numbers::pi;  // attained at 0
    case ActivationKind::Linear:
      return 1.0;
  }
  return kInf;
}

double Activation::second_derivative_bound() const {
  switch (kind_) {
    case ActivationKind::Tanh:
      // |g''| peaks where tanh = 1/sqrt(3).
      return 4.0 / (3.0 * std::sqrt(3.0));
    case ActivationKind::Logistic:
      return 1.0 / (6.0 * std::sqrt(3.0));
    case ActivationKind::Atan:
      // |g''| of (2/pi) atan peaks at s = 1/sqrt(3).
      return 9.0 / (4.0 * std::sqrt(3.0) * std::numbers::pi);
    case ActivationKind::Linear:
      // The derivative is constant; only the value is unbounded.
      return 0.0;
  }
  return kInf;
}

double Activation::operator()(double s) const {
  require_finite(s);
  switch (kind_) {
    case ActivationKind::Tanh:
      return std::tanh(s);
    case ActivationKind::Logistic:
      return 1.0 / (1.0 + std::exp(-s));
    case ActivationKind::Atan:
      return (2.0 / std::numbers::pi) * std::atan(s);
    case ActivationKind::Linear:
      return s;
  }
  return s;
}

double Activation::derivative(double s) const {
  require_finite(s);
  switch (kind_) {
    case ActivationKind::Tanh: {
      const double t = std::tanh(s);
      return 1.0 - t * t;
    }
    case ActivationKind::Logistic: {
      const double g = 1.0 / (1.0 + std::exp(-s));
      return g * (1.0 - g);
    }
    case ActivationKind::Atan:
      return (2.0 / std::numbers::pi) / (1.0 + s * s);
    case ActivationKind::Linear:
      return 1.0;
  }
  return 1.0;
}

double Activation::second_derivative(double s) const {
  require_finite(s);
  switch (kind_) {
    case ActivationKind::Tanh: {
      const double t = std::tanh(s);
      return -2.0 * t * (1.0 - t * t);
    }
    case ActivationKind::Logistic: {
      const double g = 1.0 / (1.0 + std::exp(-s));
      return g * (1.0 - g) * (1.0 - 2.0 * g);
    }
    case ActivationKind::Atan: {
      const double d = 1.0 + s * s;
      return -(4.0 / std::numbers::pi) * s / (d * d);
    }
    case ActivationKind::Linear:
      return 0.0;
  }
  return 0.0;
}

void Activation::apply(const Vector& s, Vector& out) const {
  out.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = (*this)(s[i]);
}

void Activation::apply_derivative(const Vector& s, Vector& out) const {
  out.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = derivative(s[i]);
}

}  // namespace dagnet
