#pragma once

#include <string>

#include "dagnet/common.hpp"

namespace dagnet {

enum class ActivationKind { Tanh, Logistic, Atan, Linear };

// Elementwise activation function with its first two derivatives and their
// global bounds.  The bounds feed the convergence analysis, which assumes a
// twice-differentiable activation with bounded |g'| and |g''|; the linear
// activation breaks that assumption and reports infinite bounds, so callers
// that rely on the guarantees must opt in explicitly before using it.
class Activation {
 public:
  // Names: "tanh", "logistic", "atan" (arctangent rescaled to (-1, 1)),
  // "linear".  Throws DomainError for anything else.
  static Activation from_name(const std::string& name);

  ActivationKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  // True when value, first and second derivative are all globally bounded.
  bool bounded() const { return kind_ != ActivationKind::Linear; }
  double value_bound() const;
  double derivative_bound() const;
  double second_derivative_bound() const;

  // Scalar evaluation; all three throw NonFiniteInput on a non-finite
  // argument.
  double operator()(double s) const;
  double derivative(double s) const;
  double second_derivative(double s) const;

  // Elementwise over a vector, writing into `out` (resized as needed).
  void apply(const Vector& s, Vector& out) const;
  void apply_derivative(const Vector& s, Vector& out) const;

 private:
  Activation(ActivationKind kind, std::string name)
      : kind_(kind), name_(std::move(name)) {}

  ActivationKind kind_;
  std::string name_;
};

}  // namespace dagnet
