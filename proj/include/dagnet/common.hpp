#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dagnet {

// All library errors derive from Error; each condition gets its own type so
// callers (and tests) can catch precisely what they care about.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DAGNET_ERROR_TYPE(NAME)       \
  class NAME : public Error {         \
   public:                            \
    using Error::Error;               \
  }

// Topology validation.
DAGNET_ERROR_TYPE(BadTopology);
DAGNET_ERROR_TYPE(CyclicOrBackwardEdge);
DAGNET_ERROR_TYPE(DeadLayer);
DAGNET_ERROR_TYPE(CodeCutViolation);
DAGNET_ERROR_TYPE(CodeDimension);
// Numerics.
DAGNET_ERROR_TYPE(NonFiniteInput);
DAGNET_ERROR_TYPE(NonFiniteValue);
DAGNET_ERROR_TYPE(NonFiniteUpdate);
DAGNET_ERROR_TYPE(DimensionMismatch);
DAGNET_ERROR_TYPE(TraceMismatch);
DAGNET_ERROR_TYPE(KeyMismatch);
DAGNET_ERROR_TYPE(DomainError);
DAGNET_ERROR_TYPE(TooLargeForFiniteDifference);
// Convergence analysis.
DAGNET_ERROR_TYPE(InsufficientData);
DAGNET_ERROR_TYPE(UnboundedRatio);
// Image metrics.
DAGNET_ERROR_TYPE(ShapeMismatch);
DAGNET_ERROR_TYPE(TooSmall);
DAGNET_ERROR_TYPE(DegenerateReference);
// Datasets.
DAGNET_ERROR_TYPE(MalformedHeader);
DAGNET_ERROR_TYPE(InconsistentDimensions);
DAGNET_ERROR_TYPE(MaxvalZero);
DAGNET_ERROR_TYPE(CountTooLarge);
// Serialization.
DAGNET_ERROR_TYPE(ParseError);
DAGNET_ERROR_TYPE(LoadMismatch);
DAGNET_ERROR_TYPE(IoFailure);

#undef DAGNET_ERROR_TYPE

using Vector = std::vector<double>;

// Dense row-major matrix of doubles.  Deliberately minimal: the library only
// needs storage, element access and a few norms, all with a guaranteed
// element order so results are reproducible bit-for-bit.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* row(std::size_t r) { return data_.data() + r * cols_; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Squared Frobenius norm, accumulated in storage order.
inline double frobenius_sq(const Matrix& m) {
  double acc = 0.0;
  const double* p = m.data();
  for (std::size_t i = 0; i < m.size(); ++i) acc += p[i] * p[i];
  return acc;
}

inline double frobenius(const Matrix& m) { return std::sqrt(frobenius_sq(m)); }

inline double max_abs(const Matrix& m) {
  double acc = 0.0;
  const double* p = m.data();
  for (std::size_t i = 0; i < m.size(); ++i) acc = std::max(acc, std::abs(p[i]));
  return acc;
}

inline double norm_sq(const Vector& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

// Deterministic random source.  Wraps std::mt19937_64 but does the
// integer-to-double conversion and the shuffle by hand: the standard
// distributions and std::shuffle are implementation-defined, and identical
// streams across compilers/platforms are part of this library's contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Uniform integer in [0, n) by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Fisher-Yates with our own index draws, so the permutation depends only
  // on the seed.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dagnet
