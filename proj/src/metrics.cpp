#include "dagnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace dagnet {

ImagePair::ImagePair(Matrix ref, Matrix rec, double range)
    : reference(std::move(ref)),
      reconstruction(std::move(rec)),
      data_range(range) {
  if (!reference.same_shape(reconstruction)) {
    throw ShapeMismatch("reference and reconstruction have different shapes");
  }
  if (reference.size() == 0) {
    throw ShapeMismatch("images must be non-empty");
  }
  if (!(data_range > 0.0) || !std::isfinite(data_range)) {
    throw DomainError("data range must be positive and finite");
  }
  for (const Matrix* m : {&reference, &reconstruction}) {
    const double* p = m->data();
    for (std::size_t i = 0; i < m->size(); ++i) {
      if (!std::isfinite(p[i])) {
        throw NonFiniteInput("image contains a non-finite pixel");
      }
      if (p[i] < 0.0 || p[i] > data_range) {
        throw DomainError("pixel value " + std::to_string(p[i]) +
                          " lies outside [0, data_range]");
      }
    }
  }
}

Matrix clamp_to_range(const Matrix& m, double lo, double hi) {
  Matrix out = m;
  double* p = out.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    p[i] = std::clamp(p[i], lo, hi);
  }
  return out;
}

double mse(const ImagePair& p) {
  const double* a = p.reference.data();
  const double* b = p.reconstruction.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.reference.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(p.reference.size());
}

double psnr(const ImagePair& p) {
  const double m = mse(p);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(p.data_range * p.data_range / m);
}

double nrmse(const ImagePair& p) {
  const double* a = p.reference.data();
  double ref_sq = 0.0;
  for (std::size_t i = 0; i < p.reference.size(); ++i) ref_sq += a[i] * a[i];
  ref_sq /= static_cast<double>(p.reference.size());
  if (ref_sq == 0.0) {
    throw DegenerateReference("all-zero reference image has no scale");
  }
  return std::sqrt(mse(p)) / std::sqrt(ref_sq);
}

double ssim(const ImagePair& p) {
  const std::size_t rows = p.reference.rows();
  const std::size_t cols = p.reference.cols();
  const std::size_t short_side = std::min(rows, cols);
  if (short_side < 3) {
    throw TooSmall("structural similarity needs images of at least 3 x 3");
  }
  std::size_t win = std::min<std::size_t>(11, short_side);
  if (win % 2 == 0) --win;

  // Normalized 2D Gaussian window, built separably.
  const double sigma = 1.5;
  std::vector<double> g(win);
  const double center = static_cast<double>(win - 1) / 2.0;
  double gsum = 0.0;
  for (std::size_t i = 0; i < win; ++i) {
    const double d = static_cast<double>(i) - center;
    g[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    gsum += g[i];
  }
  std::vector<double> weight(win * win);
  const double total = gsum * gsum;
  for (std::size_t a = 0; a < win; ++a) {
    for (std::size_t b = 0; b < win; ++b) {
      weight[a * win + b] = g[a] * g[b] / total;
    }
  }

  const double c1 = (0.01 * p.data_range) * (0.01 * p.data_range);
  const double c2 = (0.03 * p.data_range) * (0.03 * p.data_range);

  // Sliding over all windows fully inside the image.  The five weighted
  // moments are accumulated in one fixed order; the numerator and
  // denominator expressions below mirror each other exactly, which is what
  // makes ssim(x, x) == 1.0 hold bitwise.
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t r0 = 0; r0 + win <= rows; ++r0) {
    for (std::size_t c0 = 0; c0 + win <= cols; ++c0) {
      double mx = 0.0, my = 0.0, xx = 0.0, yy = 0.0, xy = 0.0;
      for (std::size_t a = 0; a < win; ++a) {
        const double* xr = p.reference.row(r0 + a) + c0;
        const double* yr = p.reconstruction.row(r0 + a) + c0;
        const double* wr = weight.data() + a * win;
        for (std::size_t b = 0; b < win; ++b) {
          const double w = wr[b];
          mx += w * xr[b];
          my += w * yr[b];
          xx += w * xr[b] * xr[b];
          yy += w * yr[b] * yr[b];
          xy += w * xr[b] * yr[b];
        }
      }
      const double vx = xx - mx * mx;
      const double vy = yy - my * my;
      const double cxy = xy - mx * my;
      const double num = (2.0 * mx * my + c1) * (2.0 * cxy + c2);
      const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
      acc += num / den;
      ++count;
    }
  }
  return acc / static_cast<double>(count);
}

}  // namespace dagnet
