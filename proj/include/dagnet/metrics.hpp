#pragma once

#include "dagnet/common.hpp"

namespace dagnet {

// A reference image and a reconstruction of it, on the same grid, with the
// nominal value range (1.0 for normalized pixels).  Construction checks
// shapes, finiteness and that every entry lies in [0, data_range], so the
// metric functions can assume clean input.
struct ImagePair {
  Matrix reference;
  Matrix reconstruction;
  double data_range;

  ImagePair(Matrix ref, Matrix rec, double range = 1.0);
};

// Entrywise clamp into [lo, hi]; reconstructions pass through this before
// being scored, since the network output is not range-limited.
Matrix clamp_to_range(const Matrix& m, double lo = 0.0, double hi = 1.0);

// Mean squared pixel difference.
double mse(const ImagePair& p);

// 10 * log10(data_range^2 / mse); +infinity for a perfect reconstruction.
double psnr(const ImagePair& p);

// sqrt(mse) / sqrt(mean reference^2).  Throws DegenerateReference for an
// all-zero reference.
double nrmse(const ImagePair& p);

// Mean structural similarity over all fully-interior sliding windows, with
// the standard Gaussian window (11 x 11, sigma 1.5; shrunk to the largest
// odd size that fits when the image is smaller) and stabilizers
// C1 = (0.01 * data_range)^2, C2 = (0.03 * data_range)^2.  Identical images
// score exactly 1.0: every per-window numerator and denominator are computed
// from expressions that coincide term by term when the two images are equal.
// Throws TooSmall when the shorter image side is below 3 pixels.
double ssim(const ImagePair& p);

}  // namespace dagnet
