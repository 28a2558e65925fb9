#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dagnet/common.hpp"

namespace dagnet {

// A set of flattened grayscale images, all on the same rows x cols grid,
// with pixel values normalized to [0, 1].  Samples are row-major flattened,
// so sample length is always rows * cols.
struct Dataset {
  std::vector<Vector> samples;
  int rows = 0;
  int cols = 0;
  // Where the data came from ("synthetic", a directory, "train"/"test").
  std::string tag;

  std::size_t size() const { return samples.size(); }
  int dim() const { return rows * cols; }
  // Sample i reshaped back to its image grid.
  Matrix as_image(std::size_t i) const;
};

// Reads one PGM file (binary P5 or plain P2, any maxval up to 65535) and
// returns the image with pixels divided by maxval.  Throws MalformedHeader
// for anything that does not parse, MaxvalZero for a zero maxval and
// IoFailure when the file cannot be opened or ends early.
Matrix read_pgm(const std::string& path);

// Writes a binary (P5) PGM with maxval 255; pixels are clamped to [0, 1]
// and rounded.
void write_pgm(const std::string& path, const Matrix& img);

// Loads every *.pgm in a directory, sorted by filename so the sample order
// is stable.  Throws IoFailure when the directory is unreadable or holds no
// PGM files and InconsistentDimensions when the images disagree on size.
Dataset load_pgm_directory(const std::string& dir);

// Splits into train_count / rest by a seeded random permutation (same seed,
// same split, on any platform).  Throws CountTooLarge when train_count
// exceeds the dataset.
std::pair<Dataset, Dataset> split(const Dataset& d, std::size_t train_count,
                                  std::uint64_t seed);

// Deterministic stand-in for a face corpus: each image is 3 to 6 soft
// elliptical Gaussian bumps at random positions/scales, min-max normalized
// to span [0, 1].  Smooth, structured, and varied enough that compressing it
// is a real task.
Dataset synthetic_faces(std::size_t count, int rows, int cols,
                        std::uint64_t seed);

}  // namespace dagnet
