#include "dagnet/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace dagnet {

namespace {

namespace fs = std::filesystem;

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_header_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) break;
  }
  if (c == EOF) throw MalformedHeader("header ended early");
  do {
    tok.push_back(static_cast<char>(c));
  } while ((c = in.get()) != EOF && !std::isspace(c) && c != '#');
  if (c == '#') in.unget();
  return tok;
}

long header_number(std::istream& in, const char* what) {
  const std::string tok = next_header_token(in);
  try {
    std::size_t used = 0;
    const long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw MalformedHeader(std::string("expected ") + what + ", got \"" + tok +
                          "\"");
  }
}

}  // namespace

Matrix Dataset::as_image(std::size_t i) const {
  Matrix img(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  const Vector& s = samples[i];
  std::copy(s.begin(), s.end(), img.data());
  return img;
}

Matrix read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);

  const std::string magic = next_header_token(in);
  if (magic != "P5" && magic != "P2") {
    throw MalformedHeader(path + ": not a PGM file (magic \"" + magic + "\")");
  }
  const long cols = header_number(in, "width");
  const long rows = header_number(in, "height");
  const long maxval = header_number(in, "maxval");
  if (cols <= 0 || rows <= 0) {
    throw MalformedHeader(path + ": non-positive image size");
  }
  if (maxval == 0) throw MaxvalZero(path + ": maxval is zero");
  if (maxval < 0 || maxval > 65535) {
    throw MalformedHeader(path + ": maxval out of range");
  }

  Matrix img(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  const double scale = 1.0 / static_cast<double>(maxval);
  if (magic == "P2") {
    for (std::size_t i = 0; i < img.size(); ++i) {
      const long v = header_number(in, "pixel");
      if (v < 0 || v > maxval) {
        throw MalformedHeader(path + ": pixel value out of range");
      }
      img.data()[i] = static_cast<double>(v) * scale;
    }
  } else {
    // The token reader consumed the single whitespace byte that separates
    // the maxval from the raster, so the stream sits on the first pixel.
    const int bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(img.size() * static_cast<std::size_t>(bytes));
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
      throw IoFailure(path + ": raster data ended early");
    }
    for (std::size_t i = 0; i < img.size(); ++i) {
      long v;
      if (bytes == 1) {
        v = raw[i];
      } else {
        v = (static_cast<long>(raw[2 * i]) << 8) | raw[2 * i + 1];
      }
      if (v > maxval) {
        throw MalformedHeader(path + ": pixel value out of range");
      }
      img.data()[i] = static_cast<double>(v) * scale;
    }
  }
  return img;
}

void write_pgm(const std::string& path, const Matrix& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot create " + path);
  out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double v = std::clamp(img.data()[i], 0.0, 1.0);
    out.put(static_cast<char>(std::lround(v * 255.0)));
  }
  if (!out) throw IoFailure("failed writing " + path);
}

Dataset load_pgm_directory(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw IoFailure(dir + " is not a readable directory");
  }
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      paths.push_back(entry.path().string());
    }
  }
  if (paths.empty()) throw IoFailure(dir + " holds no .pgm files");
  std::sort(paths.begin(), paths.end());

  Dataset d;
  d.tag = dir;
  for (const std::string& p : paths) {
    const Matrix img = read_pgm(p);
    if (d.samples.empty()) {
      d.rows = static_cast<int>(img.rows());
      d.cols = static_cast<int>(img.cols());
    } else if (static_cast<int>(img.rows()) != d.rows ||
               static_cast<int>(img.cols()) != d.cols) {
      throw InconsistentDimensions(p + ": image size differs from the rest");
    }
    d.samples.emplace_back(img.data(), img.data() + img.size());
  }
  return d;
}

std::pair<Dataset, Dataset> split(const Dataset& d, std::size_t train_count,
                                  std::uint64_t seed) {
  // Both halves must be non-empty: a split that exhausts the data leaves
  // nothing to evaluate on, which is never what a caller wants here.
  if (train_count == 0 || train_count >= d.size()) {
    throw CountTooLarge("cannot take " + std::to_string(train_count) +
                        " training samples from " + std::to_string(d.size()));
  }
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  Dataset train{ {}, d.rows, d.cols, "train" };
  Dataset test{ {}, d.rows, d.cols, "test" };
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < train_count ? train : test).samples.push_back(d.samples[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

Dataset synthetic_faces(std::size_t count, int rows, int cols,
                        std::uint64_t seed) {
  if (rows <= 0 || cols <= 0) {
    throw DomainError("image size must be positive");
  }
  Rng rng(seed);
  Dataset d;
  d.rows = rows;
  d.cols = cols;
  d.tag = "synthetic";
  d.samples.reserve(count);

  const double r = static_cast<double>(rows);
  const double c = static_cast<double>(cols);
  for (std::size_t n = 0; n < count; ++n) {
    Matrix img(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    const std::size_t bumps = 3 + static_cast<std::size_t>(rng.below(4));
    for (std::size_t b = 0; b < bumps; ++b) {
      const double cy = rng.uniform(0.0, r);
      const double cx = rng.uniform(0.0, c);
      const double sy = rng.uniform(r / 8.0, r / 3.0);
      const double sx = rng.uniform(c / 8.0, c / 3.0);
      const double amp = rng.uniform(0.3, 1.0);
      for (int y = 0; y < rows; ++y) {
        const double dy = (static_cast<double>(y) - cy) / sy;
        for (int x = 0; x < cols; ++x) {
          const double dx = (static_cast<double>(x) - cx) / sx;
          img(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) +=
              amp * std::exp(-(dy * dy + dx * dx));
        }
      }
    }
    double lo = img.data()[0], hi = img.data()[0];
    for (std::size_t i = 0; i < img.size(); ++i) {
      lo = std::min(lo, img.data()[i]);
      hi = std::max(hi, img.data()[i]);
    }
    // A sum of positive bumps over a finite grid always has hi > lo, but a
    // degenerate span would divide by zero, so fall back to a flat image.
    const double span = hi > lo ? hi - lo : 1.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
      img.data()[i] = (img.data()[i] - lo) / span;
    }
    d.samples.emplace_back(img.data(), img.data() + img.size());
  }
  return d;
}

}  // namespace dagnet
