#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "dagnet/data.hpp"

using namespace dagnet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("dagnet_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int counter;
};
int TempDir::counter = 0;

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("binary graymap with known bytes") {
    TempDir dir;
    fs::path p = dir.path / "tiny.pgm";
    std::string raw = "P5\n2 2\n255\n";
    raw.push_back(static_cast<char>(0));
    raw.push_back(static_cast<char>(255));
    raw.push_back(static_cast<char>(128));
    raw.push_back(static_cast<char>(64));
    write_bytes(p, raw);

    Matrix img = read_pgm(p.string());
    REQUIRE(img.rows() == 2);
    REQUIRE(img.cols() == 2);
    CHECK(img(0, 0) == 0.0);
    CHECK(img(0, 1) == 1.0);
    CHECK(img(1, 0) == doctest::Approx(0.5019607843137255).epsilon(1e-15));
    CHECK(img(1, 1) == doctest::Approx(0.25098039215686274).epsilon(1e-15));
}

TEST_CASE("ascii graymap with comments") {
    TempDir dir;
    fs::path p = dir.path / "ascii.pgm";
    write_bytes(p,
                "P2\n# a comment\n3 1\n# another\n100\n0 50 100\n");
    Matrix img = read_pgm(p.string());
    REQUIRE(img.rows() == 1);
    REQUIRE(img.cols() == 3);
    CHECK(img(0, 0) == 0.0);
    CHECK(img(0, 1) == 0.5);
    CHECK(img(0, 2) == 1.0);
}

TEST_CASE("sixteen-bit graymap uses big-endian pairs") {
    TempDir dir;
    fs::path p = dir.path / "deep.pgm";
    std::string raw = "P5\n1 2\n65535\n";
    // 0x1234 = 4660 and 0xFFFF = 65535.
    raw.push_back(static_cast<char>(0x12));
    raw.push_back(static_cast<char>(0x34));
    raw.push_back(static_cast<char>(0xFF));
    raw.push_back(static_cast<char>(0xFF));
    write_bytes(p, raw);
    Matrix img = read_pgm(p.string());
    CHECK(img(0, 0) == doctest::Approx(4660.0 / 65535.0).epsilon(1e-15));
    CHECK(img(1, 0) == 1.0);
}

TEST_CASE("malformed graymaps are rejected") {
    TempDir dir;
    fs::path p = dir.path / "bad.pgm";

    write_bytes(p, "P6\n2 2\n255\nxxxx");
    CHECK_THROWS_AS((void)read_pgm(p.string()), MalformedHeader);

    std::string zero_max = "P5\n2 2\n0\n";
    zero_max.append(4, '\0');
    write_bytes(p, zero_max);
    CHECK_THROWS_AS((void)read_pgm(p.string()), MaxvalZero);

    write_bytes(p, "P5\n2 2\n255\nab");  // truncated raster
    CHECK_THROWS_AS((void)read_pgm(p.string()), IoFailure);

    write_bytes(p, "P5\n-2 2\n255\nabcd");
    CHECK_THROWS_AS((void)read_pgm(p.string()), MalformedHeader);

    CHECK_THROWS_AS((void)read_pgm((dir.path / "nope.pgm").string()),
                    IoFailure);
}

TEST_CASE("write then read round-trips at 8-bit resolution") {
    TempDir dir;
    fs::path p = dir.path / "rt.pgm";
    Rng rng(2);
    Matrix img(5, 7);
    for (std::size_t k = 0; k < img.size(); ++k) {
        img.data()[k] = rng.uniform01();
    }
    write_pgm(p.string(), img);
    Matrix back = read_pgm(p.string());
    REQUIRE(back.rows() == 5);
    REQUIRE(back.cols() == 7);
    for (std::size_t k = 0; k < img.size(); ++k) {
        // Quantized to 1/255 steps.
        CHECK(std::abs(back.data()[k] - img.data()[k]) <= 0.5 / 255.0 + 1e-12);
    }

    // Out-of-range values are clamped on write.
    Matrix wild(1, 2);
    wild(0, 0) = -3.0;
    wild(0, 1) = 42.0;
    write_pgm(p.string(), wild);
    Matrix clamped = read_pgm(p.string());
    CHECK(clamped(0, 0) == 0.0);
    CHECK(clamped(0, 1) == 1.0);
}

TEST_CASE("directory loading is sorted and checked") {
    TempDir dir;
    Matrix a(2, 2), b(2, 2);
    for (std::size_t k = 0; k < 4; ++k) {
        a.data()[k] = 0.25;
        b.data()[k] = 0.75;
    }
    write_pgm((dir.path / "b_second.pgm").string(), b);
    write_pgm((dir.path / "a_first.pgm").string(), a);
    write_bytes(dir.path / "notes.txt", "ignored");

    Dataset d = load_pgm_directory(dir.path.string());
    REQUIRE(d.size() == 2);
    CHECK(d.rows == 2);
    CHECK(d.cols == 2);
    CHECK(d.samples[0][0] == doctest::Approx(0.25).epsilon(1e-2));
    CHECK(d.samples[1][0] == doctest::Approx(0.75).epsilon(1e-2));

    Matrix odd(3, 2);
    write_pgm((dir.path / "c_odd.pgm").string(), odd);
    CHECK_THROWS_AS((void)load_pgm_directory(dir.path.string()),
                    InconsistentDimensions);

    CHECK_THROWS_AS(
        (void)load_pgm_directory((dir.path / "missing").string()), IoFailure);
}

TEST_CASE("deterministic split") {
    Dataset d;
    d.rows = 1;
    d.cols = 2;
    d.tag = "all";
    for (int i = 0; i < 10; ++i) {
        d.samples.push_back({static_cast<double>(i), 0.0});
    }
    auto [train1, test1] = split(d, 7, 99);
    auto [train2, test2] = split(d, 7, 99);
    CHECK(train1.size() == 7);
    CHECK(test1.size() == 3);
    CHECK(train1.tag == "train");
    CHECK(test1.tag == "test");
    CHECK(train1.samples == train2.samples);
    CHECK(test1.samples == test2.samples);

    // Together the halves hold each original sample exactly once.
    std::vector<int> seen(10, 0);
    for (const auto& s : train1.samples) seen[static_cast<int>(s[0])]++;
    for (const auto& s : test1.samples) seen[static_cast<int>(s[0])]++;
    for (int c : seen) CHECK(c == 1);

    auto [train3, test3] = split(d, 7, 100);
    CHECK(train1.samples != train3.samples);  // different seed reshuffles
    CHECK(test3.size() == 3);

    CHECK_THROWS_AS((void)split(d, 11, 1), CountTooLarge);
    CHECK_THROWS_AS((void)split(d, 10, 1), CountTooLarge);  // empty test side
}

TEST_CASE("synthetic faces are normalized and reproducible") {
    Dataset d = synthetic_faces(6, 16, 16, 7);
    REQUIRE(d.size() == 6);
    CHECK(d.rows == 16);
    CHECK(d.cols == 16);
    CHECK(d.dim() == 256);
    for (const auto& s : d.samples) {
        double lo = 1e9, hi = -1e9;
        for (double v : s) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(lo == 0.0);
        CHECK(hi == 1.0);
    }
    Dataset again = synthetic_faces(6, 16, 16, 7);
    CHECK(d.samples == again.samples);
    Dataset other = synthetic_faces(6, 16, 16, 8);
    CHECK(d.samples != other.samples);

    Matrix img = d.as_image(0);
    CHECK(img.rows() == 16);
    CHECK(img(1, 2) == d.samples[0][1 * 16 + 2]);
}
