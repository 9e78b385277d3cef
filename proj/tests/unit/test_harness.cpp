#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>

#include "tpctf/experiment.hpp"
#include "tpctf/image_io.hpp"
#include "tpctf/metrics.hpp"
#include "tpctf/random.hpp"
#include "tpctf/synthetic.hpp"

using namespace tpctf;

namespace {

std::string fixture(const std::string& name) { return std::string(TPCTF_TEST_DATA) + "/fixtures/" + name; }

RealGrid integer_image(int rows, int cols) {
  RealGrid g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = (7 * i + 13 * j) % 256;
  return g;
}

std::size_t parse_offset(const std::string& bytes) {
  try {
    parse_pgm(bytes);
  } catch (const ParseError& e) {
    return e.offset();
  }
  return std::string::npos;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("PRNG test vectors") {
  // first SplitMix64 output for seed 0
  CHECK(stream_u64(0, 0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(0) == 0);
  CHECK(mix64(1) == 0x5692161d100b05e5ULL);
  CHECK(stream_u64(42, 0) == 0xbdd732262feb6e95ULL);
  CHECK(stream_u64(42, 1) == 0x28efe333b266f103ULL);
  CHECK(stream_u64(42, 2) == 0x47526757130f9f52ULL);
  CHECK(stream_uniform(42, 0) == 0.74156487877182331);
  CHECK(noise_seed(7) == 0x5ec0f0e584f98e4bULL);
  CHECK(std::abs(stream_normal(noise_seed(7), 0, false) - -0.32022322641069223) <= 1e-15);
  CHECK(std::abs(stream_normal(noise_seed(7), 0, true) - -0.37745224432821595) <= 1e-15);

  Mask m = gen_random_mask(4, 4, 0.5, 7);
  std::string bits;
  for (std::size_t k = 0; k < 16; ++k) bits += m.observed(k) ? '1' : '0';
  CHECK(bits == "0011000000011111");
}

TEST_CASE("sequential generator follows the counter stream") {
  Rng r(42);
  CHECK(r.next_u64() == stream_u64(42, 0));
  CHECK(r.uniform() == stream_uniform(42, 1));
  for (int k = 0; k < 1000; ++k) {
    int v = r.uniform_int(-2, 3);
    CHECK(v >= -2);
    CHECK(v <= 3);
  }
}

TEST_CASE("PGM round trip and clamping") {
  RealGrid img = integer_image(5, 7);
  CHECK(parse_pgm(encode_pgm(img)) == img);
  CHECK(parse_pgm(encode_pgm(img, true)) == img);

  CHECK(to_byte(255.7) == 255);
  CHECK(to_byte(-3.0) == 0);
  CHECK(to_byte(12.5) == 13);
  CHECK(to_byte(12.49) == 12);
  CHECK(to_byte(std::numeric_limits<double>::quiet_NaN()) == 0);

  RealGrid odd(1, 3);
  odd[0] = 255.7;
  odd[1] = -4.0;
  odd[2] = 99.5;
  RealGrid back = parse_pgm(encode_pgm(odd));
  CHECK(back[0] == 255.0);
  CHECK(back[1] == 0.0);
  CHECK(back[2] == 100.0);

  const std::string path = (std::filesystem::temp_directory_path() / "tpctf_roundtrip.pgm").string();
  save_pgm(img, path);
  CHECK(load_pgm(path) == img);
  std::remove(path.c_str());
}

TEST_CASE("P2 and P5 fixtures load identically") {
  RealGrid a = load_pgm(fixture("tiny_p2.pgm"));
  RealGrid b = load_pgm(fixture("tiny_p5.pgm"));
  CHECK(a.rows() == 4);
  CHECK(a.cols() == 6);
  CHECK(a == b);
  RealGrid s = load_pgm(fixture("shapes64.pgm"));
  CHECK(s.rows() == 64);
  RealGrid ref = fixture_shapes(64, 64);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(s[k] == to_byte(ref[k]));
}

TEST_CASE("PGM header comments and parse errors") {
  RealGrid c = parse_pgm("P2\n# comment\n2 1 # trailing\n255\n1 2\n");
  CHECK(c[1] == 2.0);

  CHECK(parse_offset("P3\n1 1\n255\n0") == 0);
  CHECK(parse_offset("P2\n1 1\n65535\n0") == 7);
  CHECK(parse_offset("P2\n0 1\n255\n") == 3);
  CHECK(parse_offset(std::string("P5\n2 2\n255\n\x01\x02", 13)) == 13);
  CHECK(parse_offset("P2\n2 1\n255\n1 ") == 13);
  CHECK(parse_offset("P2\n2 1\n255\n1 300") == 13);
  CHECK(parse_offset("P2\nx 1\n255\n") == 3);
  try {
    load_pgm(fixture("truncated.pgm"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("truncated.pgm") != std::string::npos);
    CHECK(msg.find("byte offset") != std::string::npos);
    CHECK(msg.find("byte offset") == msg.rfind("byte offset"));
  }
  CHECK_THROWS_AS(load_pgm("/nonexistent/file.pgm"), IoError);
}

TEST_CASE("mask images") {
  RealGrid g(2, 2);
  g[0] = 255.0;
  g[1] = 128.0;
  g[2] = 127.0;
  g[3] = 0.0;
  Mask m = mask_from_image(g);
  CHECK(m.observed(std::size_t{0}));
  CHECK(m.observed(std::size_t{1}));
  CHECK_FALSE(m.observed(std::size_t{2}));
  CHECK_FALSE(m.observed(std::size_t{3}));
  RealGrid img = mask_to_image(m);
  CHECK(img[1] == 255.0);
  CHECK(img[2] == 0.0);
  CHECK(mask_from_image(parse_pgm(encode_pgm(img))) == m);
}

TEST_CASE("random masks") {
  Mask a = gen_random_mask(256, 256, 0.5, 99);
  Mask b = gen_random_mask(256, 256, 0.5, 99);
  CHECK(a == b);
  CHECK(a.rows() == 256);
  const double r = a.missing_ratio();
  CHECK(r >= 0.48);
  CHECK(r <= 0.52);
  CHECK(std::abs(gen_random_mask(256, 256, 0.8, 3).missing_ratio() - 0.8) <= 0.02);
  CHECK_FALSE(gen_random_mask(256, 256, 0.5, 100) == a);
  CHECK(gen_random_mask(3, 2, 0.5, 1).cols() == 3);
  CHECK_THROWS_AS(gen_random_mask(8, 8, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(gen_random_mask(8, 8, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(gen_random_mask(1, 1, 0.999999, 1), DataError);
}

TEST_CASE("Gaussian noise") {
  RealGrid zero(512, 512, 0.0);
  CHECK(add_gaussian_noise(zero, 0.0, 4) == zero);
  const double sigma = 10.0;
  RealGrid n = add_gaussian_noise(zero, sigma, 4);
  double mean = 0.0;
  for (double v : n.values()) mean += v;
  mean /= static_cast<double>(n.size());
  double var = 0.0;
  for (double v : n.values()) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(n.size() - 1));
  CHECK(std::abs(mean) <= 0.05 * sigma);
  CHECK(std::abs(sd - sigma) <= 0.01 * sigma);
  CHECK(add_gaussian_noise(zero, sigma, 4) == n);
  CHECK(n[1] == sigma * stream_normal(noise_seed(4), 0, true));
  CHECK_THROWS_AS(add_gaussian_noise(zero, -1.0, 4), ConfigError);
}

TEST_CASE("PSNR") {
  RealGrid x = integer_image(16, 16);
  RealGrid up = x;
  RealGrid down = x;
  for (auto& v : up.values()) v += 1.0;
  for (auto& v : down.values()) v -= 1.0;
  CHECK(std::abs(psnr(x, up) - 20.0 * std::log10(255.0)) <= 1e-12);
  CHECK(std::abs(psnr(x, up) - 48.1308) <= 1e-4);
  CHECK(psnr(x, up) == psnr(x, down));
  CHECK(std::isinf(psnr(x, x)));
  CHECK(psnr(x, x) > 0.0);
  RealGrid far = x;
  for (auto& v : far.values()) v += 255.0;
  CHECK(std::abs(psnr(x, far)) <= 1e-12);
  CHECK_THROWS_AS(psnr(x, RealGrid(4, 4)), StructuralError);
}

TEST_CASE("experiments are deterministic") {
  ExperimentSpec spec;
  spec.image = fixture_scene(32, 32);
  spec.image_name = "scene32";
  spec.mask_rate = 0.5;
  spec.mask_seed = 3;
  spec.sigma = 5.0;
  spec.seed = 11;
  for (Algorithm a : {Algorithm::tpctf6, Algorithm::spline, Algorithm::dct}) {
    spec.algorithm = a;
    ExperimentReport r1 = run_experiment(spec);
    ExperimentReport r2 = run_experiment(spec);
    CHECK(r1.deterministic_line() == r2.deterministic_line());
    CHECK(r1.restored == r2.restored);
    CHECK(r1.psnr > 15.0);
    CHECK(r1.iterations > 0);
    const std::string line = r1.line();
    int tabs = 0;
    for (char ch : line) tabs += ch == '\t';
    CHECK(tabs == 7);
    CHECK(line.rfind(r1.deterministic_line(), 0) == 0);
    CHECK(line.find("random:0.5:3") != std::string::npos);
    CHECK(line.find(algorithm_name(a)) != std::string::npos);
  }
  CHECK(parse_algorithm("dct") == Algorithm::dct);
  CHECK_THROWS_AS(parse_algorithm("wavelet"), ConfigError);
}

TEST_CASE("fixtures") {
  for (const auto& name : fixture_names()) {
    RealGrid g = make_fixture(name, 32, 48);
    CHECK(g.rows() == 32);
    CHECK(g.cols() == 48);
    for (double v : g.values()) {
      CHECK(v >= 0.0);
      CHECK(v <= 255.0);
    }
  }
  CHECK_THROWS_AS(make_fixture("nope", 8, 8), ConfigError);
}

}  // TEST_SUITE
