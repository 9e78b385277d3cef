#include "tpctf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tpctf/random.hpp"

namespace tpctf {

Mask gen_random_mask(int width, int height, double rate, std::uint64_t seed) {
  if (width < 1 || height < 1) throw ConfigError("gen_random_mask: dimensions must be positive");
  if (!(rate > 0.0) || !(rate < 1.0)) throw ConfigError("gen_random_mask: rate must lie in (0, 1)");
  Mask m(height, width, true);
  std::size_t missing = 0;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  for (std::size_t k = 0; k < n; ++k) {
    if (stream_uniform(seed, k) < rate) {
      m.set(k, false);
      ++missing;
    }
  }
  if (missing == n) throw DataError("gen_random_mask: every pixel is missing; choose another seed");
  return m;
}

Mask block_mask(int rows, int cols, int top, int left, int height, int width) {
  Mask m(rows, cols, true);
  for (int i = top; i < top + height; ++i)
    for (int j = left; j < left + width; ++j)
      if (i >= 0 && i < rows && j >= 0 && j < cols) m.set(i, j, false);
  if (m.count_observed() == 0) throw DataError("block_mask: every pixel is missing");
  return m;
}

RealGrid add_gaussian_noise(const RealGrid& image, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ConfigError("add_gaussian_noise: sigma must be nonnegative");
  RealGrid out = image;
  if (sigma == 0.0) return out;
  const std::uint64_t s = noise_seed(seed);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += sigma * stream_normal(s, k / 2, k % 2 == 1);
  return out;
}

RealGrid fixture_gradient(int rows, int cols) {
  RealGrid g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = 255.0 * (i + j) / std::max(1, rows + cols - 2);
  return g;
}

RealGrid fixture_checkerboard(int rows, int cols, int cell) {
  if (cell < 1) throw ConfigError("fixture_checkerboard: cell must be >= 1");
  RealGrid g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = ((i / cell + j / cell) % 2) ? 200.0 : 50.0;
  return g;
}

RealGrid fixture_sinusoid(int rows, int cols, double period, double angle_deg) {
  RealGrid g(rows, cols);
  const double t = angle_deg * std::numbers::pi / 180.0;
  const double w = 2.0 * std::numbers::pi / period;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = 128.0 + 80.0 * std::sin(w * (i * std::sin(t) + j * std::cos(t)));
  return g;
}

RealGrid fixture_shapes(int rows, int cols) {
  RealGrid g(rows, cols, 60.0);
  const double cy = 0.6 * rows;
  const double cx = 0.35 * cols;
  const double rad = 0.22 * std::min(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (i >= rows / 8 && i < rows / 2 && j >= cols / 2 && j < 7 * cols / 8) g(i, j) = 180.0;
      if ((i - cy) * (i - cy) + (j - cx) * (j - cx) <= rad * rad) g(i, j) = 220.0;
      if (i >= 3 * rows / 4 && j >= 5 * cols / 8) g(i, j) = 110.0;
    }
  }
  return g;
}

RealGrid fixture_scene(int rows, int cols) {
  RealGrid g = fixture_shapes(rows, cols);
  RealGrid tex = fixture_sinusoid(rows, cols, 5.0, 30.0);
  for (int i = 0; i < rows / 2; ++i)
    for (int j = 0; j < cols / 2; ++j) g(i, j) = 0.5 * g(i, j) + 0.5 * tex(i, j);
  return g;
}

std::vector<std::string> fixture_names() { return {"gradient", "checkerboard", "sinusoid", "shapes", "scene"}; }

RealGrid make_fixture(const std::string& name, int rows, int cols) {
  if (name == "gradient") return fixture_gradient(rows, cols);
  if (name == "checkerboard") return fixture_checkerboard(rows, cols, 8);
  if (name == "sinusoid") return fixture_sinusoid(rows, cols, 6.0, 30.0);
  if (name == "shapes") return fixture_shapes(rows, cols);
  if (name == "scene") return fixture_scene(rows, cols);
  throw ConfigError("unknown fixture '" + name + "'");
}

}  // namespace tpctf
