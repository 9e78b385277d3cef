#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpctf/inpaint.hpp"

namespace tpctf {

// Pixel k (row-major) is missing iff stream_uniform(seed, k) < rate.
Mask gen_random_mask(int width, int height, double rate, std::uint64_t seed);

// Observed everywhere except the given rectangle.
Mask block_mask(int rows, int cols, int top, int left, int height, int width);

// Adds sigma * N(0, 1) per pixel from the noise stream of `seed`; no clamping.
RealGrid add_gaussian_noise(const RealGrid& image, double sigma, std::uint64_t seed);

// Small deterministic test images in greyscale units.
RealGrid fixture_gradient(int rows, int cols);
RealGrid fixture_checkerboard(int rows, int cols, int cell);
RealGrid fixture_sinusoid(int rows, int cols, double period, double angle_deg);
RealGrid fixture_shapes(int rows, int cols);  // piecewise constant
RealGrid fixture_scene(int rows, int cols);   // shapes plus a textured region

std::vector<std::string> fixture_names();
RealGrid make_fixture(const std::string& name, int rows, int cols);

}  // namespace tpctf
