#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "tpctf/grid.hpp"
#include "tpctf/inpaint.hpp"

namespace tpctf {

// Greyscale PGM, P2 or P5, maxval 255. Rows = height, cols = width.
RealGrid parse_pgm(std::string_view bytes);
RealGrid load_pgm(const std::string& path);

// Clamp to [0, 255] and round half away from zero.
std::uint8_t to_byte(double v);
std::string encode_pgm(const RealGrid& image, bool ascii = false);
void save_pgm(const RealGrid& image, const std::string& path, bool ascii = false);

// Pixels >= 128 are observed.
Mask mask_from_image(const RealGrid& image);
Mask load_mask(const std::string& path);
RealGrid mask_to_image(const Mask& mask);  // 255 observed, 0 missing
void save_mask(const Mask& mask, const std::string& path);

}  // namespace tpctf
