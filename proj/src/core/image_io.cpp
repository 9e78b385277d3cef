#include "tpctf/image_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace tpctf {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view s) : s_(s) {}

  std::size_t pos() const { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n' && s_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space_and_comments();
    if (pos_ >= s_.size()) throw ParseError(std::string("pgm: unexpected end of data reading ") + what, pos_);
    if (!std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError(std::string("pgm: expected a number for ") + what, pos_);
    long v = 0;
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 1000000000L) throw ParseError(std::string("pgm: ") + what + " too large", start);
      ++pos_;
    }
    return v;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void advance() { ++pos_; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace

RealGrid parse_pgm(std::string_view s) {
  if (s.size() < 2 || s[0] != 'P' || (s[1] != '2' && s[1] != '5'))
    throw ParseError("pgm: missing P2/P5 magic number", 0);
  const bool binary = s[1] == '5';
  HeaderReader r(s.substr(0));
  r.advance();
  r.advance();
  if (!std::isspace(static_cast<unsigned char>(r.peek())) && r.peek() != '#')
    throw ParseError("pgm: magic number must be followed by whitespace", r.pos());
  r.skip_space_and_comments();
  const std::size_t wpos = r.pos();
  const long width = r.read_uint("width");
  const long height = r.read_uint("height");
  if (width <= 0 || height <= 0) throw ParseError("pgm: width and height must be positive", wpos);
  r.skip_space_and_comments();
  const std::size_t mpos = r.pos();
  const long maxval = r.read_uint("maxval");
  if (maxval != 255) throw ParseError("pgm: only maxval 255 is supported", mpos);

  RealGrid img(static_cast<int>(height), static_cast<int>(width));
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (binary) {
    if (!std::isspace(static_cast<unsigned char>(r.peek())))
      throw ParseError("pgm: expected a single whitespace byte after maxval", r.pos());
    const std::size_t start = r.pos() + 1;
    if (s.size() - start < count) throw ParseError("pgm: truncated pixel data", s.size());
    for (std::size_t k = 0; k < count; ++k) img[k] = static_cast<unsigned char>(s[start + k]);
    return img;
  }
  for (std::size_t k = 0; k < count; ++k) {
    r.skip_space_and_comments();
    const std::size_t at = r.pos();
    if (at >= s.size()) throw ParseError("pgm: truncated pixel data", at);
    long v = r.read_uint("pixel");
    if (v > 255) throw ParseError("pgm: pixel value exceeds maxval", at);
    img[k] = static_cast<double>(v);
  }
  return img;
}

RealGrid load_pgm(const std::string& path) {
  std::string bytes = read_file(path);
  try {
    return parse_pgm(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.offset());
  }
}

std::uint8_t to_byte(double v) {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::round(v));
}

std::string encode_pgm(const RealGrid& img, bool ascii) {
  if (img.empty()) throw ConfigError("pgm: cannot encode an empty image");
  std::ostringstream os;
  os << (ascii ? "P2" : "P5") << "\n" << img.cols() << " " << img.rows() << "\n255\n";
  if (ascii) {
    for (int i = 0; i < img.rows(); ++i) {
      for (int j = 0; j < img.cols(); ++j) os << (j ? " " : "") << static_cast<int>(to_byte(img(i, j)));
      os << "\n";
    }
  } else {
    for (std::size_t k = 0; k < img.size(); ++k) os.put(static_cast<char>(to_byte(img[k])));
  }
  return os.str();
}

void save_pgm(const RealGrid& img, const std::string& path, bool ascii) { write_file(path, encode_pgm(img, ascii)); }

Mask mask_from_image(const RealGrid& img) {
  Mask m(img.rows(), img.cols(), false);
  for (std::size_t k = 0; k < img.size(); ++k) m.set(k, img[k] >= 128.0);
  return m;
}

Mask load_mask(const std::string& path) { return mask_from_image(load_pgm(path)); }

RealGrid mask_to_image(const Mask& mask) {
  RealGrid img(mask.rows(), mask.cols());
  for (std::size_t k = 0; k < img.size(); ++k) img[k] = mask.observed(k) ? 255.0 : 0.0;
  return img;
}

void save_mask(const Mask& mask, const std::string& path) { save_pgm(mask_to_image(mask), path); }

}  // namespace tpctf
