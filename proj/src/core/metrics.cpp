#include "tpctf/metrics.hpp"

#include <cmath>
#include <limits>

namespace tpctf {

double squared_error(const RealGrid& x, const RealGrid& y) {
  if (!x.same_shape(y)) throw StructuralError("metrics: image shapes differ");
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return s;
}

double mse(const RealGrid& x, const RealGrid& y) {
  if (x.empty()) throw DataError("metrics: empty image");
  return squared_error(x, y) / static_cast<double>(x.size());
}

double psnr(const RealGrid& x, const RealGrid& x_hat) {
  const double e = squared_error(x, x_hat);
  if (x.empty()) throw DataError("psnr: empty image");
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 * static_cast<double>(x.size()) / e);
}

}  // namespace tpctf
