#pragma once

#include "tpctf/grid.hpp"

namespace tpctf {

double squared_error(const RealGrid& x, const RealGrid& y);
double mse(const RealGrid& x, const RealGrid& y);

// 10 log10(255^2 d / ||x - x_hat||^2); +infinity for identical images.
double psnr(const RealGrid& x, const RealGrid& x_hat);

}  // namespace tpctf
