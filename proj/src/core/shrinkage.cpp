#include "tpctf/shrinkage.hpp"

#include <cmath>

namespace tpctf {

namespace {

void check_context(const CoeffPyramid& p, const ShrinkContext& ctx) {
  if (ctx.norms.size() != p.detail.size())
    throw StructuralError("shrink: context levels do not match the pyramid");
  for (std::size_t l = 0; l < p.detail.size(); ++l)
    if (ctx.norms[l].size() != p.detail[l].size())
      throw StructuralError("shrink: context bands do not match the pyramid");
  if (ctx.window_radius < 1 || ctx.local_radius < 1)
    throw ConfigError("shrink: window radius must be >= 1");
  if (ctx.lambda < 0.0) throw ConfigError("shrink: lambda must be nonnegative");
}

}  // namespace

Complex soft(Complex c, double lambda) {
  double a = std::abs(c);
  if (a <= lambda) return {0.0, 0.0};
  return c - lambda * c / a;
}

Complex hard(Complex c, double lambda) { return std::abs(c) > lambda ? c : Complex{0.0, 0.0}; }

Complex bivariate_threshold(Complex c, Complex parent, double sigma_n, double mean_sq) {
  const double ac = std::abs(c);
  if (ac == 0.0) return {0.0, 0.0};
  const double var_n = sigma_n * sigma_n;
  const double sigma_c = std::sqrt(std::max(mean_sq - var_n, 0.0));
  if (sigma_c == 0.0) return {0.0, 0.0};
  const double ap = std::abs(parent);
  const double lambda_c = std::sqrt(3.0) * var_n * ac / (sigma_c * std::hypot(ac, ap));
  return soft(c, lambda_c);
}

ShrinkContext make_shrink_context(const FrameTransform& t, double lambda, NormMode mode) {
  ShrinkContext ctx;
  ctx.lambda = lambda;
  ctx.norms = t.band_norms(mode);
  return ctx;
}

std::optional<ParentIndex> parent_of(const CoeffPyramid& p, BandId band, int i, int j) {
  const ComplexGrid& g = p.band(band);
  if (i < 0 || j < 0 || i >= g.rows() || j >= g.cols())
    throw StructuralError("parent_of: coordinates out of range");
  if (band.level == p.levels) return std::nullopt;
  if (p.mode == TransformMode::decimated) return ParentIndex{band.level + 1, band.filter, i / 2, j / 2};
  return ParentIndex{band.level + 1, band.filter, i, j};
}

RealGrid window_mean(const ComplexGrid& band, int radius, bool squared) {
  const int r = band.rows();
  const int c = band.cols();
  RealGrid mag(r, c);
  for (std::size_t k = 0; k < band.size(); ++k)
    mag[k] = squared ? std::norm(band[k]) : std::abs(band[k]);
  RealGrid tmp(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      double s = 0.0;
      for (int d = -radius; d <= radius; ++d) s += mag(wrap(i + d, r), j);
      tmp(i, j) = s;
    }
  const double inv = 1.0 / ((2.0 * radius + 1) * (2.0 * radius + 1));
  RealGrid out(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      double s = 0.0;
      for (int d = -radius; d <= radius; ++d) s += tmp(i, wrap(j + d, c));
      out(i, j) = s * inv;
    }
  return out;
}

CoeffPyramid bivariate_shrink(const CoeffPyramid& p, const ShrinkContext& ctx) {
  check_context(p, ctx);
  CoeffPyramid out = p;
  for (int l = 0; l < p.levels; ++l) {
    for (std::size_t b = 0; b < p.detail[l].size(); ++b) {
      const ComplexGrid& in = p.detail[l][b];
      const ComplexGrid* parent = l + 1 < p.levels ? &p.detail[l + 1][b] : nullptr;
      const bool halve = p.mode == TransformMode::decimated;
      const double sigma_n = ctx.lambda * ctx.norms[l][b];
      RealGrid mean_sq = window_mean(in, ctx.window_radius, true);
      ComplexGrid& dst = out.detail[l][b];
      for (int i = 0; i < in.rows(); ++i)
        for (int j = 0; j < in.cols(); ++j) {
          Complex cp{0.0, 0.0};
          if (parent) cp = halve ? (*parent)(i / 2, j / 2) : (*parent)(i, j);
          dst(i, j) = bivariate_threshold(in(i, j), cp, sigma_n, mean_sq(i, j));
        }
    }
  }
  return out;
}

CoeffPyramid local_soft_shrink(const CoeffPyramid& p, double sigma, const ShrinkContext& ctx) {
  check_context(p, ctx);
  if (sigma < 0.0) throw ConfigError("local_soft: sigma must be nonnegative");
  CoeffPyramid out = p;
  const double sigma_n = sigma / 7.0;
  for (int l = 0; l < p.levels; ++l) {
    for (std::size_t b = 0; b < p.detail[l].size(); ++b) {
      const ComplexGrid& in = p.detail[l][b];
      RealGrid mean_abs = window_mean(in, ctx.local_radius, false);
      ComplexGrid& dst = out.detail[l][b];
      for (std::size_t k = 0; k < in.size(); ++k) {
        const double m = std::sqrt(2.0) * mean_abs[k];
        const double sigma_c = std::max(std::sqrt(std::max(m * m - sigma_n * sigma_n, 0.0)), 1e-3);
        dst[k] = soft(in[k], std::sqrt(2.0) * sigma_n * sigma_n / sigma_c);
      }
    }
  }
  return out;
}

const char* rule_name(ThresholdRule r) {
  switch (r) {
    case ThresholdRule::soft: return "soft";
    case ThresholdRule::hard: return "hard";
    case ThresholdRule::bivariate: return "bivariate";
    case ThresholdRule::local_soft: return "local_soft";
  }
  return "unknown";
}

CoeffPyramid apply_rule(const CoeffPyramid& p, ThresholdRule rule, const ShrinkContext& ctx) {
  switch (rule) {
    case ThresholdRule::bivariate: return bivariate_shrink(p, ctx);
    case ThresholdRule::local_soft: return local_soft_shrink(p, ctx.lambda, ctx);
    case ThresholdRule::soft:
    case ThresholdRule::hard: break;
  }
  check_context(p, ctx);
  CoeffPyramid out = p;
  for (int l = 0; l < p.levels; ++l)
    for (std::size_t b = 0; b < p.detail[l].size(); ++b) {
      const double t = ctx.lambda * ctx.norms[l][b];
      for (auto& v : out.detail[l][b].values()) v = rule == ThresholdRule::soft ? soft(v, t) : hard(v, t);
    }
  return out;
}

}  // namespace tpctf
