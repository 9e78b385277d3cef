#pragma once

#include <optional>
#include <vector>

#include "tpctf/transform.hpp"

namespace tpctf {

Complex soft(Complex c, double lambda);
Complex hard(Complex c, double lambda);

// Bivariate rule for one coefficient. mean_sq is the window mean of |c|^2.
// Returns soft(c, lambda_c), or 0 when the signal deviation vanishes or c = 0.
Complex bivariate_threshold(Complex c, Complex parent, double sigma_n, double mean_sq);

struct ShrinkContext {
  double lambda = 0.0;
  std::vector<std::vector<double>> norms;  // [level-1][filter], see FrameTransform::band_norms
  int window_radius = 3;
  int local_radius = 4;  // window of the local-soft rule
};

ShrinkContext make_shrink_context(const FrameTransform& t, double lambda,
                                  NormMode mode = NormMode::level_effective);

struct ParentIndex {
  int level = 0;
  int filter = 0;
  int i = 0;
  int j = 0;
};

// Same filter one level coarser; none at the coarsest detail level.
std::optional<ParentIndex> parent_of(const CoeffPyramid& p, BandId band, int i, int j);

// Periodic (2r+1)^2 window mean of f(|c|) computed separably.
RealGrid window_mean(const ComplexGrid& band, int radius, bool squared);

CoeffPyramid bivariate_shrink(const CoeffPyramid& p, const ShrinkContext& ctx);
CoeffPyramid local_soft_shrink(const CoeffPyramid& p, double sigma, const ShrinkContext& ctx);

enum class ThresholdRule { soft, hard, bivariate, local_soft };

const char* rule_name(ThresholdRule r);

// Applies one rule to every detail band; the lowpass passes through.
// soft/hard threshold band (l, b) at lambda * norms[l][b]; local_soft uses sigma = lambda.
CoeffPyramid apply_rule(const CoeffPyramid& p, ThresholdRule rule, const ShrinkContext& ctx);

}  // namespace tpctf
