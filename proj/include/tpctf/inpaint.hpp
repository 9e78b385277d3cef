#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tpctf/shrinkage.hpp"
#include "tpctf/transform.hpp"

namespace tpctf {

// Observable region: true = observed pixel.
class Mask {
 public:
  Mask() = default;
  Mask(int rows, int cols, bool observed = true) : grid_(rows, cols, observed ? 1 : 0) {}

  int rows() const noexcept { return grid_.rows(); }
  int cols() const noexcept { return grid_.cols(); }
  bool observed(int i, int j) const { return grid_(i, j) != 0; }
  bool observed(std::size_t k) const { return grid_[k] != 0; }
  void set(int i, int j, bool observed) { grid_(i, j) = observed ? 1 : 0; }
  void set(std::size_t k, bool observed) { grid_[k] = observed ? 1 : 0; }

  std::size_t count_observed() const;
  // r = 1 - #observed / pixel count.
  double missing_ratio() const;
  const ByteGrid& grid() const noexcept { return grid_; }

  friend bool operator==(const Mask& a, const Mask& b) { return a.grid_ == b.grid_; }

 private:
  ByteGrid grid_;
};

struct Schedule {
  double lambda_min = 0.0;
  double lambda_mid = 0.0;
  double lambda_max = 512.0;
  int n1 = 0;
  int n2 = 0;
  double tol1 = 0.0;
  double tol2 = 0.0;
  std::vector<double> lambda1;  // Lambda_1(1..N1)
  std::vector<double> lambda2;  // Lambda_2(1..N2)
};

Schedule make_schedule(double sigma, double r);
// Rebuilds the two sequences from explicit endpoints and counts; n1 >= 2, n2 >= 1,
// lambda_min <= lambda_mid <= lambda_max.
Schedule make_schedule(double lambda_min, double lambda_mid, double lambda_max, int n1, double tol1,
                       int n2, double tol2);

// 4 levels for images whose shorter side is at least 256, else 3, reduced
// until the coarsest decimated grid keeps at least 8 points per side.
int default_levels(int rows, int cols);

struct InpaintConfig {
  double sigma = 0.0;
  int levels = 0;  // 0: default_levels
  CtfParams bank = tpctf6_params();
  NormMode norm_mode = NormMode::level_effective;
  int window_radius = 3;
  int max_iterations = 2000;
  bool paste_observed = false;
  std::optional<Schedule> schedule;  // overrides make_schedule(sigma, r)
};

// Per-iteration state passed to an observer after x_{l+1} is formed.
struct IterationEvent {
  int iteration = 0;   // l, starting at 1
  int stage = 0;       // i before the update of this iteration
  double lambda = 0.0; // threshold used in this iteration
  double error = 0.0;
  bool advanced = false;
  const RealGrid* working = nullptr;  // y_l
  const RealGrid* next = nullptr;     // x_{l+1}
};

using IterationObserver = std::function<void(const IterationEvent&)>;

struct InpaintResult {
  RealGrid image;
  int iterations = 0;
  int thresholds_completed = 0;  // thresholds whose convergence test passed
  bool hit_iteration_cap = false;
  double final_error = 0.0;
  double missing_ratio = 0.0;
  int levels = 0;
  Schedule schedule;
  std::vector<double> lambdas;  // distinct thresholds visited, in order
};

InpaintResult inpaint(const RealGrid& y, const Mask& mask, const InpaintConfig& config,
                      const IterationObserver& observer = {});

// Stages of a generic run: stage k uses values[k] until the relative change
// drops below tolerances[k].
struct ThresholdSequence {
  std::vector<double> values;
  std::vector<double> tolerances;
  int max_iterations = 2000;
};

ThresholdSequence sequence_from_schedule(const Schedule& s, int max_iterations = 2000);

struct GenericResult {
  RealGrid image;
  CoeffPyramid coefficients;  // thresholded coefficients of the last iteration
  int iterations = 0;
  int stages_completed = 0;
  bool hit_iteration_cap = false;
  double final_change = 0.0;
};

// x_l = P y + (I - P) D eta(D^T x_{l-1}), x_0 = P y. Band (l, b) is thresholded
// at lambda * ||b||; the lowpass is not thresholded.
GenericResult iterative_inpaint_generic(const RealGrid& y, const Mask& mask, const TransformSpec& spec,
                                        ThresholdRule rule, const ThresholdSequence& sequence,
                                        NormMode norm_mode = NormMode::level_effective,
                                        const IterationObserver& observer = {});

}  // namespace tpctf
