#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "tpctf/filterbank.hpp"
#include "tpctf/grid.hpp"

namespace tpctf {

enum class TransformMode { decimated, undecimated };

// Which filter norm scales the shrinkage noise level of a band.
//   level_effective: norm of the actual frame element at that level
//   level_one:       norm of the level-1 element of the same filter
enum class NormMode { level_effective, level_one };

struct TransformSpec {
  FilterBank2D bank;
  int levels = 3;
  TransformMode mode = TransformMode::decimated;
};

// level is 1-based; filter indexes bank.highpass.
struct BandId {
  int level = 1;
  int filter = 0;
};

struct CoeffPyramid {
  int rows = 0;
  int cols = 0;
  int levels = 0;
  TransformMode mode = TransformMode::decimated;
  std::string bank_tag;
  std::vector<std::vector<ComplexGrid>> detail;  // [level-1][filter]
  ComplexGrid lowpass;

  ComplexGrid& band(BandId id);
  const ComplexGrid& band(BandId id) const;
  std::size_t coefficient_count() const;
  double energy() const;  // sum of |c|^2 over every band
};

// Multilevel periodic frame transform. Decimated mode works in the frequency
// domain and is an isometry; undecimated mode uses spatial a trous filtering
// with the bank's taps. Forward/inverse are const and reentrant.
class FrameTransform {
 public:
  FrameTransform(TransformSpec spec, int rows, int cols);
  ~FrameTransform();
  FrameTransform(FrameTransform&&) noexcept;
  FrameTransform& operator=(FrameTransform&&) noexcept;

  const TransformSpec& spec() const noexcept { return spec_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int levels() const noexcept { return spec_.levels; }
  int band_count() const noexcept { return static_cast<int>(spec_.bank.highpass.size()); }

  CoeffPyramid forward(const RealGrid& image) const;
  // Complex-input analysis; the real-input overload forwards here.
  CoeffPyramid forward(const ComplexGrid& image) const;
  // imag_residue, when given, receives max |Im| of the synthesized image before it is dropped.
  RealGrid inverse(const CoeffPyramid& pyramid, double* imag_residue = nullptr) const;
  ComplexGrid inverse_complex(const CoeffPyramid& pyramid) const;

  CoeffPyramid zeros() const;

  double filter_l2_norm(BandId band, NormMode mode = NormMode::level_effective) const;
  // [level-1][filter] table of filter_l2_norm.
  std::vector<std::vector<double>> band_norms(NormMode mode = NormMode::level_effective) const;

 private:
  struct Impl;
  TransformSpec spec_;
  int rows_ = 0;
  int cols_ = 0;
  std::unique_ptr<Impl> impl_;

  void check_pyramid(const CoeffPyramid& p) const;
};

CoeffPyramid forward(const RealGrid& image, const TransformSpec& spec);
RealGrid inverse(const CoeffPyramid& pyramid, const TransformSpec& spec);
CoeffPyramid forward_undecimated(const RealGrid& image, const TransformSpec& spec);
RealGrid inverse_undecimated(const CoeffPyramid& pyramid, const TransformSpec& spec);

// sqrt(mean |f|^2) of a sampled response, i.e. the l2 norm of the filter by Parseval.
double response_l2_norm(const std::vector<Complex>& samples);

// Real degrees of freedom of a pyramid of a real image: conjugate-partner
// bands count once as full complex bands, self-partnered bands count as real.
std::size_t real_dof(const CoeffPyramid& pyramid, const FilterBank2D& bank);

// Text dump: header, then per band its id, shape and row-major values.
std::string dump_pyramid(const CoeffPyramid& pyramid, const FilterBank2D& bank);

}  // namespace tpctf
