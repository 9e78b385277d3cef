#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpctf/grid.hpp"

namespace tpctf {

// P_m(x) = (1-x)^m sum_{j<m} C(m+j-1, j) x^j. Total on the reals.
double eval_pm(int m, double x);

// chi_{[cL,cR];epsL,epsR}: 0 outside (cL-epsL, cR+epsR), 1 on [cL+epsL, cR-epsR],
// sine-of-P_m transition bands in between.
struct BumpSpec {
  double cL = 0.0;
  double cR = 0.0;
  double epsL = 0.0;
  double epsR = 0.0;
  int m = 4;
};

void validate_bump(const BumpSpec& spec);
double eval_bump(const BumpSpec& spec, double xi);
// Sum of the bump over the shifts xi + 2*pi*t, t in {-1, 0, 1}.
double eval_bump_periodic(const BumpSpec& spec, double xi);

// One 1D filter, either a (possibly mirrored) periodized bump or explicit real taps.
// Frequency response convention: f^(xi) = sum_k h[k] e^{-i k xi}.
struct Filter1D {
  enum class Kind { bump, taps };

  std::string name;
  Kind kind = Kind::bump;
  BumpSpec bump;
  bool mirrored = false;  // response(xi) = chi(-xi)
  std::vector<double> taps;
  int offset = 0;         // taps[0] sits at index `offset`
  double center = 0.0;    // nominal passband centre, used for orientation labels
  int partner = -1;       // index of the filter whose response is conj(f^(-xi)); set by the bank

  Complex response(double xi) const;
};

struct CtfParams {
  int s = 2;
  double c1 = 119.0 / 128.0;
  double eps0 = 35.0 / 128.0;
  double eps1 = 81.0 / 128.0;
  int m = 4;
};

// The TP-CTF_6 parameter set.
CtfParams tpctf6_params(int m = 4);

struct CtfBank1D {
  CtfParams params;
  double eps_inner = 0.0;    // transition half-width used at c_2..c_s and at pi
  std::vector<double> edges; // c_1 .. c_{s+1}, with c_{s+1} = pi
  Filter1D a;
  Filter1D ap;
  Filter1D an;
  std::vector<Filter1D> bp;  // b^{l,p}, l = 1..s
  std::vector<Filter1D> bn;  // b^{l,n}
};

CtfBank1D build_ctf_bank(const CtfParams& params);

enum class BankFamily { tpctf, spline, dct };

const char* family_name(BankFamily f);

// u (x) v: `row` indexes the filter applied along the first frequency variable.
struct TensorFilter {
  int row = 0;
  int col = 0;
  std::string label;
  std::optional<double> angle_deg;  // in [0, 180), bump banks only
};

struct FilterBank2D {
  BankFamily family = BankFamily::tpctf;
  std::string tag;
  std::vector<Filter1D> filters1d;
  TensorFilter lowpass;
  std::vector<TensorFilter> highpass;

  bool has_taps() const;
  Complex response(const TensorFilter& f, double xi1, double xi2) const;
  // Highpass index of the filter with response conj(F(-xi1, -xi2)); may be itself.
  int conjugate_partner(int band) const;
  int find(const std::string& label) const;  // -1 when absent
};

FilterBank2D build_tpctf2d(const CtfBank1D& bank);
FilterBank2D build_tpctf6(int m = 4);

enum class SplineVariant { cubic, linear };
FilterBank2D build_spline_bank(SplineVariant variant);

// Columns of the orthonormal m x m DCT matrix scaled by 1/sqrt(m), as taps on [1, m].
FilterBank2D build_dct_bank(int m);
// The orthonormal DCT-II matrix, row k, column j (0-based).
std::vector<double> dct_matrix(int m);

// Frequency index k in [0, N) to xi in (-pi, pi].
double grid_frequency(int k, int n);

// Every 1D filter of a bank sampled on an N-point DFT grid.
struct SampledBank {
  int n = 0;
  int level = 0;
  std::vector<std::vector<Complex>> filters1d;  // [filter][k]

  Complex value(const TensorFilter& f, int k1, int k2) const {
    return filters1d[f.row][k1] * filters1d[f.col][k2];
  }
};

SampledBank sample_bank(const FilterBank2D& bank, int n, int level = 0);

struct IdentityReport {
  double partition = 0.0;            // max |sum_f |F|^2 - 1|
  double half_shift[3] = {0, 0, 0};  // e = (1,0), (0,1), (1,1)

  double worst() const;
};

// Checks the partition of unity and the half-shift orthogonality over all
// filters of the 2D bank (lowpass included) on the sampled grid.
IdentityReport verify_bank_identities(const FilterBank2D& bank, const SampledBank& sampled);
IdentityReport verify_bank_identities(const FilterBank2D& bank, int n);

// 1D version over an explicit list of filters; only half_shift[0] is used.
IdentityReport verify_bank_identities_1d(const std::vector<Filter1D>& filters, int n);

// Plain-text description: one line per 1D filter with its pieces, then the 2D list.
std::string describe_bank(const FilterBank2D& bank);

}  // namespace tpctf
