#include "tpctf/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <sstream>

namespace tpctf {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan2D {
 public:
  Plan2D(int rows, int cols, int sign) : rows_(rows), cols_(cols) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(rows) * cols);
    plan_ = fftw_plan_dft_2d(rows, cols, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (!plan_) throw Error("fftw: could not create plan");
  }
  ~Plan2D() {
    if (plan_) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
  }
  Plan2D(const Plan2D&) = delete;
  Plan2D& operator=(const Plan2D&) = delete;

  void execute(ComplexGrid& g) const {
    auto* p = reinterpret_cast<fftw_complex*>(g.data());
    fftw_execute_dft(plan_, p, p);
  }

 private:
  int rows_;
  int cols_;
  fftw_plan plan_ = nullptr;
};

using Samples = std::vector<std::vector<Complex>>;  // [filter1d][k]

Samples sample_filters(const FilterBank2D& bank, int n) {
  Samples s(bank.filters1d.size(), std::vector<Complex>(n));
  for (std::size_t f = 0; f < bank.filters1d.size(); ++f)
    for (int k = 0; k < n; ++k) s[f][k] = bank.filters1d[f].response(grid_frequency(k, n));
  return s;
}

std::vector<const TensorFilter*> all_filters(const FilterBank2D& bank) {
  std::vector<const TensorFilter*> v{&bank.lowpass};
  for (const auto& f : bank.highpass) v.push_back(&f);
  return v;
}

// Max deviation of the partition of unity and (when `decimated`) the three
// half-shift identities on a rows x cols grid.
double bank_deviation(const FilterBank2D& bank, const Samples& sr, const Samples& sc, int rows,
                      int cols, bool decimated) {
  auto filters = all_filters(bank);
  const int shifts[4][2] = {{0, 0}, {rows / 2, 0}, {0, cols / 2}, {rows / 2, cols / 2}};
  const int ne = decimated ? 4 : 1;
  double worst = 0.0;
  for (int k1 = 0; k1 < rows; ++k1) {
    for (int k2 = 0; k2 < cols; ++k2) {
      for (int e = 0; e < ne; ++e) {
        int j1 = (k1 + shifts[e][0]) % rows;
        int j2 = (k2 + shifts[e][1]) % cols;
        Complex acc{0.0, 0.0};
        for (const TensorFilter* f : filters)
          acc += sr[f->row][k1] * sc[f->col][k2] * std::conj(sr[f->row][j1] * sc[f->col][j2]);
        worst = std::max(worst, std::abs(acc - (e == 0 ? 1.0 : 0.0)));
      }
    }
  }
  return worst;
}

// c[i][j] = sum_p h[p] x[i + delta*p][j] (axis 0) or x[i][j + delta*p] (axis 1), periodic.
ComplexGrid correlate(const ComplexGrid& x, const Filter1D& f, int delta, int axis) {
  const int r = x.rows();
  const int c = x.cols();
  ComplexGrid out(r, c);
  for (std::size_t t = 0; t < f.taps.size(); ++t) {
    double h = f.taps[t];
    if (h == 0.0) continue;
    int shift = delta * (f.offset + static_cast<int>(t));
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) {
        const Complex& v = axis == 0 ? x(wrap(i + shift, r), j) : x(i, wrap(j + shift, c));
        out(i, j) += h * v;
      }
    }
  }
  return out;
}

// Adjoint of correlate: out[i] += sum_p h[p] x[i - delta*p].
void convolve_add(const ComplexGrid& x, const Filter1D& f, int delta, int axis, ComplexGrid& out) {
  const int r = x.rows();
  const int c = x.cols();
  for (std::size_t t = 0; t < f.taps.size(); ++t) {
    double h = f.taps[t];
    if (h == 0.0) continue;
    int shift = delta * (f.offset + static_cast<int>(t));
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) {
        const Complex& v = axis == 0 ? x(wrap(i - shift, r), j) : x(i, wrap(j - shift, c));
        out(i, j) += h * v;
      }
    }
  }
}

}  // namespace

struct FrameTransform::Impl {
  struct Level {
    int rows = 0;
    int cols = 0;
    Samples sr;
    Samples sc;
    std::unique_ptr<Plan2D> fwd;
    std::unique_ptr<Plan2D> inv;
    std::unique_ptr<Plan2D> fwd_half;
    std::unique_ptr<Plan2D> inv_half;
  };
  std::vector<Level> levels;
};

FrameTransform::FrameTransform(TransformSpec spec, int rows, int cols)
    : spec_(std::move(spec)), rows_(rows), cols_(cols), impl_(std::make_unique<Impl>()) {
  const int L = spec_.levels;
  if (L < 1) throw ConfigError("transform: levels must be >= 1");
  if (rows < 1 || cols < 1) throw ConfigError("transform: empty image");
  const FilterBank2D& bank = spec_.bank;

  if (spec_.mode == TransformMode::undecimated) {
    if (!bank.has_taps()) throw ConfigError("transform: undecimated mode needs a tap-defined bank");
    Samples sr = sample_filters(bank, rows);
    Samples sc = sample_filters(bank, cols);
    if (bank_deviation(bank, sr, sc, rows, cols, false) > 1e-9)
      throw ConfigError("transform: bank does not satisfy the partition of unity");
    return;
  }

  const int unit = 1 << L;
  if (rows % unit != 0 || cols % unit != 0)
    throw ConfigError("transform: image dimensions must be divisible by 2^levels (" +
                      std::to_string(unit) + ")");
  const int min_grid = bank.family == BankFamily::tpctf ? 8 : 4;
  if ((rows >> (L - 1)) < min_grid || (cols >> (L - 1)) < min_grid)
    throw ConfigError("transform: coarsest level grid must be at least " + std::to_string(min_grid) +
                      " points per side; reduce levels");

  for (int l = 0; l < L; ++l) {
    Impl::Level lv;
    lv.rows = rows >> l;
    lv.cols = cols >> l;
    lv.sr = sample_filters(bank, lv.rows);
    lv.sc = sample_filters(bank, lv.cols);
    double dev = bank_deviation(bank, lv.sr, lv.sc, lv.rows, lv.cols, true);
    if (dev > 1e-9) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "transform: bank is not a tight framelet filter bank on the %dx%d grid "
                    "(deviation %.3g)",
                    lv.rows, lv.cols, dev);
      throw ConfigError(buf);
    }
    lv.fwd = std::make_unique<Plan2D>(lv.rows, lv.cols, FFTW_FORWARD);
    lv.inv = std::make_unique<Plan2D>(lv.rows, lv.cols, FFTW_BACKWARD);
    lv.fwd_half = std::make_unique<Plan2D>(lv.rows / 2, lv.cols / 2, FFTW_FORWARD);
    lv.inv_half = std::make_unique<Plan2D>(lv.rows / 2, lv.cols / 2, FFTW_BACKWARD);
    impl_->levels.push_back(std::move(lv));
  }
}

FrameTransform::~FrameTransform() = default;
FrameTransform::FrameTransform(FrameTransform&&) noexcept = default;
FrameTransform& FrameTransform::operator=(FrameTransform&&) noexcept = default;

CoeffPyramid FrameTransform::zeros() const {
  CoeffPyramid p;
  p.rows = rows_;
  p.cols = cols_;
  p.levels = spec_.levels;
  p.mode = spec_.mode;
  p.bank_tag = spec_.bank.tag;
  const int nb = band_count();
  for (int l = 0; l < spec_.levels; ++l) {
    int r = rows_;
    int c = cols_;
    if (spec_.mode == TransformMode::decimated) {
      r = rows_ >> (l + 1);
      c = cols_ >> (l + 1);
    }
    p.detail.emplace_back(nb, ComplexGrid(r, c));
  }
  if (spec_.mode == TransformMode::decimated)
    p.lowpass = ComplexGrid(rows_ >> spec_.levels, cols_ >> spec_.levels);
  else
    p.lowpass = ComplexGrid(rows_, cols_);
  return p;
}

CoeffPyramid FrameTransform::forward(const RealGrid& image) const {
  ComplexGrid z(image.rows(), image.cols());
  for (std::size_t k = 0; k < image.size(); ++k) z[k] = image[k];
  return forward(z);
}

CoeffPyramid FrameTransform::forward(const ComplexGrid& image) const {
  if (image.rows() != rows_ || image.cols() != cols_)
    throw ConfigError("transform: image shape does not match the transform");
  CoeffPyramid out = zeros();
  const FilterBank2D& bank = spec_.bank;
  auto filters = all_filters(bank);
  ComplexGrid cur = image;

  if (spec_.mode == TransformMode::undecimated) {
    for (int l = 0; l < spec_.levels; ++l) {
      const int delta = 1 << l;
      std::vector<ComplexGrid> by_row(bank.filters1d.size());
      for (const TensorFilter* f : filters)
        if (by_row[f->row].empty()) by_row[f->row] = correlate(cur, bank.filters1d[f->row], delta, 0);
      ComplexGrid low = correlate(by_row[bank.lowpass.row], bank.filters1d[bank.lowpass.col], delta, 1);
      for (std::size_t b = 0; b < bank.highpass.size(); ++b) {
        const TensorFilter& f = bank.highpass[b];
        out.detail[l][b] = correlate(by_row[f.row], bank.filters1d[f.col], delta, 1);
      }
      cur = std::move(low);
    }
    out.lowpass = std::move(cur);
    return out;
  }

  for (int l = 0; l < spec_.levels; ++l) {
    const Impl::Level& lv = impl_->levels[l];
    const int hr = lv.rows / 2;
    const int hc = lv.cols / 2;
    const double scale = 0.5 / (static_cast<double>(hr) * hc);
    lv.fwd->execute(cur);
    ComplexGrid next;
    for (std::size_t fi = 0; fi < filters.size(); ++fi) {
      const TensorFilter& f = *filters[fi];
      const auto& u = lv.sr[f.row];
      const auto& v = lv.sc[f.col];
      ComplexGrid z(hr, hc);
      for (int k1 = 0; k1 < hr; ++k1) {
        const Complex u0 = std::conj(u[k1]);
        const Complex u1 = std::conj(u[k1 + hr]);
        for (int k2 = 0; k2 < hc; ++k2) {
          const Complex v0 = std::conj(v[k2]);
          const Complex v1 = std::conj(v[k2 + hc]);
          z(k1, k2) = (cur(k1, k2) * u0 * v0 + cur(k1 + hr, k2) * u1 * v0 +
                       cur(k1, k2 + hc) * u0 * v1 + cur(k1 + hr, k2 + hc) * u1 * v1) *
                      scale;
        }
      }
      lv.inv_half->execute(z);
      if (fi == 0)
        next = std::move(z);
      else
        out.detail[l][fi - 1] = std::move(z);
    }
    cur = std::move(next);
  }
  out.lowpass = std::move(cur);
  return out;
}

void FrameTransform::check_pyramid(const CoeffPyramid& p) const {
  CoeffPyramid ref = zeros();
  if (p.rows != rows_ || p.cols != cols_ || p.levels != spec_.levels || p.mode != spec_.mode)
    throw StructuralError("pyramid does not match the transform (shape, levels or mode)");
  if (p.detail.size() != ref.detail.size())
    throw StructuralError("pyramid level count mismatch");
  for (std::size_t l = 0; l < ref.detail.size(); ++l) {
    if (p.detail[l].size() != ref.detail[l].size())
      throw StructuralError("pyramid band count mismatch at level " + std::to_string(l + 1));
    for (std::size_t b = 0; b < ref.detail[l].size(); ++b)
      if (!p.detail[l][b].same_shape(ref.detail[l][b]))
        throw StructuralError("pyramid band shape mismatch at level " + std::to_string(l + 1));
  }
  if (!p.lowpass.same_shape(ref.lowpass)) throw StructuralError("pyramid lowpass shape mismatch");
}

ComplexGrid FrameTransform::inverse_complex(const CoeffPyramid& p) const {
  check_pyramid(p);
  const FilterBank2D& bank = spec_.bank;
  auto filters = all_filters(bank);
  ComplexGrid low = p.lowpass;

  if (spec_.mode == TransformMode::undecimated) {
    for (int l = spec_.levels - 1; l >= 0; --l) {
      const int delta = 1 << l;
      std::vector<ComplexGrid> by_row(bank.filters1d.size());
      for (std::size_t fi = 0; fi < filters.size(); ++fi) {
        const TensorFilter& f = *filters[fi];
        const ComplexGrid& c = fi == 0 ? low : p.detail[l][fi - 1];
        if (by_row[f.row].empty()) by_row[f.row] = ComplexGrid(rows_, cols_);
        convolve_add(c, bank.filters1d[f.col], delta, 1, by_row[f.row]);
      }
      ComplexGrid x(rows_, cols_);
      for (std::size_t u = 0; u < by_row.size(); ++u)
        if (!by_row[u].empty()) convolve_add(by_row[u], bank.filters1d[u], delta, 0, x);
      low = std::move(x);
    }
    return low;
  }

  for (int l = spec_.levels - 1; l >= 0; --l) {
    const Impl::Level& lv = impl_->levels[l];
    const int hr = lv.rows / 2;
    const int hc = lv.cols / 2;
    ComplexGrid x(lv.rows, lv.cols);
    for (std::size_t fi = 0; fi < filters.size(); ++fi) {
      const TensorFilter& f = *filters[fi];
      ComplexGrid c = fi == 0 ? low : p.detail[l][fi - 1];
      lv.fwd_half->execute(c);
      const auto& u = lv.sr[f.row];
      const auto& v = lv.sc[f.col];
      for (int k1 = 0; k1 < lv.rows; ++k1) {
        const Complex uk = 2.0 * u[k1];
        const int m1 = k1 < hr ? k1 : k1 - hr;
        for (int k2 = 0; k2 < lv.cols; ++k2) {
          const int m2 = k2 < hc ? k2 : k2 - hc;
          x(k1, k2) += uk * v[k2] * c(m1, m2);
        }
      }
    }
    lv.inv->execute(x);
    const double scale = 1.0 / (static_cast<double>(lv.rows) * lv.cols);
    for (auto& val : x.values()) val *= scale;
    low = std::move(x);
  }
  return low;
}

RealGrid FrameTransform::inverse(const CoeffPyramid& p, double* imag_residue) const {
  ComplexGrid z = inverse_complex(p);
  RealGrid out(z.rows(), z.cols());
  double worst = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    out[k] = z[k].real();
    worst = std::max(worst, std::abs(z[k].imag()));
  }
  if (imag_residue) *imag_residue = worst;
  return out;
}

double FrameTransform::filter_l2_norm(BandId band, NormMode mode) const {
  if (band.level < 1 || band.level > spec_.levels)
    throw StructuralError("filter_l2_norm: level out of range");
  if (band.filter < 0 || band.filter >= band_count())
    throw StructuralError("filter_l2_norm: unknown band");
  const FilterBank2D& bank = spec_.bank;
  const TensorFilter& f = bank.highpass[band.filter];
  const int j = mode == NormMode::level_one ? 1 : band.level;

  // Effective response of the level-j element on the finest grid, one axis at a time.
  auto axis_energy = [&](int n, int low_idx, int filt_idx) {
    const Filter1D& a = bank.filters1d[low_idx];
    const Filter1D& h = bank.filters1d[filt_idx];
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const double xi = grid_frequency(k, n);
      Complex e = h.response(std::ldexp(xi, j - 1));
      for (int i = 0; i <= j - 2; ++i) e *= a.response(std::ldexp(xi, i));
      sum += std::norm(e);
    }
    return sum / n;
  };
  double energy = axis_energy(rows_, bank.lowpass.row, f.row) * axis_energy(cols_, bank.lowpass.col, f.col);
  // synthesis gain is 2 per level, first level folds to half the energy
  if (spec_.mode == TransformMode::decimated) energy = std::ldexp(energy, 2 * j - 1);
  return std::sqrt(energy);
}

std::vector<std::vector<double>> FrameTransform::band_norms(NormMode mode) const {
  std::vector<std::vector<double>> out(spec_.levels, std::vector<double>(band_count()));
  for (int l = 0; l < spec_.levels; ++l)
    for (int b = 0; b < band_count(); ++b) out[l][b] = filter_l2_norm({l + 1, b}, mode);
  return out;
}

ComplexGrid& CoeffPyramid::band(BandId id) {
  if (id.level < 1 || id.level > levels || id.filter < 0 ||
      id.filter >= static_cast<int>(detail[id.level - 1].size()))
    throw StructuralError("pyramid: band id out of range");
  return detail[id.level - 1][id.filter];
}

const ComplexGrid& CoeffPyramid::band(BandId id) const {
  return const_cast<CoeffPyramid*>(this)->band(id);
}

std::size_t CoeffPyramid::coefficient_count() const {
  std::size_t n = lowpass.size();
  for (const auto& lv : detail)
    for (const auto& b : lv) n += b.size();
  return n;
}

double CoeffPyramid::energy() const {
  double e = 0.0;
  for (const auto& v : lowpass.values()) e += std::norm(v);
  for (const auto& lv : detail)
    for (const auto& b : lv)
      for (const auto& v : b.values()) e += std::norm(v);
  return e;
}

CoeffPyramid forward(const RealGrid& image, const TransformSpec& spec) {
  return FrameTransform(spec, image.rows(), image.cols()).forward(image);
}

RealGrid inverse(const CoeffPyramid& pyramid, const TransformSpec& spec) {
  return FrameTransform(spec, pyramid.rows, pyramid.cols).inverse(pyramid);
}

CoeffPyramid forward_undecimated(const RealGrid& image, const TransformSpec& spec) {
  TransformSpec s = spec;
  s.mode = TransformMode::undecimated;
  return forward(image, s);
}

RealGrid inverse_undecimated(const CoeffPyramid& pyramid, const TransformSpec& spec) {
  TransformSpec s = spec;
  s.mode = TransformMode::undecimated;
  return inverse(pyramid, s);
}

double response_l2_norm(const std::vector<Complex>& samples) {
  if (samples.empty()) return 0.0;
  double s = 0.0;
  for (const auto& v : samples) s += std::norm(v);
  return std::sqrt(s / static_cast<double>(samples.size()));
}

std::size_t real_dof(const CoeffPyramid& p, const FilterBank2D& bank) {
  if (p.detail.empty() || p.detail[0].size() != bank.highpass.size())
    throw StructuralError("real_dof: pyramid does not match bank");
  std::size_t n = p.lowpass.size();  // the lowpass filter is its own partner
  for (const auto& lv : p.detail) {
    for (std::size_t b = 0; b < lv.size(); ++b) {
      int partner = bank.conjugate_partner(static_cast<int>(b));
      if (partner == static_cast<int>(b))
        n += lv[b].size();
      else if (partner > static_cast<int>(b))
        n += 2 * lv[b].size();
    }
  }
  return n;
}

std::string dump_pyramid(const CoeffPyramid& p, const FilterBank2D& bank) {
  std::ostringstream os;
  os << "pyramid " << p.rows << " " << p.cols << " levels " << p.levels << " bank " << p.bank_tag
     << " mode " << (p.mode == TransformMode::decimated ? "decimated" : "undecimated") << "\n";
  char buf[96];
  auto dump = [&](const ComplexGrid& g) {
    for (const auto& v : g.values()) {
      std::snprintf(buf, sizeof buf, "%.12e %.12e\n", v.real(), v.imag());
      os << buf;
    }
  };
  for (int l = 0; l < p.levels; ++l) {
    for (std::size_t b = 0; b < p.detail[l].size(); ++b) {
      const auto& g = p.detail[l][b];
      os << "band " << l + 1 << " " << b << " " << bank.highpass[b].label << " " << g.rows() << " "
         << g.cols() << "\n";
      dump(g);
    }
  }
  os << "lowpass " << p.lowpass.rows() << " " << p.lowpass.cols() << "\n";
  dump(p.lowpass);
  return os.str();
}

}  // namespace tpctf
