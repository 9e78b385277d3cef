#include "tpctf/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace tpctf {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Filter1D bump_filter(std::string name, BumpSpec spec, bool mirrored) {
  validate_bump(spec);
  Filter1D f;
  f.name = std::move(name);
  f.kind = Filter1D::Kind::bump;
  f.bump = spec;
  f.mirrored = mirrored;
  double c = 0.5 * (spec.cL + spec.cR);
  f.center = mirrored ? -c : c;
  return f;
}

Filter1D tap_filter(std::string name, std::vector<double> taps, int offset) {
  Filter1D f;
  f.name = std::move(name);
  f.kind = Filter1D::Kind::taps;
  f.taps = std::move(taps);
  f.offset = offset;
  return f;
}

// Full tensor product of a real tap bank; filter 0 is the lowpass.
FilterBank2D tensor_tap_bank(BankFamily family, std::string tag, std::vector<Filter1D> filters) {
  FilterBank2D bank;
  bank.family = family;
  bank.tag = std::move(tag);
  for (std::size_t i = 0; i < filters.size(); ++i) filters[i].partner = static_cast<int>(i);
  bank.filters1d = std::move(filters);
  int n = static_cast<int>(bank.filters1d.size());
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      TensorFilter t{u, v, bank.filters1d[u].name + "*" + bank.filters1d[v].name, std::nullopt};
      if (u == 0 && v == 0)
        bank.lowpass = t;
      else
        bank.highpass.push_back(t);
    }
  }
  return bank;
}

}  // namespace

double eval_pm(int m, double x) {
  if (m < 1) throw ConfigError("eval_pm: m must be >= 1");
  // Horner on the binomial sum; C(m+j-1, j) built incrementally.
  double sum = 0.0;
  double coef = 1.0;
  double xp = 1.0;
  for (int j = 0; j < m; ++j) {
    sum += coef * xp;
    xp *= x;
    coef = coef * static_cast<double>(m + j) / static_cast<double>(j + 1);
  }
  return std::pow(1.0 - x, m) * sum;
}

void validate_bump(const BumpSpec& s) {
  if (s.m < 1) throw ConfigError("bump: m must be >= 1");
  if (!(s.epsL > 0.0)) throw ConfigError("bump: epsL > 0 violated");
  if (!(s.epsR > 0.0)) throw ConfigError("bump: epsR > 0 violated");
  if (s.epsL + s.epsR > s.cR - s.cL + 1e-14)
    throw ConfigError("bump: epsL + epsR <= cR - cL violated");
}

double eval_bump(const BumpSpec& s, double xi) {
  if (xi <= s.cL - s.epsL || xi >= s.cR + s.epsR) return 0.0;
  if (xi < s.cL + s.epsL)
    return std::sin(0.5 * kPi * eval_pm(s.m, (s.cL + s.epsL - xi) / (2.0 * s.epsL)));
  if (xi <= s.cR - s.epsR) return 1.0;
  return std::sin(0.5 * kPi * eval_pm(s.m, (xi - s.cR + s.epsR) / (2.0 * s.epsR)));
}

double eval_bump_periodic(const BumpSpec& s, double xi) {
  xi = std::remainder(xi, 2.0 * kPi);  // [-pi, pi]
  return eval_bump(s, xi - 2.0 * kPi) + eval_bump(s, xi) + eval_bump(s, xi + 2.0 * kPi);
}

Complex Filter1D::response(double xi) const {
  if (kind == Kind::bump) return {eval_bump_periodic(bump, mirrored ? -xi : xi), 0.0};
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < taps.size(); ++i) {
    double k = static_cast<double>(offset + static_cast<int>(i));
    acc += taps[i] * std::polar(1.0, -k * xi);
  }
  return acc;
}

CtfParams tpctf6_params(int m) {
  CtfParams p;
  p.m = m;
  return p;
}

CtfBank1D build_ctf_bank(const CtfParams& p) {
  if (p.s < 1) throw ConfigError("ctf bank: s >= 1 violated");
  if (p.m < 1) throw ConfigError("ctf bank: m >= 1 violated");
  if (!(p.c1 > 0.0) || !(p.c1 < kPi)) throw ConfigError("ctf bank: 0 < c1 < pi violated");
  if (!(p.eps1 > 0.0)) throw ConfigError("ctf bank: eps1 > 0 violated");
  if (p.eps1 > p.c1) throw ConfigError("ctf bank: eps1 <= c1 violated");
  if (p.eps1 > kPi / 2.0 - p.c1) throw ConfigError("ctf bank: eps1 <= pi/2 - c1 violated");
  if (p.eps1 > (p.c1 + (p.s - 1) * kPi) / (2.0 * p.s))
    throw ConfigError("ctf bank: eps1 <= (c1 + (s-1)pi)/(2s) violated");
  if (!(p.eps0 > 0.0)) throw ConfigError("ctf bank: eps0 > 0 violated");
  if (!(p.eps0 < p.c1 - p.eps1)) throw ConfigError("ctf bank: eps0 < c1 - eps1 violated");

  CtfBank1D bank;
  bank.params = p;
  double w = (kPi - p.c1) / p.s;
  // The c1 edge carries eps1 on both sides; the remaining edges must fit
  // between neighbours, so they use the widest half-width that still does.
  bank.eps_inner = std::min({p.eps1, w - p.eps1, w / 2.0});
  if (!(bank.eps_inner > 0.0)) throw ConfigError("ctf bank: eps1 < (pi - c1)/s violated");

  for (int l = 1; l <= p.s; ++l) bank.edges.push_back(p.c1 + (kPi - p.c1) * (l - 1) / p.s);
  bank.edges.push_back(kPi);

  bank.a = bump_filter("a", {-p.c1, p.c1, p.eps1, p.eps1, p.m}, false);
  bank.ap = bump_filter("ap", {0.0, p.c1, p.eps0, p.eps1, p.m}, false);
  bank.an = bump_filter("an", {0.0, p.c1, p.eps0, p.eps1, p.m}, true);
  for (int l = 1; l <= p.s; ++l) {
    double epsL = l == 1 ? p.eps1 : bank.eps_inner;
    BumpSpec spec{bank.edges[l - 1], bank.edges[l], epsL, bank.eps_inner, p.m};
    bank.bp.push_back(bump_filter("b" + std::to_string(l) + "p", spec, false));
    bank.bn.push_back(bump_filter("b" + std::to_string(l) + "n", spec, true));
  }
  return bank;
}

const char* family_name(BankFamily f) {
  switch (f) {
    case BankFamily::tpctf: return "tpctf";
    case BankFamily::spline: return "spline";
    case BankFamily::dct: return "dct";
  }
  return "unknown";
}

bool FilterBank2D::has_taps() const {
  return std::all_of(filters1d.begin(), filters1d.end(),
                     [](const Filter1D& f) { return f.kind == Filter1D::Kind::taps; });
}

Complex FilterBank2D::response(const TensorFilter& f, double xi1, double xi2) const {
  return filters1d[f.row].response(xi1) * filters1d[f.col].response(xi2);
}

int FilterBank2D::conjugate_partner(int band) const {
  if (band < 0 || band >= static_cast<int>(highpass.size()))
    throw StructuralError("conjugate_partner: band index out of range");
  int pr = filters1d[highpass[band].row].partner;
  int pc = filters1d[highpass[band].col].partner;
  for (std::size_t k = 0; k < highpass.size(); ++k)
    if (highpass[k].row == pr && highpass[k].col == pc) return static_cast<int>(k);
  throw StructuralError("conjugate_partner: bank is not closed under conjugation");
}

int FilterBank2D::find(const std::string& label) const {
  for (std::size_t k = 0; k < highpass.size(); ++k)
    if (highpass[k].label == label) return static_cast<int>(k);
  return -1;
}

FilterBank2D build_tpctf2d(const CtfBank1D& b) {
  FilterBank2D bank;
  bank.family = BankFamily::tpctf;
  bank.tag = "tpctf" + std::to_string(2 * b.params.s + 2);

  bank.filters1d.push_back(b.a);
  bank.filters1d.push_back(b.ap);
  bank.filters1d.push_back(b.an);
  for (int l = 0; l < b.params.s; ++l) {
    bank.filters1d.push_back(b.bp[l]);
    bank.filters1d.push_back(b.bn[l]);
  }
  // Positive/negative filters come in adjacent pairs after `a`.
  bank.filters1d[0].partner = 0;
  for (std::size_t i = 1; i < bank.filters1d.size(); i += 2) {
    bank.filters1d[i].partner = static_cast<int>(i + 1);
    bank.filters1d[i + 1].partner = static_cast<int>(i);
  }

  bank.lowpass = {0, 0, "a*a", 0.0};
  int n = static_cast<int>(bank.filters1d.size());
  for (int u = 1; u < n; ++u) {
    for (int v = 1; v < n; ++v) {
      if (u <= 2 && v <= 2) continue;
      const Filter1D& fu = bank.filters1d[u];
      const Filter1D& fv = bank.filters1d[v];
      double ang = std::atan2(fv.center, fu.center) * 180.0 / kPi;
      ang = std::fmod(ang + 360.0, 180.0);
      if (ang >= 180.0 - 1e-9) ang = 0.0;
      bank.highpass.push_back({u, v, fu.name + "*" + fv.name, ang});
    }
  }
  return bank;
}

FilterBank2D build_tpctf6(int m) { return build_tpctf2d(build_ctf_bank(tpctf6_params(m))); }

FilterBank2D build_spline_bank(SplineVariant variant) {
  std::vector<Filter1D> f;
  if (variant == SplineVariant::cubic) {
    const double r6 = std::sqrt(6.0);
    f.push_back(tap_filter("a", {1 / 16.0, 4 / 16.0, 6 / 16.0, 4 / 16.0, 1 / 16.0}, -2));
    f.push_back(tap_filter("b1", {1 / 8.0, 2 / 8.0, 0.0, -2 / 8.0, -1 / 8.0}, -2));
    f.push_back(tap_filter("b2", {-r6 / 16, 0.0, 2 * r6 / 16, 0.0, -r6 / 16}, -2));
    f.push_back(tap_filter("b3", {-1 / 8.0, 2 / 8.0, 0.0, -2 / 8.0, 1 / 8.0}, -2));
    f.push_back(tap_filter("b4", {1 / 16.0, -4 / 16.0, 6 / 16.0, -4 / 16.0, 1 / 16.0}, -2));
    return tensor_tap_bank(BankFamily::spline, "spline-cubic", std::move(f));
  }
  const double r2 = std::sqrt(2.0);
  f.push_back(tap_filter("a", {0.25, 0.5, 0.25}, -1));
  f.push_back(tap_filter("b1", {-r2 / 4, 0.0, r2 / 4}, -1));
  f.push_back(tap_filter("b2", {-0.25, 0.5, -0.25}, -1));
  return tensor_tap_bank(BankFamily::spline, "spline-linear", std::move(f));
}

std::vector<double> dct_matrix(int m) {
  if (m < 1) throw ConfigError("dct: m must be >= 1");
  std::vector<double> b(static_cast<std::size_t>(m) * m);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) {
      double e = j == 0 ? 1.0 : std::sqrt(2.0);
      b[static_cast<std::size_t>(k) * m + j] =
          e * std::cos(j * (2.0 * k + 1.0) * kPi / (2.0 * m)) / std::sqrt(static_cast<double>(m));
    }
  }
  return b;
}

FilterBank2D build_dct_bank(int m) {
  if (m < 2) throw ConfigError("dct bank: m >= 2 violated");
  std::vector<double> b = dct_matrix(m);
  std::vector<Filter1D> f;
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (int j = 0; j < m; ++j) {
    std::vector<double> taps(m);
    for (int k = 0; k < m; ++k) taps[k] = scale * b[static_cast<std::size_t>(k) * m + j];
    f.push_back(tap_filter("B" + std::to_string(j + 1), std::move(taps), 1));
  }
  return tensor_tap_bank(BankFamily::dct, "dct" + std::to_string(m), std::move(f));
}

double grid_frequency(int k, int n) {
  double xi = 2.0 * kPi * k / n;
  return 2 * k <= n ? xi : xi - 2.0 * kPi;
}

SampledBank sample_bank(const FilterBank2D& bank, int n, int level) {
  if (n < 4 || n % 2 != 0) throw ConfigError("sample_bank: N must be even and >= 4");
  if (bank.family == BankFamily::tpctf && n < 8)
    throw ConfigError("sample_bank: TP-CTF filters need N >= 8");
  SampledBank s;
  s.n = n;
  s.level = level;
  s.filters1d.resize(bank.filters1d.size());
  for (std::size_t f = 0; f < bank.filters1d.size(); ++f) {
    s.filters1d[f].resize(n);
    for (int k = 0; k < n; ++k) s.filters1d[f][k] = bank.filters1d[f].response(grid_frequency(k, n));
  }
  return s;
}

double IdentityReport::worst() const {
  return std::max({partition, half_shift[0], half_shift[1], half_shift[2]});
}

IdentityReport verify_bank_identities(const FilterBank2D& bank, const SampledBank& s) {
  const int n = s.n;
  const int h = n / 2;
  std::vector<const TensorFilter*> all{&bank.lowpass};
  for (const auto& f : bank.highpass) all.push_back(&f);

  IdentityReport rep;
  const int shifts[4][2] = {{0, 0}, {h, 0}, {0, h}, {h, h}};
  for (int k1 = 0; k1 < n; ++k1) {
    for (int k2 = 0; k2 < n; ++k2) {
      for (int e = 0; e < 4; ++e) {
        int j1 = (k1 + shifts[e][0]) % n;
        int j2 = (k2 + shifts[e][1]) % n;
        Complex acc{0.0, 0.0};
        for (const TensorFilter* f : all) acc += s.value(*f, k1, k2) * std::conj(s.value(*f, j1, j2));
        if (e == 0)
          rep.partition = std::max(rep.partition, std::abs(acc - 1.0));
        else
          rep.half_shift[e - 1] = std::max(rep.half_shift[e - 1], std::abs(acc));
      }
    }
  }
  return rep;
}

IdentityReport verify_bank_identities(const FilterBank2D& bank, int n) {
  return verify_bank_identities(bank, sample_bank(bank, n));
}

IdentityReport verify_bank_identities_1d(const std::vector<Filter1D>& filters, int n) {
  if (n < 4 || n % 2 != 0) throw ConfigError("verify: N must be even and >= 4");
  IdentityReport rep;
  for (int k = 0; k < n; ++k) {
    double xi = grid_frequency(k, n);
    Complex p{0.0, 0.0};
    Complex q{0.0, 0.0};
    for (const auto& f : filters) {
      Complex v = f.response(xi);
      p += v * std::conj(v);
      q += v * std::conj(f.response(xi + kPi));
    }
    rep.partition = std::max(rep.partition, std::abs(p - 1.0));
    rep.half_shift[0] = std::max(rep.half_shift[0], std::abs(q));
  }
  return rep;
}

std::string describe_bank(const FilterBank2D& bank) {
  std::ostringstream os;
  os << "bank " << bank.tag << " family " << family_name(bank.family) << " filters1d "
     << bank.filters1d.size() << " highpass " << bank.highpass.size() << "\n";
  for (const auto& f : bank.filters1d) {
    os << "filter " << f.name;
    if (f.kind == Filter1D::Kind::bump) {
      const BumpSpec& b = f.bump;
      os << " bump" << (f.mirrored ? " mirrored" : "") << " periodic"
         << " rise [" << fmt(b.cL - b.epsL) << "," << fmt(b.cL + b.epsL) << "]"
         << " flat [" << fmt(b.cL + b.epsL) << "," << fmt(b.cR - b.epsR) << "]"
         << " fall [" << fmt(b.cR - b.epsR) << "," << fmt(b.cR + b.epsR) << "]"
         << " m " << b.m;
    } else {
      os << " taps offset " << f.offset << " [";
      for (std::size_t i = 0; i < f.taps.size(); ++i) os << (i ? "," : "") << fmt(f.taps[i]);
      os << "]";
    }
    os << "\n";
  }
  auto line = [&](const char* kind, const TensorFilter& t) {
    os << kind << " " << t.label;
    if (t.angle_deg) os << " angle " << fmt(std::round(*t.angle_deg * 1e9) / 1e9);
    os << "\n";
  };
  line("lowpass", bank.lowpass);
  for (const auto& t : bank.highpass) line("highpass", t);
  return os.str();
}

}  // namespace tpctf
