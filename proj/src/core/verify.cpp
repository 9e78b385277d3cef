#include "tpctf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>

#include "tpctf/balanced.hpp"
#include "tpctf/filterbank.hpp"
#include "tpctf/random.hpp"
#include "tpctf/transform.hpp"

namespace tpctf {

namespace {

std::string line(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string line(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return std::string(buf) + "\n";
}

}  // namespace

VerifyOutcome verify_banks() {
  VerifyOutcome out;
  out.passed = true;
  std::string& t = out.text;
  auto check = [&](const std::string& name, int n, const IdentityReport& r, bool decimated) {
    double worst = decimated ? r.worst() : r.partition;
    bool ok = worst <= 1e-12;
    out.passed = out.passed && ok;
    t += line("bank %-14s N=%-4d partition=%.3e half_shift=%.3e/%.3e/%.3e %s", name.c_str(), n, r.partition,
              r.half_shift[0], r.half_shift[1], r.half_shift[2], ok ? "PASS" : "FAIL");
  };
  FilterBank2D tp = build_tpctf6();
  for (int n : {16, 64, 256}) check(tp.tag, n, verify_bank_identities(tp, n), true);
  FilterBank2D cubic = build_spline_bank(SplineVariant::cubic);
  FilterBank2D linear = build_spline_bank(SplineVariant::linear);
  FilterBank2D dct = build_dct_bank(7);
  check(cubic.tag, 64, verify_bank_identities(cubic, 64), true);
  check(linear.tag, 64, verify_bank_identities(linear, 64), true);
  check(dct.tag, 64, verify_bank_identities(dct, 64), false);
  return out;
}

VerifyOutcome verify_transforms(std::uint64_t seed, int count) {
  VerifyOutcome out;
  out.passed = true;
  Rng rng(seed);
  const FilterBank2D bank = build_tpctf6();
  const int sizes[3] = {32, 64, 128};
  double worst_rt = 0.0;
  double worst_energy = 0.0;
  for (int i = 0; i < count; ++i) {
    const int n = sizes[rng.uniform_int(0, 2)];
    int max_levels = 1;
    while (max_levels < 4 && (n >> max_levels) >= 8) ++max_levels;
    const int levels = rng.uniform_int(1, max_levels);
    RealGrid x(n, n);
    for (auto& v : x.values()) v = rng.uniform(-128.0, 255.0);
    FrameTransform t({bank, levels, TransformMode::decimated}, n, n);
    CoeffPyramid c = t.forward(x);
    RealGrid y = t.inverse(c);
    double sup = 0.0;
    double xmax = 0.0;
    double ex = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      sup = std::max(sup, std::abs(y[k] - x[k]));
      xmax = std::max(xmax, std::abs(x[k]));
      ex += x[k] * x[k];
    }
    const double rt = sup / xmax;
    const double en = std::abs(c.energy() / ex - 1.0);
    worst_rt = std::max(worst_rt, rt);
    worst_energy = std::max(worst_energy, en);
    const bool ok = rt <= 1e-10 && en <= 1e-10;
    out.passed = out.passed && ok;
    out.text += line("transform N=%-3d levels=%d roundtrip=%.3e energy=%.3e %s", n, levels, rt, en, ok ? "PASS" : "FAIL");
  }
  out.text += line("transform worst roundtrip=%.3e worst energy=%.3e", worst_rt, worst_energy);
  return out;
}

VerifyOutcome verify_grouping_instances(std::uint64_t seed, int count) {
  VerifyOutcome out;
  out.passed = true;
  const double kappas[3] = {0.1, 0.5, 2.0};
  for (int i = 0; i < count; ++i) {
    RandomProblemOptions opt;
    opt.kappa = kappas[i % 3];
    opt.uniform_weights = (i / 3) % 2 == 0;
    opt.tight = (i / 6) % 2 == 0;
    opt.projection_B = (i / 12) % 2 == 0;
    const std::uint64_t s = stream_u64(seed, static_cast<std::uint64_t>(i));
    BalancedProblem p = random_problem(s, opt);
    GroupingReport r = verify_grouping(p, 1e-12);
    const bool ok = r.passed() && r.kkt <= 1e-6;
    out.passed = out.passed && ok;
    out.text += line("instance seed=%llu d=%d n=%d kappa=%g weights=%s D=%s worst_margin=%.3e kkt=%.3e %s",
                     static_cast<unsigned long long>(s), p.D->rows(), p.n(), p.kappa,
                     opt.uniform_weights ? "uniform" : "varied", opt.tight ? "tight" : "general", r.worst_margin,
                     r.kkt, ok ? "PASS" : "FAIL");
  }
  return out;
}

}  // namespace tpctf
