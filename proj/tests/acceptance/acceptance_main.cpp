// Acceptance suite: one status line per criterion, nonzero exit on any FAIL.
//
// Environment:
//   TPCTF_IMAGE_DIR      directory holding lena.pgm and barbara.pgm (256x256)
//   TPCTF_UPDATE_GOLDEN  rewrite the synthetic PSNR goldens instead of comparing
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tpctf/balanced.hpp"
#include "tpctf/experiment.hpp"
#include "tpctf/filterbank.hpp"
#include "tpctf/inpaint.hpp"
#include "tpctf/random.hpp"
#include "tpctf/shrinkage.hpp"
#include "tpctf/synthetic.hpp"
#include "tpctf/transform.hpp"
#include "tpctf/verify.hpp"

using namespace tpctf;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
  Status status = Status::fail;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Outcome bank_identities() {
  const auto t0 = Clock::now();
  const FilterBank2D bank = build_tpctf6();
  double worst = 0.0;
  for (int n : {16, 64, 256}) worst = std::max(worst, verify_bank_identities(bank, n).worst());
  const double t = seconds_since(t0);
  const bool ok = worst <= 1e-12 && t < 1.0;
  return {ok ? Status::pass : Status::fail, fmt("N=16,64,256 max deviation %.3e, %.3f s", worst, t)};
}

Outcome reconstruction() {
  const auto t0 = Clock::now();
  Rng rng(2024);
  const FilterBank2D bank = build_tpctf6();
  double worst_rt = 0.0;
  double worst_en = 0.0;
  int max_levels_seen = 0;
  for (int i = 0; i < 100; ++i) {
    // sides are multiples of 8 in [32, 128]
    const int rows = 8 * rng.uniform_int(4, 16);
    const int cols = 8 * rng.uniform_int(4, 16);
    std::vector<int> feasible;
    for (int l = 1; l <= 4; ++l) {
      const int d = 1 << l;
      if (rows % d == 0 && cols % d == 0 && (rows >> (l - 1)) >= 8 && (cols >> (l - 1)) >= 8) feasible.push_back(l);
    }
    const int levels = feasible[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(feasible.size()) - 1))];
    max_levels_seen = std::max(max_levels_seen, levels);
    RealGrid x(rows, cols);
    for (auto& v : x.values()) v = rng.uniform(0.0, 255.0);
    FrameTransform t({bank, levels, TransformMode::decimated}, rows, cols);
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
    worst_rt = std::max(worst_rt, sup / xmax);
    worst_en = std::max(worst_en, std::abs(c.energy() / ex - 1.0));
  }
  const double t = seconds_since(t0);
  const bool ok = worst_rt <= 1e-10 && worst_en <= 1e-10 && t < 30.0;
  return {ok ? Status::pass : Status::fail,
          fmt("100 images, levels up to %d, roundtrip %.3e, energy %.3e, %.2f s", max_levels_seen, worst_rt,
              worst_en, t)};
}

Outcome redundancy() {
  const FilterBank2D bank = build_tpctf6();
  const std::size_t n = 128;
  const std::size_t d = n * n;
  bool ok = true;
  std::string detail;
  double prev = 0.0;
  for (int levels = 1; levels <= 4; ++levels) {
    FrameTransform t({bank, levels, TransformMode::decimated}, static_cast<int>(n), static_cast<int>(n));
    const std::size_t dof = real_dof(t.zeros(), bank);
    // 16 conjugate pairs of full complex bands per level plus a real lowpass
    std::size_t expected = 0;
    for (int l = 1; l <= levels; ++l) expected += 32 * (n >> l) * (n >> l);
    expected += (n >> levels) * (n >> levels);
    const double rate = static_cast<double>(dof) / static_cast<double>(d);
    ok = ok && dof == expected && 3 * dof <= 32 * d && rate > prev;
    prev = rate;
    detail += fmt("%sL%d %.4f", levels == 1 ? "" : ", ", levels, rate);
  }
  // distance to 32/3 shrinks by 4 per level
  ok = ok && std::abs(prev - 32.0 / 3.0) <= (32.0 / 3.0 - 1.0) / 256.0 + 1e-12;
  return {ok ? Status::pass : Status::fail, "dof/d " + detail + " (limit 10.6667)"};
}

Outcome frame_oracle() {
  FrameTransform t({build_tpctf6(), 1, TransformMode::decimated}, 16, 16);
  const Mat D = assemble_synthesis_matrix(t);
  const Mat g = D * D.transpose() - Mat::Identity(D.rows(), D.rows());
  const double inf_norm = g.cwiseAbs().rowwise().sum().maxCoeff();
  return {inf_norm <= 1e-9 ? Status::pass : Status::fail,
          fmt("D is %ldx%ld, ||DD^T - I||_inf = %.3e", static_cast<long>(D.rows()), static_cast<long>(D.cols()),
              inf_norm)};
}

Outcome grouping() {
  const auto t0 = Clock::now();
  VerifyOutcome v = verify_grouping_instances(7, 200);
  int failed_lines = 0;
  std::istringstream in(v.text);
  for (std::string line; std::getline(in, line);)
    if (line.find("FAIL") != std::string::npos) ++failed_lines;

  Rng rng(99);
  double worst_agree = 0.0;
  for (int i = 0; i < 20; ++i) {
    Mat E(6, 10);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 10; ++c) E(r, c) = rng.normal();
    Vec b(6);
    for (int r = 0; r < 6; ++r) b[r] = rng.normal();
    const double lambda = rng.uniform(0.05, 1.0);
    const double kappa = rng.uniform(0.1, 2.0);
    SolveResult cd = solve_elastic_net_cd(E, b, lambda, kappa);
    SolveResult bal = solve_elastic_net(E, b, lambda, kappa);
    worst_agree = std::max(worst_agree, (cd.c - bal.c).cwiseAbs().maxCoeff());
  }
  const double t = seconds_since(t0);
  const bool ok = v.passed && failed_lines == 0 && worst_agree <= 1e-8 && t < 60.0;
  return {ok ? Status::pass : Status::fail,
          fmt("200 problems, %d failing; elastic-net path gap %.3e; %.2f s", failed_lines, worst_agree, t)};
}

struct FixtureCase {
  std::string fixture;
  int size;
  double rate;
  double sigma;
  const char* algorithm;
};

std::string golden_path() { return std::string(TPCTF_TEST_DATA) + "/golden/fixture_psnr.txt"; }

Outcome psnr_reproduction() {
  std::string detail;
  bool failed = false;
  bool skipped = false;

  const char* dir = std::getenv("TPCTF_IMAGE_DIR");
  struct ReferenceCase {
    const char* image;
    double rate;
    double sigma;
    double target;
  };
  const ReferenceCase reference[] = {
      {"lena", 0.5, 0.0, 33.60}, {"lena", 0.8, 0.0, 28.15}, {"barbara", 0.5, 0.0, 36.25}, {"lena", 0.5, 10.0, 30.40}};
  for (const auto& pc : reference) {
    const std::string path = dir ? std::string(dir) + "/" + pc.image + ".pgm" : std::string();
    if (!dir || !std::filesystem::exists(path)) {
      skipped = true;
      continue;
    }
    ExperimentSpec spec;
    spec.image_path = path;
    spec.mask_rate = pc.rate;
    spec.mask_seed = 1;
    spec.sigma = pc.sigma;
    spec.seed = 1;
    ExperimentReport r = run_experiment(spec);
    const bool ok = std::abs(r.psnr - pc.target) <= 1.5 && r.seconds <= 300.0;
    failed = failed || !ok;
    detail += fmt("%s %.0f%% s%.0f %.2f dB (target %.2f, %.0f s) %s; ", pc.image, 100 * pc.rate, pc.sigma, r.psnr,
                  pc.target, r.seconds, ok ? "ok" : "off");
  }
  if (skipped) detail += "standard images not supplied (set TPCTF_IMAGE_DIR); ";

  const std::vector<FixtureCase> cases = {
      {"shapes", 64, 0.5, 0.0, "tpctf6"},     {"scene", 64, 0.5, 0.0, "tpctf6"},
      {"scene", 64, 0.8, 0.0, "tpctf6"},      {"sinusoid", 64, 0.5, 0.0, "tpctf6"},
      {"checkerboard", 64, 0.5, 0.0, "tpctf6"}, {"scene", 64, 0.5, 10.0, "tpctf6"},
      {"scene", 64, 0.5, 0.0, "spline"},      {"scene", 64, 0.5, 0.0, "dct"},
  };
  std::ostringstream produced;
  std::vector<double> values;
  for (const auto& fc : cases) {
    ExperimentSpec spec;
    spec.image = make_fixture(fc.fixture, fc.size, fc.size);
    spec.image_name = fc.fixture + std::to_string(fc.size);
    spec.mask_rate = fc.rate;
    spec.mask_seed = 1;
    spec.sigma = fc.sigma;
    spec.seed = 1;
    spec.algorithm = parse_algorithm(fc.algorithm);
    ExperimentReport r = run_experiment(spec);
    values.push_back(r.psnr);
    produced << fmt("%s\t%d\t%.2f\t%.1f\t%s\t%.6f\n", fc.fixture.c_str(), fc.size, fc.rate, fc.sigma, fc.algorithm,
                    r.psnr);
  }
  if (std::getenv("TPCTF_UPDATE_GOLDEN")) {
    std::ofstream(golden_path()) << produced.str();
    detail += "synthetic goldens rewritten";
  } else {
    std::ifstream in(golden_path());
    std::vector<double> golden;
    for (std::string line; std::getline(in, line);) {
      const auto tab = line.rfind('\t');
      if (tab != std::string::npos) golden.push_back(std::stod(line.substr(tab + 1)));
    }
    double worst = 0.0;
    bool shape_ok = golden.size() == values.size();
    for (std::size_t k = 0; shape_ok && k < values.size(); ++k) worst = std::max(worst, std::abs(values[k] - golden[k]));
    const bool ok = shape_ok && worst <= 1e-3;
    failed = failed || !ok;
    detail += shape_ok ? fmt("%zu synthetic goldens, max drift %.2e dB", values.size(), worst)
                       : std::string("synthetic golden file missing or malformed");
  }
  if (failed) return {Status::fail, detail};
  return {skipped ? Status::skip : Status::pass, detail};
}

Outcome schedule() {
  bool ok = true;
  int checked = 0;
  for (double sigma : {0.0, 5.0, 10.0, 30.0, 100.0})
    for (double r : {0.0, 0.25, 0.4999, 0.5, 0.8, 0.95}) {
      Schedule s = make_schedule(sigma, r);
      ok = ok && std::abs(s.lambda1.front() - 512.0) <= 1e-12;
      ok = ok && std::abs(s.lambda1.back() - s.lambda_mid) <= 1e-12;
      ok = ok && std::abs(s.lambda2.back() - s.lambda_min) <= 1e-12;
      if (r < 0.5)
        ok = ok && s.n1 == 5 && s.tol1 == 5e-3 && s.n2 == 8 && s.tol2 == 1e-4;
      else
        ok = ok && s.n1 == 8 && s.tol1 == 5e-3 && s.n2 == 5 && s.tol2 == 1e-3;
      ++checked;
    }
  return {ok ? Status::pass : Status::fail, fmt("%d (sigma, r) pairs, endpoints and parameter table exact", checked)};
}

Outcome shrinkage() {
  const Complex out = bivariate_threshold(4.0, 3.0, 1.0, 5.0);
  const double err = std::abs(out.real() - 3.30718);
  Rng rng(8);
  long violations = 0;
  for (int k = 0; k < 100000; ++k) {
    const Complex c(rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0));
    const Complex p(rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0));
    const double sn = rng.uniform(0.0, 10.0);
    const double ms = rng.uniform(0.0, 400.0);
    if (std::abs(bivariate_threshold(c, p, sn, ms)) > std::abs(c)) ++violations;
  }
  const bool ok = err <= 1e-5 && violations == 0;
  return {ok ? Status::pass : Status::fail,
          fmt("worked example %.6f (|err| %.1e), %ld expansions in 1e5 samples", out.real(), err, violations)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "tight-framelet identities", bank_identities},
      {2, "perfect reconstruction and isometry", reconstruction},
      {3, "redundancy accounting", redundancy},
      {4, "16x16 frame oracle", frame_oracle},
      {5, "grouping effect", grouping},
      {6, "PSNR reproduction", psnr_reproduction},
      {7, "schedule exactness", schedule},
      {8, "shrinkage checks", shrinkage},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Status::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Status::pass ? "PASS" : (o.status == Status::skip ? "SKIP" : "FAIL");
    if (o.status == Status::fail) ++failures;
    std::printf("criterion %d %-38s %s  %s\n", c.id, c.name, tag, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
