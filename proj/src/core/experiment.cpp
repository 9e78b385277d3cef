#include "tpctf/experiment.hpp"

#include <chrono>
#include <cstdio>

#include "tpctf/image_io.hpp"
#include "tpctf/metrics.hpp"
#include "tpctf/synthetic.hpp"

namespace tpctf {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::tpctf6: return "tpctf6";
    case Algorithm::spline: return "spline";
    case Algorithm::dct: return "dct";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "tpctf6") return Algorithm::tpctf6;
  if (name == "spline") return Algorithm::spline;
  if (name == "dct") return Algorithm::dct;
  throw ConfigError("unknown algorithm '" + name + "' (expected tpctf6, spline or dct)");
}

std::string ExperimentReport::deterministic_line() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s\t%s\t%g\t%llu\t%s\t%.4f\t%d", image.c_str(), mask.c_str(), sigma,
                static_cast<unsigned long long>(seed), algorithm.c_str(), psnr, iterations);
  return buf;
}

std::string ExperimentReport::line() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "\t%.3f", seconds);
  return deterministic_line() + buf;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  ExperimentReport rep;
  RealGrid clean = spec.image ? *spec.image : load_pgm(spec.image_path);
  rep.image = !spec.image_name.empty() ? spec.image_name : (spec.image_path.empty() ? "<memory>" : spec.image_path);

  Mask mask;
  if (!spec.mask_path.empty()) {
    mask = load_mask(spec.mask_path);
    if (mask.rows() != clean.rows() || mask.cols() != clean.cols())
      throw StructuralError("experiment: mask shape does not match the image");
    rep.mask = spec.mask_path;
  } else {
    mask = gen_random_mask(clean.cols(), clean.rows(), spec.mask_rate, spec.mask_seed);
    char buf[96];
    std::snprintf(buf, sizeof buf, "random:%g:%llu", spec.mask_rate, static_cast<unsigned long long>(spec.mask_seed));
    rep.mask = buf;
  }
  rep.sigma = spec.sigma;
  rep.seed = spec.seed;
  rep.algorithm = algorithm_name(spec.algorithm);

  RealGrid observed = add_gaussian_noise(clean, spec.sigma, spec.seed);
  for (std::size_t k = 0; k < observed.size(); ++k)
    if (!mask.observed(k)) observed[k] = 0.0;
  if (!spec.observed_path.empty()) save_pgm(observed, spec.observed_path);

  const auto start = std::chrono::steady_clock::now();
  if (spec.algorithm == Algorithm::tpctf6) {
    InpaintConfig cfg;
    cfg.sigma = spec.sigma;
    cfg.levels = spec.levels;
    cfg.paste_observed = spec.paste_observed;
    cfg.max_iterations = spec.max_iterations;
    InpaintResult r = inpaint(observed, mask, cfg);
    rep.restored = std::move(r.image);
    rep.iterations = r.iterations;
    rep.hit_iteration_cap = r.hit_iteration_cap;
  } else {
    TransformSpec ts;
    ThresholdRule rule;
    if (spec.algorithm == Algorithm::spline) {
      ts.bank = build_spline_bank(SplineVariant::cubic);
      rule = ThresholdRule::soft;
    } else {
      ts.bank = build_dct_bank(7);
      rule = ThresholdRule::local_soft;
    }
    ts.levels = spec.levels > 0 ? spec.levels : 1;
    ts.mode = TransformMode::undecimated;
    Schedule s = make_schedule(spec.sigma, mask.missing_ratio());
    GenericResult r = iterative_inpaint_generic(observed, mask, ts, rule,
                                                sequence_from_schedule(s, spec.max_iterations));
    rep.restored = std::move(r.image);
    rep.iterations = r.iterations;
    rep.hit_iteration_cap = r.hit_iteration_cap;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.psnr = psnr(clean, rep.restored);
  if (!spec.output_path.empty()) save_pgm(rep.restored, spec.output_path);
  return rep;
}

}  // namespace tpctf
