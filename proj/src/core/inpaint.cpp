#include "tpctf/inpaint.hpp"

#include <algorithm>
#include <cmath>

namespace tpctf {

namespace {

void check_inputs(const RealGrid& y, const Mask& mask) {
  if (!y.same_shape(RealGrid(mask.rows(), mask.cols())))
    throw StructuralError("inpaint: mask shape does not match the image");
  if (mask.count_observed() == 0) throw DataError("inpaint: mask has no observed pixels");
}

RealGrid project(const RealGrid& y, const Mask& mask) {
  RealGrid out(y.rows(), y.cols());
  for (std::size_t k = 0; k < y.size(); ++k) out[k] = mask.observed(k) ? y[k] : 0.0;
  return out;
}

double norm2(const RealGrid& g) {
  double s = 0.0;
  for (double v : g.values()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

std::size_t Mask::count_observed() const {
  std::size_t n = 0;
  for (auto v : grid_.values()) n += v != 0;
  return n;
}

double Mask::missing_ratio() const {
  if (grid_.empty()) return 0.0;
  return 1.0 - static_cast<double>(count_observed()) / static_cast<double>(grid_.size());
}

Schedule make_schedule(double lambda_min, double lambda_mid, double lambda_max, int n1, double tol1,
                       int n2, double tol2) {
  if (n1 < 2) throw ConfigError("schedule: N1 >= 2 required");
  if (n2 < 1) throw ConfigError("schedule: N2 >= 1 required");
  if (!(tol1 > 0.0) || !(tol2 > 0.0)) throw ConfigError("schedule: tolerances must be positive");
  if (!(lambda_min > 0.0)) throw ConfigError("schedule: lambda_min must be positive");
  if (!(lambda_min <= lambda_mid) || !(lambda_mid <= lambda_max))
    throw ConfigError("schedule: lambda_min <= lambda_mid <= lambda_max required");
  Schedule s;
  s.lambda_min = lambda_min;
  s.lambda_mid = lambda_mid;
  s.lambda_max = lambda_max;
  s.n1 = n1;
  s.n2 = n2;
  s.tol1 = tol1;
  s.tol2 = tol2;
  const double r1 = lambda_mid / lambda_max;
  const double r2 = lambda_min / lambda_mid;
  for (int i = 1; i <= n1; ++i)
    s.lambda1.push_back(std::pow(r1, static_cast<double>(i - n1) / (n1 - 1)) * lambda_mid);
  for (int i = 1; i <= n2; ++i)
    s.lambda2.push_back(std::pow(r2, static_cast<double>(i - n2) / n2) * lambda_min);
  return s;
}

Schedule make_schedule(double sigma, double r) {
  if (!(sigma >= 0.0)) throw ConfigError("schedule: sigma must be nonnegative");
  if (!(r >= 0.0) || !(r < 1.0)) throw ConfigError("schedule: missing ratio must lie in [0, 1)");
  const double lambda_max = 512.0;
  const double lambda_min = std::max(1.0, sigma * (1.0 - r * r / 2.0));
  const double lambda_mid = std::min(std::max(2.0 * lambda_min + 10.0, 20.0), lambda_max);
  if (r < 0.5) return make_schedule(lambda_min, lambda_mid, lambda_max, 5, 5e-3, 8, 1e-4);
  return make_schedule(lambda_min, lambda_mid, lambda_max, 8, 5e-3, 5, 1e-3);
}

int default_levels(int rows, int cols) {
  const int side = std::min(rows, cols);
  int levels = side >= 256 ? 4 : 3;
  while (levels > 1 && (side >> (levels - 1)) < 8) --levels;
  return levels;
}

InpaintResult inpaint(const RealGrid& y, const Mask& mask, const InpaintConfig& cfg,
                      const IterationObserver& observer) {
  check_inputs(y, mask);
  if (cfg.max_iterations < 1) throw ConfigError("inpaint: iteration cap must be >= 1");

  InpaintResult res;
  res.missing_ratio = mask.missing_ratio();
  res.schedule = cfg.schedule ? *cfg.schedule : make_schedule(cfg.sigma, res.missing_ratio);
  res.levels = cfg.levels > 0 ? cfg.levels : default_levels(y.rows(), y.cols());
  const Schedule& s = res.schedule;
  if (static_cast<int>(s.lambda1.size()) != s.n1 || static_cast<int>(s.lambda2.size()) != s.n2)
    throw ConfigError("inpaint: schedule sequences do not match N1/N2");

  FrameTransform t({build_tpctf2d(build_ctf_bank(cfg.bank)), res.levels, TransformMode::decimated},
                   y.rows(), y.cols());
  ShrinkContext ctx = make_shrink_context(t, 0.0, cfg.norm_mode);
  ctx.window_radius = cfg.window_radius;

  const RealGrid py = project(y, mask);
  const double py_norm = norm2(py);
  if (py_norm == 0.0) throw DataError("inpaint: observed region carries zero energy");

  RealGrid x(y.rows(), y.cols());
  RealGrid work(y.rows(), y.cols());
  int i = 1;
  double lambda = s.lambda1[0];
  res.lambdas.push_back(lambda);
  bool done = false;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    for (std::size_t k = 0; k < x.size(); ++k) work[k] = mask.observed(k) ? y[k] : x[k];
    ctx.lambda = lambda;
    RealGrid next = t.inverse(bivariate_shrink(t.forward(work), ctx));

    double diff = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (!mask.observed(k)) diff += (next[k] - x[k]) * (next[k] - x[k]);
    const double err = std::sqrt(diff) / py_norm;

    IterationEvent ev;
    ev.iteration = iter;
    ev.stage = i;
    ev.lambda = lambda;
    ev.error = err;
    ev.working = &work;
    ev.next = &next;

    if (err < s.tol1 && i < s.n1) {
      ++i;
      lambda = s.lambda1[i - 1];
      ev.advanced = true;
    } else if (err < s.tol2 && s.n1 <= i && i < s.n1 + s.n2) {
      ++i;
      lambda = s.lambda2[i - s.n1 - 1];
      ev.advanced = true;
    } else if (err < s.tol2 && i == s.n1 + s.n2) {
      ev.advanced = true;
      done = true;
    }
    if (ev.advanced && !done) res.lambdas.push_back(lambda);
    if (observer) observer(ev);

    x = std::move(next);
    res.iterations = iter;
    res.final_error = err;
    if (done) break;
  }

  res.thresholds_completed = i - 1 + (done ? 1 : 0);
  res.hit_iteration_cap = !done;
  if (cfg.paste_observed)
    for (std::size_t k = 0; k < x.size(); ++k)
      if (mask.observed(k)) x[k] = y[k];
  res.image = std::move(x);
  return res;
}

ThresholdSequence sequence_from_schedule(const Schedule& s, int max_iterations) {
  ThresholdSequence seq;
  seq.max_iterations = max_iterations;
  for (double v : s.lambda1) {
    seq.values.push_back(v);
    seq.tolerances.push_back(s.tol1);
  }
  // The last Lambda_1 value already advances under tol2 in Algorithm 2.
  seq.tolerances.back() = s.tol2;
  for (double v : s.lambda2) {
    seq.values.push_back(v);
    seq.tolerances.push_back(s.tol2);
  }
  return seq;
}

GenericResult iterative_inpaint_generic(const RealGrid& y, const Mask& mask, const TransformSpec& spec,
                                        ThresholdRule rule, const ThresholdSequence& seq,
                                        NormMode norm_mode, const IterationObserver& observer) {
  check_inputs(y, mask);
  if (seq.values.empty() || seq.values.size() != seq.tolerances.size())
    throw ConfigError("generic: threshold values and tolerances must be non-empty and equal length");
  for (std::size_t k = 0; k < seq.values.size(); ++k) {
    if (seq.values[k] < 0.0) throw ConfigError("generic: thresholds must be nonnegative");
    if (k > 0 && seq.values[k] > seq.values[k - 1])
      throw ConfigError("generic: thresholds must be non-increasing");
  }
  if (seq.max_iterations < 1) throw ConfigError("generic: iteration cap must be >= 1");

  FrameTransform t(spec, y.rows(), y.cols());
  ShrinkContext ctx = make_shrink_context(t, 0.0, norm_mode);
  const RealGrid py = project(y, mask);
  const double py_norm = norm2(py);
  if (py_norm == 0.0) throw DataError("generic: observed region carries zero energy");

  GenericResult res;
  RealGrid x = py;
  std::size_t stage = 0;
  for (int iter = 1; iter <= seq.max_iterations; ++iter) {
    ctx.lambda = seq.values[stage];
    res.coefficients = apply_rule(t.forward(x), rule, ctx);
    RealGrid syn = t.inverse(res.coefficients);
    RealGrid next(y.rows(), y.cols());
    double diff = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      next[k] = mask.observed(k) ? y[k] : syn[k];
      diff += (next[k] - x[k]) * (next[k] - x[k]);
    }
    const double change = std::sqrt(diff) / py_norm;

    IterationEvent ev;
    ev.iteration = iter;
    ev.stage = static_cast<int>(stage) + 1;
    ev.lambda = ctx.lambda;
    ev.error = change;
    ev.working = &x;
    ev.next = &next;
    ev.advanced = change < seq.tolerances[stage];
    if (observer) observer(ev);

    x = std::move(next);
    res.iterations = iter;
    res.final_change = change;
    if (ev.advanced) {
      ++stage;
      res.stages_completed = static_cast<int>(stage);
      if (stage == seq.values.size()) break;
    }
  }
  res.hit_iteration_cap = res.stages_completed < static_cast<int>(seq.values.size());
  res.image = std::move(x);
  return res;
}

}  // namespace tpctf
