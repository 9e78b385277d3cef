#include "tpctf/balanced.hpp"

#include <cmath>
#include <limits>

#include "tpctf/random.hpp"

namespace tpctf {

namespace {

double soft_scalar(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

double relative_change(const Vec& next, const Vec& prev) {
  const double d = (next - prev).norm();
  if (d == 0.0) return 0.0;
  const double s = next.norm();
  return s == 0.0 ? std::numeric_limits<double>::infinity() : d / s;
}

// Value and gradient of the smooth part 1/2||BDc-b||^2 + kappa||(I-D^T D)c||^2.
class SmoothPart {
 public:
  explicit SmoothPart(const BalancedProblem& p) : p_(p) {
    if (p.n() <= 2048) {
      Mat D = p.D->dense();
      G_ = p.B->dense() * D;
      Mat M = Mat::Identity(p.n(), p.n()) - D.transpose() * D;
      Q_ = M.transpose() * M;
      dense_ = true;
    }
  }

  double value(const Vec& c) const {
    if (dense_) return 0.5 * (G_ * c - p_.b).squaredNorm() + p_.kappa * c.dot(Q_ * c);
    Vec dc = p_.D->apply(c);
    Vec z = c - p_.D->apply_transpose(dc);
    return 0.5 * (p_.B->apply(dc) - p_.b).squaredNorm() + p_.kappa * z.squaredNorm();
  }

  Vec gradient(const Vec& c) const {
    if (dense_) return G_.transpose() * (G_ * c - p_.b) + 2.0 * p_.kappa * (Q_ * c);
    Vec dc = p_.D->apply(c);
    Vec z = c - p_.D->apply_transpose(dc);
    Vec r = p_.B->apply(dc) - p_.b;
    return 2.0 * p_.kappa * z +
           p_.D->apply_transpose(p_.B->apply_transpose(r) - 2.0 * p_.kappa * p_.D->apply(z));
  }

 private:
  const BalancedProblem& p_;
  bool dense_ = false;
  Mat G_;
  Mat Q_;
};

// A -> A composed with B, for the power iteration on ||BD||.
class Composed : public LinearOperator {
 public:
  Composed(const LinearOperator& outer, const LinearOperator& inner) : o_(outer), i_(inner) {}
  int rows() const override { return o_.rows(); }
  int cols() const override { return i_.cols(); }
  Vec apply(const Vec& x) const override { return o_.apply(i_.apply(x)); }
  Vec apply_transpose(const Vec& y) const override { return i_.apply_transpose(o_.apply_transpose(y)); }

 private:
  const LinearOperator& o_;
  const LinearOperator& i_;
};

// I - D^T D on R^n (symmetric).
class RangePenalty : public LinearOperator {
 public:
  explicit RangePenalty(const LinearOperator& d) : d_(d) {}
  int rows() const override { return d_.cols(); }
  int cols() const override { return d_.cols(); }
  Vec apply(const Vec& x) const override { return x - d_.apply_transpose(d_.apply(x)); }
  Vec apply_transpose(const Vec& y) const override { return apply(y); }

 private:
  const LinearOperator& d_;
};

}  // namespace

Mat LinearOperator::dense() const {
  Mat m(rows(), cols());
  Vec e = Vec::Zero(cols());
  for (int j = 0; j < cols(); ++j) {
    e[j] = 1.0;
    m.col(j) = apply(e);
    e[j] = 0.0;
  }
  return m;
}

FrameOperator::FrameOperator(std::shared_ptr<const FrameTransform> t) : t_(std::move(t)) {
  complex_ = !t_->spec().bank.has_taps();
  n_ = t_->zeros().coefficient_count() * (complex_ ? 2 : 1);
}

Vec FrameOperator::flatten(const CoeffPyramid& p) const {
  Vec v(static_cast<Eigen::Index>(n_));
  const std::size_t half = complex_ ? n_ / 2 : n_;
  std::size_t k = 0;
  auto put = [&](const ComplexGrid& g) {
    for (const auto& z : g.values()) {
      v[static_cast<Eigen::Index>(k)] = z.real();
      if (complex_) v[static_cast<Eigen::Index>(k + half)] = z.imag();
      ++k;
    }
  };
  for (const auto& lv : p.detail)
    for (const auto& b : lv) put(b);
  put(p.lowpass);
  if (k != half) throw StructuralError("frame operator: pyramid size mismatch");
  return v;
}

CoeffPyramid FrameOperator::unflatten(const Vec& c) const {
  if (static_cast<std::size_t>(c.size()) != n_) throw StructuralError("frame operator: vector size mismatch");
  CoeffPyramid p = t_->zeros();
  const std::size_t half = complex_ ? n_ / 2 : n_;
  std::size_t k = 0;
  auto get = [&](ComplexGrid& g) {
    for (auto& z : g.values()) {
      double im = complex_ ? c[static_cast<Eigen::Index>(k + half)] : 0.0;
      z = Complex(c[static_cast<Eigen::Index>(k)], im);
      ++k;
    }
  };
  for (auto& lv : p.detail)
    for (auto& b : lv) get(b);
  get(p.lowpass);
  return p;
}

Vec FrameOperator::apply(const Vec& c) const { return grid_to_vec(t_->inverse(unflatten(c))); }

Vec FrameOperator::apply_transpose(const Vec& x) const {
  return flatten(t_->forward(vec_to_grid(x, t_->rows(), t_->cols())));
}

Vec grid_to_vec(const RealGrid& g) {
  Vec v(static_cast<Eigen::Index>(g.size()));
  for (std::size_t k = 0; k < g.size(); ++k) v[static_cast<Eigen::Index>(k)] = g[k];
  return v;
}

RealGrid vec_to_grid(const Vec& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) throw StructuralError("vector/grid size mismatch");
  RealGrid g(rows, cols);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = v[static_cast<Eigen::Index>(k)];
  return g;
}

Mat assemble_synthesis_matrix(const FrameTransform& t) {
  std::shared_ptr<const FrameTransform> alias(&t, [](const FrameTransform*) {});
  return FrameOperator(alias).dense();
}

void BalancedProblem::validate() const {
  if (!D || !B) throw StructuralError("balanced: D and B must be set");
  if (D->rows() < 1 || D->cols() < 1) throw StructuralError("balanced: empty D");
  if (B->cols() != D->rows()) throw StructuralError("balanced: B columns must equal D rows");
  if (b.size() != B->rows()) throw StructuralError("balanced: b length must equal B rows");
  if (weights.size() != D->cols()) throw StructuralError("balanced: weights length must equal D columns");
  if ((weights.array() < 0.0).any()) throw ConfigError("balanced: weights must be nonnegative");
  if (!(kappa > 0.0)) throw ConfigError("balanced: kappa must be positive");
}

BalancedProblem make_dense_problem(Mat D, Mat B, Vec b, Vec weights, double kappa) {
  BalancedProblem p;
  p.D = std::make_shared<DenseOperator>(std::move(D));
  p.B = std::make_shared<DenseOperator>(std::move(B));
  p.b = std::move(b);
  p.weights = std::move(weights);
  p.kappa = kappa;
  p.validate();
  return p;
}

double objective(const BalancedProblem& p, const Vec& c) {
  p.validate();
  if (c.size() != p.n()) throw StructuralError("objective: coefficient length mismatch");
  Vec dc = p.D->apply(c);
  Vec z = c - p.D->apply_transpose(dc);
  return 0.5 * (p.B->apply(dc) - p.b).squaredNorm() + p.weights.cwiseProduct(c).lpNorm<1>() +
         p.kappa * z.squaredNorm();
}

double spectral_norm(const LinearOperator& a, int steps, double tol) {
  Vec x = Vec::Constant(a.cols(), 1.0 / std::sqrt(static_cast<double>(a.cols())));
  // Deterministic but not aligned with any special direction.
  for (int j = 0; j < a.cols(); ++j) x[j] += 1e-3 * std::sin(1.0 + j);
  x.normalize();
  double est = 0.0;
  for (int it = 0; it < steps; ++it) {
    Vec y = a.apply_transpose(a.apply(x));
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    const double next = std::sqrt(ny);
    x = y / ny;
    if (std::abs(next - est) <= tol * next) {
      est = next;
      break;
    }
    est = next;
  }
  return est;
}

SolveResult solve_balanced(const BalancedProblem& p, const SolveOptions& opt) {
  p.validate();
  if (!(opt.tol > 0.0) || opt.max_iterations < 1) throw ConfigError("solve: invalid tolerance or iteration cap");
  const int n = p.n();
  SmoothPart smooth(p);

  Composed bd(*p.B, *p.D);
  RangePenalty m(*p.D);
  const double nb = spectral_norm(bd);
  const double nm = spectral_norm(m);
  double L = (nb * nb + 2.0 * p.kappa * nm * nm) * opt.lipschitz_safety;
  if (L == 0.0) L = 1.0;

  auto full = [&](const Vec& c) { return smooth.value(c) + p.weights.cwiseProduct(c).lpNorm<1>(); };
  auto prox_step = [&](const Vec& from) {
    Vec g = from - smooth.gradient(from) / L;
    for (int j = 0; j < n; ++j) g[j] = soft_scalar(g[j], p.weights[j] / L);
    return g;
  };

  SolveResult res;
  res.lipschitz = L;
  Vec x = Vec::Zero(n);
  Vec y = x;
  double fx = full(x);
  double t = 1.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Vec xn = prox_step(y);
    double fn = full(xn);
    if (fn > fx) {
      // Momentum overshot: restart from the last accepted point with a plain step.
      t = 1.0;
      xn = prox_step(x);
      fn = full(xn);
      if (fn > fx + 1e-13 * std::max(1.0, std::abs(fx))) res.monotone = false;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = xn + ((t - 1.0) / tn) * (xn - x);
    t = tn;
    res.relative_change = relative_change(xn, x);
    res.iterations = it;
    x = std::move(xn);
    fx = fn;
    if (res.relative_change < opt.tol) {
      res.converged = true;
      break;
    }
  }
  res.c = std::move(x);
  res.objective = objective(p, res.c);
  return res;
}

namespace {

// g = D^T(2 kappa (2I - D D^T) D c - B^T(B D c - b)).
Vec kkt_vector(const BalancedProblem& p, const Vec& c) {
  Vec dc = p.D->apply(c);
  Vec r = p.B->apply(dc) - p.b;
  Vec q = 2.0 * p.kappa * (2.0 * dc - p.D->apply(p.D->apply_transpose(dc))) - p.B->apply_transpose(r);
  return p.D->apply_transpose(q);
}

}  // namespace

double kkt_residual(const BalancedProblem& p, const Vec& c) {
  p.validate();
  if (c.size() != p.n()) throw StructuralError("kkt: coefficient length mismatch");
  Vec g = kkt_vector(p, c);
  double worst = 0.0;
  for (int j = 0; j < p.n(); ++j) {
    double r;
    if (c[j] != 0.0)
      r = std::abs(g[j] - sgn(c[j]) * (p.weights[j] + 2.0 * p.kappa * std::abs(c[j])));
    else
      r = std::max(0.0, std::abs(g[j]) - p.weights[j]);
    worst = std::max(worst, r);
  }
  return worst;
}

Vec grouping_vector(const BalancedProblem& p, const Vec& c) {
  p.validate();
  if (c.size() != p.n()) throw StructuralError("grouping: coefficient length mismatch");
  return kkt_vector(p, c) / (2.0 * p.kappa);
}

double grouping_bound(const BalancedProblem& p, const Vec& c, int j, int k) {
  if (j < 0 || k < 0 || j >= p.n() || k >= p.n()) throw StructuralError("grouping_bound: index out of range");
  Vec v = grouping_vector(p, c);
  return std::abs(p.weights[j] - p.weights[k]) / (2.0 * p.kappa) + std::abs(v[j] - v[k]);
}

GroupingReport check_grouping(const BalancedProblem& p, const SolveResult& s, double slack) {
  GroupingReport rep;
  rep.n = p.n();
  rep.kappa = p.kappa;
  rep.converged = s.converged;
  rep.kkt = kkt_residual(p, s.c);
  Vec v = grouping_vector(p, s.c);
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < p.n(); ++j)
    for (int k = j + 1; k < p.n(); ++k) {
      double bound = std::abs(p.weights[j] - p.weights[k]) / (2.0 * p.kappa) + std::abs(v[j] - v[k]);
      double margin = bound - std::abs(s.c[j] - s.c[k]);
      rep.worst_margin = std::min(rep.worst_margin, margin);
      if (margin < -slack) ++rep.violations;
    }
  if (p.n() < 2) rep.worst_margin = 0.0;
  const double nb = p.b.norm();
  const double fit = (p.B->apply(p.D->apply(s.c)) - p.b).norm();
  rep.fit_bound_ok = fit <= nb * (1.0 + 1e-12) + 1e-15;
  const double wmin = p.weights.minCoeff();
  rep.l1_bound_ok = wmin > 0.0 ? s.c.lpNorm<1>() <= nb * nb / (2.0 * wmin) * (1.0 + 1e-12) + 1e-15 : true;
  return rep;
}

GroupingReport verify_grouping(const BalancedProblem& p, double tol, double slack, SolveResult* solution) {
  SolveOptions opt;
  opt.tol = tol;
  SolveResult s = solve_balanced(p, opt);
  GroupingReport rep = check_grouping(p, s, slack);
  if (solution) *solution = std::move(s);
  return rep;
}

double elastic_net_objective(const Mat& E, const Vec& b, double lambda, double kappa, const Vec& c) {
  return 0.5 * (E * c - b).squaredNorm() + lambda * c.lpNorm<1>() + kappa * c.squaredNorm();
}

SolveResult solve_elastic_net_cd(const Mat& E, const Vec& b, double lambda, double kappa, double tol,
                                 int max_sweeps) {
  if (E.rows() != b.size()) throw StructuralError("elastic net: E rows must equal b length");
  if (!(lambda > 0.0) || !(kappa > 0.0)) throw ConfigError("elastic net: lambda and kappa must be positive");
  const Eigen::Index n = E.cols();
  Vec c = Vec::Zero(n);
  Vec r = b;
  Vec sq = E.colwise().squaredNorm().transpose();
  SolveResult res;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double delta2 = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double rho = E.col(j).dot(r) + sq[j] * c[j];
      const double cj = soft_scalar(rho, lambda) / (sq[j] + 2.0 * kappa);
      const double d = cj - c[j];
      if (d != 0.0) {
        r -= d * E.col(j);
        c[j] = cj;
        delta2 += d * d;
      }
    }
    res.iterations = sweep;
    const double cn = c.norm();
    res.relative_change = delta2 == 0.0 ? 0.0 : std::sqrt(delta2) / (cn == 0.0 ? 1.0 : cn);
    if (res.relative_change < tol) {
      res.converged = true;
      break;
    }
  }
  res.c = c;
  res.objective = elastic_net_objective(E, b, lambda, kappa, c);
  return res;
}

BalancedProblem elastic_net_as_balanced(const Mat& E, const Vec& b, double lambda, double kappa) {
  const Eigen::Index n = E.cols();
  return make_dense_problem(std::sqrt(2.0) * Mat::Identity(n, n), (std::sqrt(2.0) / 2.0) * E, b,
                            Vec::Constant(n, lambda), kappa);
}

SolveResult solve_elastic_net(const Mat& E, const Vec& b, double lambda, double kappa, const SolveOptions& opt) {
  return solve_balanced(elastic_net_as_balanced(E, b, lambda, kappa), opt);
}

double elastic_net_bound(const Mat& E, const Vec& b, double kappa, const Vec& c, int j, int k) {
  if (j < 0 || k < 0 || j >= E.cols() || k >= E.cols()) throw StructuralError("elastic_net_bound: index out of range");
  Vec r = E * c - b;
  return std::abs((E.col(j) - E.col(k)).dot(r)) / (2.0 * kappa);
}

BalancedProblem random_problem(std::uint64_t seed, const RandomProblemOptions& opt) {
  if (opt.max_d < 2 || opt.max_n < opt.max_d) throw ConfigError("random_problem: need 2 <= max_d <= max_n");
  Rng rng(seed);
  const int d = rng.uniform_int(2, opt.max_d);
  const int n = rng.uniform_int(d, opt.max_n);

  Mat D(d, n);
  if (opt.tight) {
    Mat g(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(n, d);
    D = q.transpose();
  } else {
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < n; ++j) D(i, j) = s * rng.normal();
  }

  Mat B;
  if (opt.projection_B) {
    Vec diag(d);
    for (int i = 0; i < d; ++i) diag[i] = rng.uniform() < 0.7 ? 1.0 : 0.0;
    diag[rng.uniform_int(0, d - 1)] = 1.0;
    B = diag.asDiagonal();
  } else {
    B.resize(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) B(i, j) = rng.normal() / std::sqrt(static_cast<double>(d));
  }

  Vec truth = Vec::Zero(n);
  for (int j = 0; j < n; ++j)
    if (rng.uniform() < 0.3) truth[j] = 3.0 * rng.normal();
  Vec b = B * (D * truth);
  for (int i = 0; i < d; ++i) b[i] += 0.1 * rng.normal();

  const double scale = std::max((D.transpose() * (B.transpose() * b)).lpNorm<Eigen::Infinity>(), 1e-3);
  const double lambda = scale * rng.uniform(0.05, 0.5);
  Vec w(n);
  for (int j = 0; j < n; ++j) w[j] = opt.uniform_weights ? lambda : lambda * rng.uniform(0.5, 2.0);
  return make_dense_problem(std::move(D), std::move(B), std::move(b), std::move(w), opt.kappa);
}

}  // namespace tpctf
