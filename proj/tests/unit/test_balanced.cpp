#include <doctest.h>

#include <cmath>
#include <memory>

#include "tpctf/balanced.hpp"
#include "tpctf/random.hpp"

using namespace tpctf;

namespace {

Mat gaussian(Rng& rng, int r, int c) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
  return m;
}

Vec gaussian(Rng& rng, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

// Written out term by term with plain loops.
double reference_objective(const Mat& D, const Mat& B, const Vec& b, const Vec& w, double kappa, const Vec& c) {
  const int m = static_cast<int>(D.rows());
  const int n = static_cast<int>(D.cols());
  const int p = static_cast<int>(B.rows());
  std::vector<double> dc(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) dc[i] += D(i, j) * c[j];
  double fit = 0.0;
  for (int i = 0; i < p; ++i) {
    double s = -b[i];
    for (int k = 0; k < m; ++k) s += B(i, k) * dc[k];
    fit += s * s;
  }
  double l1 = 0.0;
  for (int j = 0; j < n; ++j) l1 += std::abs(w[j] * c[j]);
  double pen = 0.0;
  for (int j = 0; j < n; ++j) {
    double s = c[j];
    for (int i = 0; i < m; ++i) s -= D(i, j) * dc[i];
    pen += s * s;
  }
  return 0.5 * fit + l1 + kappa * pen;
}

BalancedProblem small_problem(std::uint64_t seed, int d, int n, double kappa, bool tight) {
  Rng rng(seed);
  Mat D = gaussian(rng, d, n) / std::sqrt(static_cast<double>(d));
  if (tight) {
    Eigen::HouseholderQR<Mat> qr(Mat(D.transpose()));
    D = (qr.householderQ() * Mat::Identity(n, d)).transpose();
  }
  Mat B = Mat::Identity(d, d);
  Vec b = gaussian(rng, d);
  double lam = 0.1 * (D.transpose() * b).lpNorm<Eigen::Infinity>();
  return make_dense_problem(D, B, b, Vec::Constant(n, lam), kappa);
}

}  // namespace

TEST_SUITE("balanced") {

TEST_CASE("objective against an independent evaluator") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    Mat D = gaussian(rng, 4, 6);
    Mat B = gaussian(rng, 3, 4);
    Vec b = gaussian(rng, 3);
    Vec w = gaussian(rng, 6).cwiseAbs();
    Vec c = gaussian(rng, 6);
    BalancedProblem p = make_dense_problem(D, B, b, w, 0.7);
    const double ref = reference_objective(D, B, b, w, 0.7, c);
    CHECK(std::abs(objective(p, c) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    CHECK(std::abs(objective(p, Vec::Zero(6)) - 0.5 * b.squaredNorm()) <= 1e-14);
  }
}

TEST_CASE("orthonormal square D has no range penalty") {
  Rng rng(2);
  Eigen::HouseholderQR<Mat> qr(gaussian(rng, 5, 5));
  Mat Q = qr.householderQ();
  Vec b = gaussian(rng, 5);
  BalancedProblem p = make_dense_problem(Q, Mat::Identity(5, 5), b, Vec::Zero(5), 3.0);
  for (int k = 0; k < 5; ++k) {
    Vec c = gaussian(rng, 5);
    CHECK(std::abs(objective(p, c) - 0.5 * (Q * c - b).squaredNorm()) <= 1e-12);
  }
}

TEST_CASE("problem validation") {
  Mat D = Mat::Identity(3, 4);
  CHECK_THROWS_AS(make_dense_problem(D, Mat::Identity(2, 2), Vec::Zero(2), Vec::Ones(4), 1.0), StructuralError);
  CHECK_THROWS_AS(make_dense_problem(D, Mat::Identity(3, 3), Vec::Zero(2), Vec::Ones(4), 1.0), StructuralError);
  CHECK_THROWS_AS(make_dense_problem(D, Mat::Identity(3, 3), Vec::Zero(3), Vec::Ones(3), 1.0), StructuralError);
  CHECK_THROWS_AS(make_dense_problem(D, Mat::Identity(3, 3), Vec::Zero(3), -Vec::Ones(4), 1.0), ConfigError);
  CHECK_THROWS_AS(make_dense_problem(D, Mat::Identity(3, 3), Vec::Zero(3), Vec::Ones(4), 0.0), ConfigError);
  BalancedProblem p = make_dense_problem(D, Mat::Identity(3, 3), Vec::Zero(3), Vec::Ones(4), 1.0);
  CHECK_THROWS_AS(objective(p, Vec::Zero(3)), StructuralError);
  CHECK_THROWS_AS(grouping_bound(p, Vec::Zero(4), 0, 4), StructuralError);
}

TEST_CASE("spectral norm") {
  Vec d(4);
  d << 1.0, -3.0, 2.0, 0.5;
  CHECK(std::abs(spectral_norm(DiagonalOperator(d)) - 3.0) <= 1e-9);
  Rng rng(3);
  Mat a = gaussian(rng, 6, 9);
  Eigen::JacobiSVD<Mat> svd(a);
  CHECK(std::abs(spectral_norm(DenseOperator(a)) - svd.singularValues()[0]) <= 1e-8);
}

TEST_CASE("solver trivial cases") {
  BalancedProblem p = small_problem(4, 6, 12, 0.5, true);
  p.b.setZero();
  SolveResult s = solve_balanced(p);
  CHECK(s.c.isZero(0.0));

  BalancedProblem q = small_problem(4, 6, 12, 0.5, false);
  const double big = 2.0 * (q.D->apply_transpose(q.B->apply_transpose(q.b))).lpNorm<Eigen::Infinity>() + 1.0;
  q.weights.setConstant(big);
  SolveResult z = solve_balanced(q);
  CHECK(z.c.isZero(0.0));
  CHECK(kkt_residual(q, Vec::Zero(q.n())) == 0.0);
}

TEST_CASE("converged solve satisfies the optimality conditions") {
  for (bool tight : {true, false}) {
    BalancedProblem p = small_problem(tight ? 5 : 6, 8, 16, 0.5, tight);
    SolveResult s = solve_balanced(p);
    CHECK(s.converged);
    CHECK(s.monotone);
    CHECK(kkt_residual(p, s.c) <= 1e-6);
    CHECK(s.objective <= 0.5 * p.b.squaredNorm());

    Vec moved = s.c;
    moved[3] += 0.1;
    CHECK(kkt_residual(p, moved) > 1e-3);
  }
}

TEST_CASE("KKT residual shrinks as the tolerance tightens") {
  for (std::uint64_t seed : {7, 8, 9}) {
    BalancedProblem p = random_problem(seed, {});
    double prev = std::numeric_limits<double>::infinity();
    for (double tol : {1e-6, 1e-9, 1e-12}) {
      SolveOptions o;
      o.tol = tol;
      const double r = kkt_residual(p, solve_balanced(p, o).c);
      CHECK(r <= prev * 1.0001 + 1e-14);
      prev = r;
    }
  }
}

TEST_CASE("grouping bound with identical columns") {
  Rng rng(10);
  Mat D = gaussian(rng, 5, 8) / std::sqrt(5.0);
  D.col(6) = D.col(2);
  Vec b = gaussian(rng, 5);
  BalancedProblem p = make_dense_problem(D, Mat::Identity(5, 5), b, Vec::Constant(8, 0.05), 0.5);
  SolveResult s;
  GroupingReport r = verify_grouping(p, 1e-12, 1e-6, &s);
  CHECK(r.passed());
  CHECK(grouping_bound(p, s.c, 2, 6) == 0.0);
  CHECK(std::abs(s.c[2] - s.c[6]) <= 1e-8);
}

TEST_CASE("grouping inequality on random instances") {
  for (int i = 0; i < 24; ++i) {
    RandomProblemOptions opt;
    opt.kappa = (i % 3 == 0) ? 0.1 : (i % 3 == 1 ? 0.5 : 2.0);
    opt.uniform_weights = i % 2 == 0;
    opt.tight = (i / 2) % 2 == 0;
    opt.projection_B = (i / 4) % 2 == 0;
    BalancedProblem p = random_problem(100 + i, opt);
    CHECK(p.D->rows() <= 12);
    CHECK(p.n() <= 36);
    GroupingReport r = verify_grouping(p, 1e-12);
    CHECK(r.violations == 0);
    CHECK(r.passed());
    CHECK(r.kkt <= 1e-6);
  }
}

TEST_CASE("b = 0 gives a zero solution and zero bounds") {
  BalancedProblem p = random_problem(31, {});
  p.b.setZero();
  SolveResult s;
  GroupingReport r = verify_grouping(p, 1e-12, 1e-6, &s);
  CHECK(s.c.isZero(0.0));
  CHECK(grouping_bound(p, s.c, 0, 1) == doctest::Approx(std::abs(p.weights[0] - p.weights[1]) / (2 * p.kappa)));
  CHECK(r.violations == 0);
}

TEST_CASE("random problems are reproducible") {
  BalancedProblem a = random_problem(42, {});
  BalancedProblem b = random_problem(42, {});
  CHECK(a.D->dense() == b.D->dense());
  CHECK(a.b == b.b);
  CHECK(a.weights == b.weights);
  RandomProblemOptions t;
  BalancedProblem tight = random_problem(43, t);
  const Mat d = tight.D->dense();
  CHECK((d * d.transpose() - Mat::Identity(d.rows(), d.rows())).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("elastic net: reduction identity and solver agreement") {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    Mat E = gaussian(rng, 6, 10);
    Vec b = gaussian(rng, 6);
    const double lambda = 0.3;
    const double kappa = 0.4;
    BalancedProblem p = elastic_net_as_balanced(E, b, lambda, kappa);
    for (int k = 0; k < 5; ++k) {
      Vec c = gaussian(rng, 10);
      const double en = elastic_net_objective(E, b, lambda, kappa, c);
      CHECK(std::abs(objective(p, c) - en) <= 1e-12 * std::max(1.0, std::abs(en)));
    }
    SolveResult cd = solve_elastic_net_cd(E, b, lambda, kappa);
    SolveResult bal = solve_elastic_net(E, b, lambda, kappa);
    CHECK(cd.converged);
    CHECK(bal.converged);
    CHECK((cd.c - bal.c).cwiseAbs().maxCoeff() <= 1e-8);

    for (int j = 0; j < 10; ++j)
      for (int k = j + 1; k < 10; ++k) {
        const double eb = elastic_net_bound(E, b, kappa, bal.c, j, k);
        CHECK(std::abs(grouping_bound(p, bal.c, j, k) - eb) <= 1e-10);
        CHECK(std::abs(bal.c[j] - bal.c[k]) <= eb + 1e-6);
      }
  }
  Mat E = gaussian(rng, 6, 10);
  Vec b = gaussian(rng, 6);
  CHECK(solve_elastic_net_cd(E, b, 1e6, 0.5).c.isZero(0.0));
  CHECK(solve_elastic_net(E, b, 1e6, 0.5).c.isZero(0.0));
}

TEST_CASE("frame operator is the synthesis of the transform") {
  auto t = std::make_shared<FrameTransform>(TransformSpec{build_tpctf6(), 1, TransformMode::decimated}, 16, 16);
  FrameOperator d(t);
  CHECK(d.complex_coefficients());
  CHECK(d.rows() == 256);
  CHECK(d.cols() == 2 * 33 * 64);
  Rng rng(13);
  Vec c = gaussian(rng, d.cols());
  Vec x = gaussian(rng, d.rows());
  CHECK(std::abs(d.apply(c).dot(x) - c.dot(d.apply_transpose(x))) <= 1e-10 * c.norm() * x.norm());
  // analysis then synthesis is the identity
  CHECK((d.apply(d.apply_transpose(x)) - x).cwiseAbs().maxCoeff() <= 1e-12 * x.cwiseAbs().maxCoeff());
  CoeffPyramid p = d.unflatten(c);
  CHECK((d.flatten(p) - c).isZero(0.0));

  auto u = std::make_shared<FrameTransform>(
      TransformSpec{build_spline_bank(SplineVariant::linear), 2, TransformMode::undecimated}, 16, 16);
  FrameOperator du(u);
  CHECK_FALSE(du.complex_coefficients());
  CHECK(du.cols() == 17 * 256);
  Vec cu = gaussian(rng, du.cols());
  CHECK(std::abs(du.apply(cu).dot(x) - cu.dot(du.apply_transpose(x))) <= 1e-10 * cu.norm() * x.norm());
}

}  // TEST_SUITE
