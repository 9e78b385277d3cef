#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "tpctf/transform.hpp"

namespace tpctf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Real linear map R^cols -> R^rows with its transpose.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual int rows() const = 0;
  virtual int cols() const = 0;
  virtual Vec apply(const Vec& x) const = 0;
  virtual Vec apply_transpose(const Vec& y) const = 0;
  // Materialized matrix; the default builds it column by column.
  virtual Mat dense() const;
};

class DenseOperator : public LinearOperator {
 public:
  explicit DenseOperator(Mat m) : m_(std::move(m)) {}
  int rows() const override { return static_cast<int>(m_.rows()); }
  int cols() const override { return static_cast<int>(m_.cols()); }
  Vec apply(const Vec& x) const override { return m_ * x; }
  Vec apply_transpose(const Vec& y) const override { return m_.transpose() * y; }
  Mat dense() const override { return m_; }
  const Mat& matrix() const noexcept { return m_; }

 private:
  Mat m_;
};

class DiagonalOperator : public LinearOperator {
 public:
  explicit DiagonalOperator(Vec d) : d_(std::move(d)) {}
  int rows() const override { return static_cast<int>(d_.size()); }
  int cols() const override { return static_cast<int>(d_.size()); }
  Vec apply(const Vec& x) const override { return d_.cwiseProduct(x); }
  Vec apply_transpose(const Vec& y) const override { return d_.cwiseProduct(y); }

 private:
  Vec d_;
};

// Synthesis operator of a frame transform acting on real coefficient vectors.
// Decimated (complex) pyramids are flattened as real parts followed by
// imaginary parts; tap-bank pyramids are real and stored once.
class FrameOperator : public LinearOperator {
 public:
  explicit FrameOperator(std::shared_ptr<const FrameTransform> t);
  int rows() const override { return t_->rows() * t_->cols(); }
  int cols() const override { return static_cast<int>(n_); }
  Vec apply(const Vec& c) const override;
  Vec apply_transpose(const Vec& x) const override;

  Vec flatten(const CoeffPyramid& p) const;
  CoeffPyramid unflatten(const Vec& c) const;
  bool complex_coefficients() const noexcept { return complex_; }

 private:
  std::shared_ptr<const FrameTransform> t_;
  bool complex_ = false;
  std::size_t n_ = 0;
};

Vec grid_to_vec(const RealGrid& g);
RealGrid vec_to_grid(const Vec& v, int rows, int cols);

// Explicit synthesis matrix of a (small) transform, one impulse per column.
Mat assemble_synthesis_matrix(const FrameTransform& t);

// 1/2 ||B D c - b||^2 + ||diag(w) c||_1 + kappa ||(I - D^T D) c||^2.
// D is m x n, B is p x m, b has length p.
struct BalancedProblem {
  std::shared_ptr<const LinearOperator> D;
  std::shared_ptr<const LinearOperator> B;
  Vec b;
  Vec weights;
  double kappa = 0.5;

  int n() const { return D->cols(); }
  void validate() const;
};

BalancedProblem make_dense_problem(Mat D, Mat B, Vec b, Vec weights, double kappa);

double objective(const BalancedProblem& p, const Vec& c);

struct SolveResult {
  Vec c;
  double objective = 0.0;
  int iterations = 0;
  double relative_change = 0.0;
  bool converged = false;
  bool monotone = true;  // objective never increased between accepted iterates
  double lipschitz = 0.0;
};

struct SolveOptions {
  double tol = 1e-12;
  int max_iterations = 200000;
  double lipschitz_safety = 1.01;
};

// Spectral norm ||A||_2 of an operator by power iteration on A^T A.
double spectral_norm(const LinearOperator& a, int steps = 200, double tol = 1e-12);

SolveResult solve_balanced(const BalancedProblem& p, const SolveOptions& opt = {});

// Max over j of the first-order optimality violation (see docs).
double kkt_residual(const BalancedProblem& p, const Vec& c);

// v = D^T((2I - D D^T) D c - (1/2kappa) B^T(B D c - b)); the bound of the pair
// (j, k) is (1/2kappa)|w_j - w_k| + |v_j - v_k|.
Vec grouping_vector(const BalancedProblem& p, const Vec& c);
double grouping_bound(const BalancedProblem& p, const Vec& c, int j, int k);

struct GroupingReport {
  int n = 0;
  double kappa = 0.0;
  double worst_margin = 0.0;   // min over pairs of bound - |c_j - c_k|
  long violations = 0;         // pairs with margin < -slack
  double kkt = 0.0;
  bool fit_bound_ok = false;   // ||B D c - b|| <= ||b||
  bool l1_bound_ok = false;    // ||c||_1 <= ||b||^2 / (2 min w)
  bool converged = false;
  bool passed() const { return violations == 0 && fit_bound_ok && l1_bound_ok && converged; }
};

GroupingReport verify_grouping(const BalancedProblem& p, double tol, double slack = 1e-6,
                               SolveResult* solution = nullptr);
GroupingReport check_grouping(const BalancedProblem& p, const SolveResult& s, double slack = 1e-6);

// 1/2 ||E c - b||^2 + lambda ||c||_1 + kappa ||c||^2.
double elastic_net_objective(const Mat& E, const Vec& b, double lambda, double kappa, const Vec& c);
SolveResult solve_elastic_net_cd(const Mat& E, const Vec& b, double lambda, double kappa,
                                 double tol = 1e-14, int max_sweeps = 100000);
// Same problem through the balanced model with D = sqrt(2) I, B = (sqrt(2)/2) E.
BalancedProblem elastic_net_as_balanced(const Mat& E, const Vec& b, double lambda, double kappa);
SolveResult solve_elastic_net(const Mat& E, const Vec& b, double lambda, double kappa,
                              const SolveOptions& opt = {});
// (1/2kappa) ||(E_j - E_k)^T (E c - b)||.
double elastic_net_bound(const Mat& E, const Vec& b, double kappa, const Vec& c, int j, int k);

struct RandomProblemOptions {
  int max_d = 12;
  int max_n = 36;
  double kappa = 0.5;
  bool uniform_weights = true;
  bool tight = true;
  bool projection_B = true;  // B = P_Omega, otherwise a Gaussian matrix
};

BalancedProblem random_problem(std::uint64_t seed, const RandomProblemOptions& opt);

}  // namespace tpctf
