#pragma once
// Local polynomial regression of the group-wise acceptance probability
// eta_a(x) = P(Y = 1 | X = x, A = a), with the eigenvalue guard on the
// normalized design matrix and output clipping to [0, 1].

#include <functional>
#include <span>
#include <vector>

#include "fairddp/types.hpp"

namespace fairddp {

// Kernel evaluated at standardized displacements z = (X_j - x) / h.
// The default is the Gaussian bump exp(-|z|^2 / 2) (peak value 1).  A
// constant factor on the kernel cancels inside the least-squares solve at
// every degree, so it only shifts the eigenvalue-guard comparison; the
// guard floor below is calibrated against this unnormalized form.
// Custom kernels are caller-asserted to satisfy the usual conditions
// (nonnegative, bounded, positive near 0, integrable tails).
struct KernelSpec {
  std::string name = "gaussian";
  std::function<double(std::span<const double>)> evaluator;  // empty => built-in Gaussian
};

double gaussian_kernel(std::span<const double> z);

// Multi-indices s with |s| <= k over d variables, graded lexicographic:
// total degree ascending, and within a degree block the leading exponents
// first ((1,0) before (0,1)).  First element is always the zero index.
// Length is C(d + k, k).
std::vector<std::vector<int>> multi_index_basis(int d, int k);

// h = c * n_a^(-1/(2 beta + d)).
double default_bandwidth(double c, std::size_t n_a, double beta, int d);

// Boundary offset schedule l_a = c * n_a^(-beta/(2 beta + d)).
double offset_schedule(double c, std::size_t n_a, double beta, int d);

// Grid argmin of a validation-score callback; ties break toward the
// smaller multiplier.  Both groups share the selected multiplier.
struct BandwidthChoice {
  double c1 = 0.0;
  double c0 = 0.0;
};
BandwidthChoice select_bandwidth(const std::vector<double>& grid,
                                 const std::function<double(double)>& validation_error);

// Per-group variant: argmin of score(c1, c0) over the grid square; ties
// break toward the lexicographically smaller (c1, c0).
BandwidthChoice select_bandwidth_pair(const std::vector<double>& grid,
                                      const std::function<double(double, double)>& score);

// Fitted per-group regression function.  Owns a copy of the training rows
// (the estimator is evaluated lazily; serialization ships the rows).
class LocalPolyEstimator {
 public:
  LocalPolyEstimator(const GroupView& group, double bandwidth, int degree,
                     KernelSpec kernel = {});

  // eta-hat at a query point: kernel-weighted least-squares polynomial fit
  // evaluated at its center, clipped to [0, 1].  Returns 0 when the guard
  // fires (lambda_min of the normalized design matrix <= 1/log n_a) or the
  // factorization reports a singular system.
  double operator()(std::span<const double> x) const;

  // Column-batched evaluation; out is resized to the number of rows.
  void evaluate_rows(const std::vector<double>& xs_rowmajor, std::vector<double>& out) const;

  double bandwidth() const noexcept { return h_; }
  int degree() const noexcept { return degree_; }
  int dim() const noexcept { return d_; }
  std::size_t train_size() const noexcept { return n_; }
  // 1/log(n_a) for n_a >= 2; 0 for n_a = 1 so that a single-point
  // degree-0 fit returns its own label while any rank-deficient design
  // still trips the guard through lambda_min = 0.
  double guard_floor() const noexcept { return floor_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  const std::vector<double>& train_xs() const noexcept { return xs_; }
  const std::vector<int>& train_ys() const noexcept { return ys_; }

 private:
  double evaluate_degree0(const double* q) const;
  double evaluate_general(const double* q) const;

  std::vector<double> xs_;  // row-major n x d
  std::vector<int> ys_;
  std::size_t n_ = 0;
  int d_ = 0;
  int degree_ = 0;
  double h_ = 0.0;
  double floor_ = 0.0;
  KernelSpec kernel_;
  std::vector<std::vector<int>> basis_;  // cached multi-index basis
};

}  // namespace fairddp
