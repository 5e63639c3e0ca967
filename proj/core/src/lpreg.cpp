#include "fairddp/lpreg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fairddp {

double gaussian_kernel(std::span<const double> z) {
  double s = 0.0;
  for (double v : z) s += v * v;
  return std::exp(-0.5 * s);
}

std::vector<std::vector<int>> multi_index_basis(int d, int k) {
  if (d <= 0) throw std::invalid_argument("multi_index_basis: d must be positive");
  if (k < 0) throw std::invalid_argument("multi_index_basis: k must be nonnegative");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  // Within a degree block, assign the remaining degree to the leading
  // coordinates first; recursion order yields graded lexicographic.
  auto emit = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == d - 1) {
      cur[static_cast<std::size_t>(pos)] = remaining;
      out.push_back(cur);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[static_cast<std::size_t>(pos)] = e;
      self(self, pos + 1, remaining - e);
    }
  };
  for (int m = 0; m <= k; ++m) emit(emit, 0, m);
  return out;
}

double default_bandwidth(double c, std::size_t n_a, double beta, int d) {
  if (!(c > 0.0)) throw std::invalid_argument("default_bandwidth: multiplier must be positive");
  if (n_a == 0) throw std::invalid_argument("default_bandwidth: empty group");
  if (!(beta > 0.0)) throw std::invalid_argument("default_bandwidth: beta must be positive");
  if (d <= 0) throw std::invalid_argument("default_bandwidth: d must be positive");
  return c * std::pow(static_cast<double>(n_a), -1.0 / (2.0 * beta + d));
}

double offset_schedule(double c, std::size_t n_a, double beta, int d) {
  if (c < 0.0) throw std::invalid_argument("offset_schedule: multiplier must be nonnegative");
  if (n_a == 0) throw std::invalid_argument("offset_schedule: empty group");
  if (!(beta > 0.0)) throw std::invalid_argument("offset_schedule: beta must be positive");
  if (d <= 0) throw std::invalid_argument("offset_schedule: d must be positive");
  return c * std::pow(static_cast<double>(n_a), -beta / (2.0 * beta + d));
}

BandwidthChoice select_bandwidth(const std::vector<double>& grid,
                                 const std::function<double(double)>& validation_error) {
  if (grid.empty()) throw std::invalid_argument("select_bandwidth: empty bandwidth grid");
  if (!validation_error) throw std::invalid_argument("select_bandwidth: empty callback");
  double best_c = grid.front();
  double best_err = std::numeric_limits<double>::infinity();
  for (double c : grid) {
    if (!(c > 0.0)) throw std::invalid_argument("select_bandwidth: multipliers must be positive");
    const double err = validation_error(c);
    // strict < keeps the first (and with a sorted grid, smallest) multiplier on ties;
    // an unsorted grid still ties toward the smaller value via the second clause
    if (err < best_err || (err == best_err && c < best_c)) {
      best_err = err;
      best_c = c;
    }
  }
  return BandwidthChoice{best_c, best_c};
}

BandwidthChoice select_bandwidth_pair(const std::vector<double>& grid,
                                      const std::function<double(double, double)>& score) {
  if (grid.empty()) throw std::invalid_argument("select_bandwidth: empty bandwidth grid");
  if (!score) throw std::invalid_argument("select_bandwidth: empty callback");
  for (double c : grid) {
    if (!(c > 0.0)) throw std::invalid_argument("select_bandwidth: multipliers must be positive");
  }
  BandwidthChoice best{grid.front(), grid.front()};
  double best_err = std::numeric_limits<double>::infinity();
  for (double c1 : grid) {
    for (double c0 : grid) {
      const double err = score(c1, c0);
      const bool smaller =
          c1 < best.c1 || (c1 == best.c1 && c0 < best.c0);
      if (err < best_err || (err == best_err && smaller)) {
        best_err = err;
        best = BandwidthChoice{c1, c0};
      }
    }
  }
  return best;
}

LocalPolyEstimator::LocalPolyEstimator(const GroupView& group, double bandwidth, int degree,
                                       KernelSpec kernel)
    : xs_(group.xs),
      ys_(group.ys),
      n_(group.n_a),
      d_(group.d),
      degree_(degree),
      h_(bandwidth),
      kernel_(std::move(kernel)) {
  if (n_ == 0) throw std::invalid_argument("LocalPolyEstimator: empty group");
  if (d_ <= 0) throw std::invalid_argument("LocalPolyEstimator: dimension must be positive");
  if (!(h_ > 0.0)) throw std::invalid_argument("LocalPolyEstimator: bandwidth must be positive");
  if (degree_ < 0) throw std::invalid_argument("LocalPolyEstimator: degree must be nonnegative");
  if (xs_.size() != n_ * static_cast<std::size_t>(d_) || ys_.size() != n_)
    throw std::invalid_argument("LocalPolyEstimator: inconsistent group view");
  floor_ = (n_ >= 2) ? 1.0 / std::log(static_cast<double>(n_)) : 0.0;
  basis_ = multi_index_basis(d_, degree_);
}

namespace {

inline double clip01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

double LocalPolyEstimator::evaluate_degree0(const double* q) const {
  // Degree 0: the normalized design matrix is the 1x1 average kernel mass,
  // and the fit is the kernel-weighted mean of the labels.
  const bool builtin = !kernel_.evaluator;
  const double inv_h = 1.0 / h_;
  double den = 0.0, num = 0.0;
  std::vector<double> zbuf;
  if (!builtin) zbuf.resize(static_cast<std::size_t>(d_));
  const double* xp = xs_.data();
  for (std::size_t j = 0; j < n_; ++j, xp += d_) {
    double w;
    if (builtin) {
      double s = 0.0;
      for (int t = 0; t < d_; ++t) {
        const double z = (xp[t] - q[t]) * inv_h;
        s += z * z;
      }
      w = std::exp(-0.5 * s);
    } else {
      for (int t = 0; t < d_; ++t) zbuf[static_cast<std::size_t>(t)] = (xp[t] - q[t]) * inv_h;
      w = kernel_.evaluator(zbuf);
    }
    den += w;
    num += w * ys_[j];
  }
  const double bbar = den / (static_cast<double>(n_) * std::pow(h_, d_));
  if (bbar <= floor_ || den == 0.0) return 0.0;
  return clip01(num / den);
}

double LocalPolyEstimator::evaluate_general(const double* q) const {
  const std::size_t m = basis_.size();
  Eigen::MatrixXd bbar = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                               static_cast<Eigen::Index>(m));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  Eigen::VectorXd u(static_cast<Eigen::Index>(m));
  const bool builtin = !kernel_.evaluator;
  const double inv_h = 1.0 / h_;
  std::vector<double> z(static_cast<std::size_t>(d_));
  const double* xp = xs_.data();
  for (std::size_t j = 0; j < n_; ++j, xp += d_) {
    double s = 0.0;
    for (int t = 0; t < d_; ++t) {
      z[static_cast<std::size_t>(t)] = (xp[t] - q[t]) * inv_h;
      s += z[static_cast<std::size_t>(t)] * z[static_cast<std::size_t>(t)];
    }
    const double w = builtin ? std::exp(-0.5 * s) : kernel_.evaluator(z);
    // u = monomials of z over the basis; B-bar and the right-hand side are
    // the weighted moment matrix/vector in standardized coordinates, which
    // is the per-Algorithm normalization n^-1 h^-(d+|s1|+|s2|) Q.
    for (std::size_t b = 0; b < m; ++b) {
      double val = 1.0;
      const auto& mi = basis_[b];
      for (int t = 0; t < d_; ++t)
        for (int e = 0; e < mi[static_cast<std::size_t>(t)]; ++e)
          val *= z[static_cast<std::size_t>(t)];
      u(static_cast<Eigen::Index>(b)) = val;
    }
    bbar.noalias() += w * u * u.transpose();
    rhs.noalias() += (w * ys_[j]) * u;
  }
  const double scale = 1.0 / (static_cast<double>(n_) * std::pow(h_, d_));
  bbar *= scale;
  rhs *= scale;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bbar, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return 0.0;
  if (es.eigenvalues()(0) <= floor_) return 0.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(bbar);
  if (!lu.isInvertible()) return 0.0;
  const Eigen::VectorXd coef = lu.solve(rhs);
  // First basis element is the zero multi-index, so the fitted value at the
  // center is the first coefficient (U(0) = e1).
  return clip01(coef(0));
}

double LocalPolyEstimator::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_)
    throw std::invalid_argument("LocalPolyEstimator: query dimension mismatch");
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite input");
  return degree_ == 0 ? evaluate_degree0(x.data()) : evaluate_general(x.data());
}

void LocalPolyEstimator::evaluate_rows(const std::vector<double>& xs_rowmajor,
                                       std::vector<double>& out) const {
  if (xs_rowmajor.size() % static_cast<std::size_t>(d_) != 0)
    throw std::invalid_argument("LocalPolyEstimator: ragged query batch");
  const std::size_t rows = xs_rowmajor.size() / static_cast<std::size_t>(d_);
  out.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    std::span<const double> q{xs_rowmajor.data() + i * static_cast<std::size_t>(d_),
                              static_cast<std::size_t>(d_)};
    out[i] = (*this)(q);
  }
}

}  // namespace fairddp
