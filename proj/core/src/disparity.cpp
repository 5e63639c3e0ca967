#include "fairddp/disparity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairddp {

DisparityCurve::DisparityCurve(std::span<const double> eta1, std::span<const double> eta0,
                               double l1, double l0)
    : n1_(eta1.size()), n0_(eta0.size()) {
  if (n1_ == 0 || n0_ == 0) throw std::invalid_argument("empty group");
  const double n = static_cast<double>(n1_ + n0_);
  b1_.reserve(n1_);
  b0_.reserve(n0_);
  for (double e : eta1) {
    if (!std::isfinite(e)) throw std::invalid_argument("non-finite input");
    b1_.push_back(2.0 * static_cast<double>(n1_) * (e - 0.5 - l1) / n);
  }
  for (double e : eta0) {
    if (!std::isfinite(e)) throw std::invalid_argument("non-finite input");
    b0_.push_back(2.0 * static_cast<double>(n0_) * (0.5 + l0 - e) / n);
  }
  std::sort(b1_.begin(), b1_.end());
  std::sort(b0_.begin(), b0_.end());
}

double DisparityCurve::operator()(double t) const {
  // #{ b1_j > t } strict, #{ b0_j < t } strict.
  const auto gt1 = b1_.end() - std::upper_bound(b1_.begin(), b1_.end(), t);
  const auto lt0 = std::lower_bound(b0_.begin(), b0_.end(), t) - b0_.begin();
  return static_cast<double>(gt1) / static_cast<double>(n1_) -
         static_cast<double>(lt0) / static_cast<double>(n0_);
}

double DisparityCurve::value_right(double t) const {
  // #{ b1_j > t } is right-continuous already; the group-0 count becomes <=.
  const auto gt1 = b1_.end() - std::upper_bound(b1_.begin(), b1_.end(), t);
  const auto le0 = std::upper_bound(b0_.begin(), b0_.end(), t) - b0_.begin();
  return static_cast<double>(gt1) / static_cast<double>(n1_) -
         static_cast<double>(le0) / static_cast<double>(n0_);
}

double DisparityCurve::infimum_below(double level) const {
  if ((*this)(0.0) < level) return 0.0;
  std::vector<double> cand;
  cand.reserve(b1_.size() + b0_.size());
  for (double b : b1_)
    if (b > 0.0) cand.push_back(b);
  for (double b : b0_)
    if (b > 0.0) cand.push_back(b);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  for (double c : cand) {
    if ((*this)(c) < level || value_right(c) < level) return c;
  }
  // Unreachable for level > -1; kept for a total function.
  double largest = 0.0;
  if (!b1_.empty()) largest = std::max(largest, b1_.back());
  if (!b0_.empty()) largest = std::max(largest, b0_.back());
  return largest;
}

ThresholdEstimate estimate_t_hat(std::span<const double> eta1, std::span<const double> eta0,
                                 const HyperParams& hp) {
  if (!(hp.delta >= 0.0)) throw std::invalid_argument("estimate_t_hat: delta must be >= 0");
  if (!(hp.delta_n > 0.0)) throw std::invalid_argument("estimate_t_hat: delta_n must be > 0");
  if (!(hp.r_n > 0.0)) throw std::invalid_argument("estimate_t_hat: r_n must be > 0");
  const DisparityCurve curve(eta1, eta0, 0.0, 0.0);
  ThresholdEstimate est;
  est.t_mid = curve.infimum_below(hp.delta);
  est.t_min = curve.infimum_below(hp.delta + hp.delta_n);
  est.t_max = curve.infimum_below(hp.delta - hp.delta_n);
  if (est.t_mid - est.t_min <= hp.r_n) {
    est.t_hat = est.t_min;
  } else if (est.t_max - est.t_mid <= hp.r_n) {
    est.t_hat = est.t_max;
  } else {
    est.t_hat = est.t_mid;
  }
  const double n = static_cast<double>(eta1.size() + eta0.size());
  est.T1 = 0.5 + n * est.t_hat / (2.0 * static_cast<double>(eta1.size()));
  est.T0 = 0.5 - n * est.t_hat / (2.0 * static_cast<double>(eta0.size()));
  return est;
}

double rho(double x) {
  if (std::isnan(x)) throw std::invalid_argument("undefined ratio");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x;
}

BoundaryMasses estimate_boundary_masses(std::span<const double> eta, double T, double l) {
  if (eta.empty()) throw std::invalid_argument("empty group");
  if (l < 0.0) throw std::invalid_argument("estimate_boundary_masses: negative offset");
  std::size_t plus = 0, eq = 0;
  for (double e : eta) {
    if (e > T + l)
      ++plus;
    else if (e > T - l && e <= T + l)
      ++eq;
  }
  const double n = static_cast<double>(eta.size());
  return BoundaryMasses{static_cast<double>(plus) / n, static_cast<double>(eq) / n};
}

double estimate_delta_hat(std::span<const double> eta1, std::span<const double> eta0,
                          double delta, double l1, double l0) {
  if (!(delta >= 0.0)) throw std::invalid_argument("estimate_delta_hat: delta must be >= 0");
  // Offsets (l1, -l0) widen both acceptance sets toward each other, giving
  // the plug-in lower envelope for D_-(0).
  const DisparityCurve curve(eta1, eta0, l1, -l0);
  return curve(0.0) > delta ? delta : 0.0;
}

TauPair estimate_tau_hat(const BoundaryMasses& pi1, const BoundaryMasses& pi0,
                         double delta_hat) {
  TauPair tau;
  const double num1 = pi0.pi_plus - pi1.pi_plus + delta_hat;
  const double num0 = pi1.pi_plus - pi0.pi_plus - delta_hat;
  tau.tau1 = (pi1.pi_eq == 0.0) ? rho(0.0) : rho(num1 / pi1.pi_eq);
  tau.tau0 = (pi0.pi_eq == 0.0) ? rho(0.0) : rho(num0 / pi0.pi_eq);
  return tau;
}

double delta_n_schedule(std::size_t n, double c) {
  if (n < 2) throw std::invalid_argument("delta_n_schedule: n must be >= 2");
  if (!(c > 0.0)) throw std::invalid_argument("delta_n_schedule: c must be positive");
  double ll = std::log(std::log(static_cast<double>(n)));
  if (n < 16 && ll < 0.1) ll = 0.1;
  return c / ll;
}

double r_n_schedule(std::size_t n, double c) {
  if (n < 2) throw std::invalid_argument("r_n_schedule: n must be >= 2");
  if (!(c > 0.0)) throw std::invalid_argument("r_n_schedule: c must be positive");
  return c / std::log(static_cast<double>(n));
}

double delta_n_schedule(std::size_t n) { return delta_n_schedule(n, 0.1); }

double r_n_schedule(std::size_t n) { return r_n_schedule(n, 0.1); }

}  // namespace fairddp
