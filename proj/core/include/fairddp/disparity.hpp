#pragma once
// Empirical disparity curve over regression values and the Step-2
// machinery built on it: the bracketed threshold-location estimate, the
// group thresholds, boundary masses, the effective disparity level, and
// the randomization weights.

#include <cstddef>
#include <span>
#include <vector>

#include "fairddp/types.hpp"

namespace fairddp {

// D-hat(t) = (1/n1) #{ eta1_j > 1/2 + n t/(2 n1) + l1 }
//          - (1/n0) #{ eta0_j > 1/2 - n t/(2 n0) + l0 },
// a nonincreasing step function of t.  Stored as the two sorted breakpoint
// lists b1_j = 2 n1 (eta1_j - 1/2 - l1)/n and b0_j = 2 n0 (1/2 + l0 - eta0_j)/n;
// the group-1 indicator is t < b1_j and the group-0 indicator is t > b0_j,
// so evaluation is two binary searches.
class DisparityCurve {
 public:
  DisparityCurve(std::span<const double> eta1, std::span<const double> eta0,
                 double l1, double l0);

  double operator()(double t) const;    // exact step-function value
  double value_right(double t) const;   // limit from the right

  // inf{ t >= 0 : D-hat(t) < level }.  The infimum of a nonincreasing step
  // function is 0 or a breakpoint; it may fail to be attained when the
  // strict drop happens just past a group-0 breakpoint, which is why the
  // right limit participates.  If no t qualifies (level <= terminal value,
  // only possible for level <= -1) the documented fallback is the largest
  // breakpoint.
  double infimum_below(double level) const;

  std::size_t n1() const noexcept { return n1_; }
  std::size_t n0() const noexcept { return n0_; }
  const std::vector<double>& breakpoints1() const noexcept { return b1_; }
  const std::vector<double>& breakpoints0() const noexcept { return b0_; }

 private:
  std::vector<double> b1_;  // ascending
  std::vector<double> b0_;  // ascending
  std::size_t n1_ = 0, n0_ = 0;
};

// t-hat bracketing per the three-level rule: candidates at levels
// delta + Delta_n (t_min), delta (t_mid), delta - Delta_n (t_max);
// t_min wins when t_mid is within r_n of it, else t_max when it is within
// r_n of t_mid, else t_mid.  T-hat_a = 1/2 + (2a-1) n t-hat / (2 n_a).
struct ThresholdEstimate {
  double t_min = 0.0, t_mid = 0.0, t_max = 0.0, t_hat = 0.0;
  double T1 = 0.5, T0 = 0.5;
};
ThresholdEstimate estimate_t_hat(std::span<const double> eta1, std::span<const double> eta0,
                                 const HyperParams& hp);

// Clamp to [0, 1]; +-infinity map to the endpoints; NaN is "undefined ratio".
double rho(double x);

// pi_plus = frac(eta > T + l), pi_eq = frac(T - l < eta <= T + l).
// With l = 0 the half-open band (T, T] is empty, so pi_eq = 0.
struct BoundaryMasses {
  double pi_plus = 0.0;
  double pi_eq = 0.0;
};
BoundaryMasses estimate_boundary_masses(std::span<const double> eta, double T, double l);

// delta-hat = delta * 1{ D-hat(0, l1, -l0) > delta }: the target level is
// enforced only when the offset-widened plug-in for D_-(0) still exceeds it.
double estimate_delta_hat(std::span<const double> eta1, std::span<const double> eta0,
                          double delta, double l1, double l0);

// tau1 = rho((pi0_plus - pi1_plus + delta_hat) / pi1_eq), tau0 mirrored
// with -delta_hat; x/0 := 0 before rho.
struct TauPair {
  double tau1 = 0.0;
  double tau0 = 0.0;
};
TauPair estimate_tau_hat(const BoundaryMasses& pi1, const BoundaryMasses& pi0,
                         double delta_hat);

// Schedules c/log log n and c/log n (natural logs, default c = 0.1);
// log log n is floored at 0.1 for n < 16 so tiny samples keep a finite
// bracket.
double delta_n_schedule(std::size_t n, double c);
double r_n_schedule(std::size_t n, double c);
double delta_n_schedule(std::size_t n);
double r_n_schedule(std::size_t n);

}  // namespace fairddp
