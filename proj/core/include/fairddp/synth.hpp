#pragma once
// The two-group benchmark distribution with a closed-form fair Bayes
// solution, used as ground truth by the experiment harness:
//   A ~ Bernoulli(1/2),  X | A ~ Uniform([-1,1]^2),
//   eta_a(x1, x2) = (1 + (2a-1) s1)/2 + (s2/2) sign(x1) (|x1| (1-|x2|))^beta,
// with sign(0) = 0 and 0 < s1 < s2, s1 + s2 <= 1.
//
// Writing q_t = ((s1 - 2t)/s2)^(1/beta), the disparity of the t-shifted
// Bayes rule is D(t) = q_t (1 - ln q_t) on (0, s1/2], so the fair
// threshold shift t* solves D(t) = min(delta, D(0)) and everything
// downstream (thresholds, disparity, risk) has an explicit form.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fairddp/types.hpp"

namespace fairddp {

struct SyntheticParams {
  double s1 = 0.2;
  double s2 = 0.8;
  double beta = 1.0;
};

// Throws std::invalid_argument when the parameters leave [0,1]-valued eta
// (requires 0 < s1 < s2, s1 + s2 <= 1, beta > 0).
void validate(const SyntheticParams& p);

// eta_a at a point of the square; |x1|, |x2| <= 1 enforced.
double synth_eta(const SyntheticParams& p, int a, double x1, double x2);

// n iid samples.  Per sample, four uniforms are consumed from a
// SplitMix64 stream in fixed order: u_a (a = 1 iff u_a < 1/2), u_x1 and
// u_x2 (x = 2u - 1), u_y (y = 1 iff u_y < eta_a(x)).
Dataset sample_synthetic(const SyntheticParams& p, std::size_t n, std::uint64_t seed);

// P_a(eta_a > T), piecewise closed form (exact on every branch).
double level_probability(const SyntheticParams& p, int a, double T);

// D_-(t) = P1(eta1 > 1/2 + t) - P0(eta0 >= 1/2 - t) for equal group
// weights; continuous here (eta has no atoms), so D_+ coincides with it.
double dminus_curve(const SyntheticParams& p, double t);
double dminus_zero(const SyntheticParams& p);

struct OracleSolution {
  double delta = 0.0;
  double t_star = 0.0;   // threshold shift, in [0, s1/2]
  double q_star = 0.0;   // ((s1 - 2 t*)/s2)^(1/beta)
  double T1 = 0.5;       // 1/2 + t*
  double T0 = 0.5;       // 1/2 - t*
  double ddp = 0.0;      // min(delta, D_-(0)), the disparity attained
  double risk = 0.0;     // misclassification risk of the fair Bayes rule
};

// Fair Bayes threshold shift at level delta.  delta = 0 returns t* = s1/2
// exactly; delta >= D_-(0) returns 0; otherwise bisection to a residual
// |D(t*) - delta| <= 1e-12.
OracleSolution solve_t_star(const SyntheticParams& p, double delta);

// Risk of the fair Bayes rule expressed through q* (q* = 0 is the exactly
// fair rule, q* = (s1/s2)^(1/beta) the unconstrained one):
//   1/2 - (s1 q/2)(1 - ln q)
//       - (s2/(2(beta+1))) [ (1 - q^(beta+1))/(beta+1) + q^(beta+1) ln q ],
// with x ln x -> 0 at 0.
double bayes_risk(const SyntheticParams& p, double q_star);

// Adaptive expectation over X ~ Uniform([-1,1]^2).  Panels are split at
// the axes (the |.| kinks) and at caller-supplied x1 discontinuity curves;
// each panel runs Gauss-Kronrod with interval bisection, so indicator
// integrands without break hints still converge, just more slowly.
// Throws std::runtime_error naming the achieved error when the tolerance
// is not reached.
class CubeQuadrature {
 public:
  struct Options {
    double abs_tol = 1e-8;
    int max_depth = 15;  // bisection depth inside each panel
  };

  CubeQuadrature() = default;
  explicit CubeQuadrature(Options opt) : opt_(opt) {}

  using Integrand = std::function<double(double, double)>;
  // x1 discontinuity locations for a given x2 (outside [-1,1] is ignored).
  using BreakFn = std::function<std::vector<double>(double)>;

  double expect(const Integrand& g) const;
  double expect(const Integrand& g, const BreakFn& x1_breaks,
                std::span<const double> x2_splits = {}) const;

 private:
  Options opt_;
};

// Break structure of { eta_a(x) > T }: the single x1 level curve
// x1(x2) = sgn(w) |w|^(1/beta) / (1 - |x2|) with w = (2T - 1 - (2a-1) s1)/s2,
// plus the |x2| beyond which the curve leaves the square (returned as the
// x2 split points).
struct LevelCurve {
  CubeQuadrature::BreakFn x1_breaks;
  std::vector<double> x2_splits;
};
LevelCurve eta_threshold_breaks(const SyntheticParams& p, int a, double T);
// Union of several curves (e.g. the thresholds of two classifiers).
LevelCurve merge_level_curves(const std::vector<LevelCurve>& curves);

}  // namespace fairddp
