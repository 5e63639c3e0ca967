#include "fairddp/synth.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fairddp/rng.hpp"

namespace fairddp {

void validate(const SyntheticParams& p) {
  if (!(p.s1 > 0.0 && p.s1 < p.s2))
    throw std::invalid_argument("SyntheticParams: require 0 < s1 < s2");
  if (!(p.s1 + p.s2 <= 1.0))
    throw std::invalid_argument("SyntheticParams: require s1 + s2 <= 1 so eta stays in [0,1]");
  if (!(p.beta > 0.0)) throw std::invalid_argument("SyntheticParams: beta must be positive");
}

namespace {

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// x (1 - ln x), extended by continuity to 0 at x = 0; increasing on [0,1].
inline double xlog_term(double x) { return x > 0.0 ? x * (1.0 - std::log(x)) : 0.0; }

}  // namespace

double synth_eta(const SyntheticParams& p, int a, double x1, double x2) {
  validate(p);
  if (a != 0 && a != 1) throw std::invalid_argument("invalid protected attribute");
  if (std::abs(x1) > 1.0 || std::abs(x2) > 1.0)
    throw std::invalid_argument("synth_eta: point outside [-1,1]^2");
  const double base = (1.0 + (2.0 * a - 1.0) * p.s1) / 2.0;
  const double bump = std::pow(std::abs(x1) * (1.0 - std::abs(x2)), p.beta);
  return base + (p.s2 / 2.0) * sgn(x1) * bump;
}

Dataset sample_synthetic(const SyntheticParams& p, std::size_t n, std::uint64_t seed) {
  validate(p);
  if (n == 0) throw std::invalid_argument("sample_synthetic: n must be positive");
  SplitMix64 g(seed);
  Dataset data(2);
  for (std::size_t i = 0; i < n; ++i) {
    const int a = g.next_u01() < 0.5 ? 1 : 0;
    const double x1 = 2.0 * g.next_u01() - 1.0;
    const double x2 = 2.0 * g.next_u01() - 1.0;
    const int y = g.next_u01() < synth_eta(p, a, x1, x2) ? 1 : 0;
    data.add({x1, x2}, a, y);
  }
  return data;
}

double level_probability(const SyntheticParams& p, int a, double T) {
  validate(p);
  if (a != 0 && a != 1) throw std::invalid_argument("invalid protected attribute");
  // eta_0 = eta_1 - s1 pointwise, so both groups reduce to the group-1
  // tail P(eta1 > 1/2 + t) with t = T - 1/2 (+ s1 for group 0).
  const double t = T - 0.5 + (a == 0 ? p.s1 : 0.0);
  if (t <= (p.s1 - p.s2) / 2.0) return 1.0;
  if (t <= p.s1 / 2.0) {
    const double q = std::pow((p.s1 - 2.0 * t) / p.s2, 1.0 / p.beta);
    return 0.5 + 0.5 * xlog_term(q);
  }
  if (t <= (p.s1 + p.s2) / 2.0) {
    const double r = std::pow((2.0 * t - p.s1) / p.s2, 1.0 / p.beta);
    return 0.5 - 0.5 * xlog_term(r);
  }
  return 0.0;
}

double dminus_curve(const SyntheticParams& p, double t) {
  // P1(eta1 > 1/2 + t) - P0(eta0 > 1/2 - t); the >= / > distinction is
  // void because eta has a continuous distribution.
  return level_probability(p, 1, 0.5 + t) - level_probability(p, 0, 0.5 - t);
}

double dminus_zero(const SyntheticParams& p) {
  validate(p);
  const double q = std::pow(p.s1 / p.s2, 1.0 / p.beta);
  return xlog_term(q);
}

double bayes_risk(const SyntheticParams& p, double q_star) {
  validate(p);
  if (!(q_star >= 0.0 && q_star <= 1.0))
    throw std::invalid_argument("bayes_risk: q_star must lie in [0,1]");
  const double b1 = p.beta + 1.0;
  const double qb1 = std::pow(q_star, b1);
  const double qlnq = q_star > 0.0 ? qb1 * std::log(q_star) : 0.0;
  return 0.5 - (p.s1 / 2.0) * xlog_term(q_star) -
         (p.s2 / (2.0 * b1)) * ((1.0 - qb1) / b1 + qlnq);
}

OracleSolution solve_t_star(const SyntheticParams& p, double delta) {
  validate(p);
  if (!(delta >= 0.0)) throw std::invalid_argument("solve_t_star: delta must be >= 0");
  OracleSolution sol;
  sol.delta = delta;
  const double d0 = dminus_zero(p);
  if (delta >= d0) {
    sol.t_star = 0.0;
    sol.q_star = std::pow(p.s1 / p.s2, 1.0 / p.beta);
    sol.ddp = d0;
  } else if (delta == 0.0) {
    sol.t_star = p.s1 / 2.0;
    sol.q_star = 0.0;
    sol.ddp = 0.0;
  } else {
    // D(t) = q_t (1 - ln q_t) is strictly decreasing on [0, s1/2]; bisect.
    double lo = 0.0, hi = p.s1 / 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (dminus_curve(p, mid) > delta)
        lo = mid;
      else
        hi = mid;
      if (hi - lo <= 1e-16 * p.s1) break;
    }
    double t = 0.5 * (lo + hi);
    if (std::abs(dminus_curve(p, t) - delta) > 1e-12)
      throw std::runtime_error("solve_t_star: bisection residual above 1e-12");
    sol.t_star = t;
    sol.q_star = std::pow((p.s1 - 2.0 * t) / p.s2, 1.0 / p.beta);
    sol.ddp = delta;
  }
  sol.T1 = 0.5 + sol.t_star;
  sol.T0 = 0.5 - sol.t_star;
  sol.risk = bayes_risk(p, sol.q_star);
  return sol;
}

namespace {

using boost::math::quadrature::gauss_kronrod;

// One smooth panel in x1 for a fixed x2; GK15 with internal bisection.
double inner_integral(const CubeQuadrature::Integrand& g, double x2, double lo, double hi,
                      double tol, int max_depth, double* err_acc) {
  if (hi - lo <= 0.0) return 0.0;
  double err = 0.0;
  const double v = gauss_kronrod<double, 15>::integrate(
      [&](double x1) { return g(x1, x2); }, lo, hi, max_depth, tol, &err);
  *err_acc += err;
  return v;
}

}  // namespace

double CubeQuadrature::expect(const Integrand& g) const {
  return expect(g, BreakFn{}, {});
}

double CubeQuadrature::expect(const Integrand& g, const BreakFn& x1_breaks,
                              std::span<const double> x2_splits) const {
  if (!g) throw std::invalid_argument("CubeQuadrature: empty integrand");
  // x2 panels: [-1,1] cut at 0 (the 1-|x2| kink) and at caller splits.
  std::vector<double> cuts{-1.0, 0.0, 1.0};
  for (double s : x2_splits)
    if (s > -1.0 && s < 1.0) cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Relative scale: the outer integral runs over total width 2, the inner
  // over width 2, and the uniform density is 1/4.
  const double inner_tol = opt_.abs_tol * 1e-2;
  const double outer_tol = opt_.abs_tol * 0.5;

  double total = 0.0, outer_err = 0.0, inner_err_worst = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto outer_fn = [&](double x2) {
      // x1 panels: cut at 0 and at the discontinuity curves.
      std::vector<double> xc{-1.0, 0.0, 1.0};
      if (x1_breaks) {
        for (double b : x1_breaks(x2))
          if (b > -1.0 && b < 1.0) xc.push_back(b);
      }
      std::sort(xc.begin(), xc.end());
      xc.erase(std::unique(xc.begin(), xc.end()), xc.end());
      double v = 0.0, ierr = 0.0;
      for (std::size_t k = 0; k + 1 < xc.size(); ++k)
        v += inner_integral(g, x2, xc[k], xc[k + 1], inner_tol, opt_.max_depth, &ierr);
      if (ierr > inner_err_worst) inner_err_worst = ierr;
      return v;
    };
    double err = 0.0;
    total += gauss_kronrod<double, 15>::integrate(outer_fn, cuts[i], cuts[i + 1],
                                                  opt_.max_depth, outer_tol, &err);
    outer_err += err;
  }
  const double achieved = 0.25 * (outer_err + 2.0 * inner_err_worst);
  if (achieved > opt_.abs_tol) {
    std::ostringstream msg;
    msg << "CubeQuadrature: tolerance " << opt_.abs_tol << " not reached (achieved "
        << achieved << ", estimate " << 0.25 * total << ")";
    throw std::runtime_error(msg.str());
  }
  return 0.25 * total;
}

LevelCurve eta_threshold_breaks(const SyntheticParams& p, int a, double T) {
  validate(p);
  if (a != 0 && a != 1) throw std::invalid_argument("invalid protected attribute");
  const double w = (2.0 * T - 1.0 - (2.0 * a - 1.0) * p.s1) / p.s2;
  LevelCurve lc;
  if (w == 0.0 || std::abs(w) >= 1.0) {
    // Boundary along x1 = 0 (already a panel edge) or outside the square.
    lc.x1_breaks = [](double) { return std::vector<double>{}; };
    return lc;
  }
  const double mag = std::pow(std::abs(w), 1.0 / p.beta);
  const double s = w > 0.0 ? 1.0 : -1.0;
  // |x1| (1 - |x2|) = mag leaves the square when 1 - |x2| < mag.
  const double x2_exit = 1.0 - mag;
  lc.x2_splits = {-x2_exit, x2_exit};
  lc.x1_breaks = [mag, s](double x2) {
    const double denom = 1.0 - std::abs(x2);
    std::vector<double> out;
    if (denom > mag) out.push_back(s * mag / denom);
    return out;
  };
  return lc;
}

LevelCurve merge_level_curves(const std::vector<LevelCurve>& curves) {
  LevelCurve lc;
  for (const auto& c : curves)
    lc.x2_splits.insert(lc.x2_splits.end(), c.x2_splits.begin(), c.x2_splits.end());
  std::sort(lc.x2_splits.begin(), lc.x2_splits.end());
  lc.x2_splits.erase(std::unique(lc.x2_splits.begin(), lc.x2_splits.end()),
                     lc.x2_splits.end());
  std::vector<CubeQuadrature::BreakFn> fns;
  for (const auto& c : curves)
    if (c.x1_breaks) fns.push_back(c.x1_breaks);
  lc.x1_breaks = [fns](double x2) {
    std::vector<double> out;
    for (const auto& f : fns) {
      auto b = f(x2);
      out.insert(out.end(), b.begin(), b.end());
    }
    return out;
  };
  return lc;
}

}  // namespace fairddp
