#pragma once
// Evaluation: empirical disparity and risk on a labeled sample, exact
// (quadrature-backed) distances to the fair Bayes oracle, and the regime
// classification of a disparity level.

#include <cstdint>
#include <functional>
#include <string>

#include "fairddp/fairclf.hpp"
#include "fairddp/synth.hpp"
#include "fairddp/types.hpp"

namespace fairddp {

// One result row; serializes to CSV in this fixed column order.
struct MetricReport {
  std::string method;
  double delta = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double acc = 0.0;
  double ddp = 0.0;
  double d_E = 0.0;
  double d_R = 0.0;
  double runtime_ms = 0.0;

  static const char* csv_header();  // "method,delta,n,seed,acc,ddp,d_E,d_R,runtime_ms"
  std::string csv_row() const;
};

// Mean acceptance probability of group 1 minus group 0 (probabilities,
// not sampled labels, so randomization adds no noise here).
double empirical_ddp(const FairClassifier& f, const Dataset& test);

// Mean of f(x,a)(1-y) + (1-f(x,a)) y: expected 0-1 loss of the
// randomized decision.
double empirical_risk(const FairClassifier& f, const Dataset& test);

// E_{X|A=a}[g(X)] for the evaluation distribution (2-d features).
using GroupExpectation =
    std::function<double(int a, const std::function<double(double, double)>& g)>;

// Quadrature-backed expectation for the synthetic benchmark.  thresholds1
// and thresholds0 list known threshold levels of the integrand's
// classifiers; their eta level curves become panel break hints.
GroupExpectation synth_group_expectation(const SyntheticParams& p,
                                         CubeQuadrature::Options opt,
                                         std::vector<double> thresholds1 = {},
                                         std::vector<double> thresholds0 = {});

// Fairness-aware excess risk
//   d_E(f, f*) = 2 sum_a p_a E_a[ (f - f*) (T*_a - eta_a) ],
// nonnegative for any delta-fair f by the oracle's optimality.
double exact_d_E(const FairClassifier& f, const OracleFairBayes& oracle,
                 const GroupExpectation& E);

// Plain excess risk R(f) - R(f*), via
//   R(g) = sum_a p_a E_a[ (1 - 2 eta_a) g + eta_a ].
double exact_d_R(const FairClassifier& f, const OracleFairBayes& oracle,
                 const GroupExpectation& E);

double exact_risk(const FairClassifier& f, const OracleFairBayes& oracle,
                  const GroupExpectation& E);

// Population disparity of f under the evaluation distribution.
double exact_ddp(const FairClassifier& f, const GroupExpectation& E);

enum class Regime { fairness_impacted, fair_boundary, automatically_fair };

// delta < D_-(0): impacted; D_-(0) <= delta < D_+(0): boundary;
// delta >= D_+(0): automatically fair.  Requires D_-(0) <= D_+(0).
Regime classify_regime(double dminus0, double dplus0, double delta);
const char* regime_name(Regime r);

}  // namespace fairddp
