#pragma once
// The fitted group-thresholded fair classifier: per-group regression
// (Step 1), disparity-calibrated thresholds and randomization (Step 2),
// and the population oracle counterpart used for evaluation.

#include <iosfwd>
#include <memory>
#include <optional>

#include "fairddp/disparity.hpp"
#include "fairddp/lpreg.hpp"
#include "fairddp/types.hpp"

namespace fairddp {

// Everything Step 2 derives from the training regression values.
struct StepTwoResult {
  ThresholdEstimate thresholds;
  BoundaryMasses pi1, pi0;
  double delta_hat = 0.0;
  TauPair tau;
  double dminus0_hat = 0.0;  // offset plug-in D-hat(0, l1, -l0)
  double dplus0_hat = 0.0;   // offset plug-in D-hat(0, -l1, l0)
};

// Step 2 alone, from regression values evaluated at the training points.
// Group labels here are the labels the values were computed under; any
// group swap is the caller's concern (fit handles it).
StepTwoResult fit_from_values(std::span<const double> eta1, std::span<const double> eta0,
                              const HyperParams& hp);

// delta-tilde = delta * 1{dminus0 > delta}: the population analogue of the
// effective level (no enforcement needed once D_-(0) <= delta).
double delta_tilde(double delta, double dminus0);

// The banded threshold rule applied to a regression value: 1 above
// threshold + offset, tau inside the closed band, 0 below.
double band_acceptance(double eta, double threshold, double offset, double tau);

// Population randomization weights; identical formula to the empirical
// tau-hat and shared with it.
TauPair optimal_randomization(const BoundaryMasses& pi1, const BoundaryMasses& pi0,
                              double delta_tilde);

class FittedFairBayes {
 public:
  // Acceptance probability for a query in ORIGINAL group labels.
  double accept_prob(std::span<const double> x, int a) const;
  void accept_prob_rows(const std::vector<double>& xs_rowmajor, int a,
                        std::vector<double>& out) const;
  // Same rule applied to an externally computed regression value.
  double accept_prob_from_eta(double eta, int a) const;
  int predict(std::span<const double> x, int a, double u) const;
  FairClassifier as_classifier() const;

  const StepTwoResult& step2() const noexcept { return s2_; }
  const HyperParams& hyper() const noexcept { return hp_; }
  bool swapped() const noexcept { return swapped_; }
  double bandwidth_multiplier(int a) const { return a == 1 ? c1_ : c0_; }
  // Estimator for an original group label.
  const LocalPolyEstimator& estimator(int a) const;

  // Flat self-describing text dump (format version tag first); training
  // rows ship with the model because the kernel estimator needs them.
  void save(std::ostream& os) const;
  static FittedFairBayes load(std::istream& is);

 private:
  friend FittedFairBayes fit(const Dataset&, const HyperParams&, double, double,
                             const KernelSpec&);
  FittedFairBayes() = default;

  // Estimators and Step-2 quantities are stored in the internal labeling;
  // swapped_ maps original a to internal 1-a.
  std::shared_ptr<LocalPolyEstimator> est1_, est0_;
  HyperParams hp_;  // offsets in internal labeling
  StepTwoResult s2_;
  bool swapped_ = false;
  double c1_ = 0.0, c0_ = 0.0;
};

// Full pipeline at fixed bandwidth multipliers (c1, c0 for the original
// groups): Step 1 per group, then Step 2 on the training-point values.
// If the offset plug-ins indicate the disparity runs the other way
// (D-hat_+(0) < -D-hat_-(0)), the groups are relabeled internally and
// restored on output; the swapped() flag records it.
FittedFairBayes fit(const Dataset& train, const HyperParams& hp, double c1, double c0,
                    const KernelSpec& kernel = {});
// Convenience overload: requires a single-entry bandwidth grid.
FittedFairBayes fit(const Dataset& train, const HyperParams& hp,
                    const KernelSpec& kernel = {});

// Population fair Bayes rule built from known ingredients: thresholds
// T1 = 1/2 + t*/(2 p1), T0 = 1/2 - t*/(2 p0), randomization on exact
// threshold ties.
class OracleFairBayes {
 public:
  using EtaFn = std::function<double(int a, double x1, double x2)>;

  // Throws std::invalid_argument for p outside (0,1), |t*| > min(p1, p0),
  // or tau outside [0,1].
  OracleFairBayes(EtaFn eta, double p1, double t_star, double tau1 = 0.0, double tau0 = 0.0);

  double eta(int a, double x1, double x2) const { return eta_(a, x1, x2); }
  double p(int a) const noexcept { return a == 1 ? p1_ : 1.0 - p1_; }
  double threshold(int a) const noexcept { return a == 1 ? T1_ : T0_; }
  double t_star() const noexcept { return t_star_; }
  double tau(int a) const noexcept { return a == 1 ? tau1_ : tau0_; }

  double accept_prob(double x1, double x2, int a) const;
  FairClassifier as_classifier() const;

 private:
  EtaFn eta_;
  double p1_, t_star_, T1_, T0_, tau1_, tau0_;
};

}  // namespace fairddp
