#include "fairddp/fairclf.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fairddp {

StepTwoResult fit_from_values(std::span<const double> eta1, std::span<const double> eta0,
                              const HyperParams& hp) {
  StepTwoResult r;
  r.thresholds = estimate_t_hat(eta1, eta0, hp);
  r.pi1 = estimate_boundary_masses(eta1, r.thresholds.T1, hp.l1);
  r.pi0 = estimate_boundary_masses(eta0, r.thresholds.T0, hp.l0);
  r.delta_hat = estimate_delta_hat(eta1, eta0, hp.delta, hp.l1, hp.l0);
  r.tau = estimate_tau_hat(r.pi1, r.pi0, r.delta_hat);
  r.dminus0_hat = DisparityCurve(eta1, eta0, hp.l1, -hp.l0)(0.0);
  r.dplus0_hat = DisparityCurve(eta1, eta0, -hp.l1, hp.l0)(0.0);
  return r;
}

double delta_tilde(double delta, double dminus0) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta_tilde: delta must be >= 0");
  return dminus0 > delta ? delta : 0.0;
}

TauPair optimal_randomization(const BoundaryMasses& pi1, const BoundaryMasses& pi0,
                              double delta_tilde) {
  return estimate_tau_hat(pi1, pi0, delta_tilde);
}

double band_acceptance(double eta, double threshold, double offset, double tau) {
  if (eta > threshold + offset) return 1.0;
  if (std::abs(eta - threshold) <= offset) return tau;
  return 0.0;
}

namespace {

double band_accept(double eta, double T, double l, double tau) {
  return band_acceptance(eta, T, l, tau);
}

}  // namespace

double FittedFairBayes::accept_prob_from_eta(double eta, int a) const {
  if (a != 0 && a != 1) throw std::invalid_argument("invalid protected attribute");
  const int g = swapped_ ? 1 - a : a;
  if (g == 1) return band_accept(eta, s2_.thresholds.T1, hp_.l1, s2_.tau.tau1);
  return band_accept(eta, s2_.thresholds.T0, hp_.l0, s2_.tau.tau0);
}

const LocalPolyEstimator& FittedFairBayes::estimator(int a) const {
  if (a != 0 && a != 1) throw std::invalid_argument("invalid protected attribute");
  const int g = swapped_ ? 1 - a : a;
  return g == 1 ? *est1_ : *est0_;
}

double FittedFairBayes::accept_prob(std::span<const double> x, int a) const {
  if (a != 0 && a != 1) throw std::invalid_argument("invalid protected attribute");
  const int g = swapped_ ? 1 - a : a;
  const double eta = (g == 1 ? *est1_ : *est0_)(x);
  return g == 1 ? band_accept(eta, s2_.thresholds.T1, hp_.l1, s2_.tau.tau1)
                : band_accept(eta, s2_.thresholds.T0, hp_.l0, s2_.tau.tau0);
}

void FittedFairBayes::accept_prob_rows(const std::vector<double>& xs_rowmajor, int a,
                                       std::vector<double>& out) const {
  if (a != 0 && a != 1) throw std::invalid_argument("invalid protected attribute");
  const int g = swapped_ ? 1 - a : a;
  const LocalPolyEstimator& est = g == 1 ? *est1_ : *est0_;
  est.evaluate_rows(xs_rowmajor, out);
  const double T = g == 1 ? s2_.thresholds.T1 : s2_.thresholds.T0;
  const double l = g == 1 ? hp_.l1 : hp_.l0;
  const double tau = g == 1 ? s2_.tau.tau1 : s2_.tau.tau0;
  for (double& v : out) v = band_accept(v, T, l, tau);
}

int FittedFairBayes::predict(std::span<const double> x, int a, double u) const {
  return u < accept_prob(x, a) ? 1 : 0;
}

FairClassifier FittedFairBayes::as_classifier() const {
  auto self = *this;  // shared_ptr copies keep the estimators alive
  return FairClassifier(
      [self](std::span<const double> x, int a) { return self.accept_prob(x, a); },
      "fairbayes-ddp");
}

FittedFairBayes fit(const Dataset& train, const HyperParams& hp, double c1, double c0,
                    const KernelSpec& kernel) {
  if (!(hp.delta >= 0.0)) throw std::invalid_argument("fit: delta must be >= 0");
  if (hp.l1 < 0.0 || hp.l0 < 0.0) throw std::invalid_argument("fit: offsets must be >= 0");
  GroupPair groups = split_by_group(train);

  auto build = [&](const GroupView& g, double c) {
    const double h = default_bandwidth(c, g.n_a, hp.beta, g.d);
    return std::make_shared<LocalPolyEstimator>(g, h, hp.degree, kernel);
  };

  FittedFairBayes model;
  model.hp_ = hp;
  model.c1_ = c1;
  model.c0_ = c0;
  model.est1_ = build(groups.g1, c1);
  model.est0_ = build(groups.g0, c0);

  std::vector<double> v1, v0;
  model.est1_->evaluate_rows(groups.g1.xs, v1);
  model.est0_->evaluate_rows(groups.g0.xs, v0);

  // Orientation check on the offset plug-ins: when the disparity runs the
  // other way, relabel internally and redo Step 2 with roles exchanged.
  const double dm0 = DisparityCurve(v1, v0, hp.l1, -hp.l0)(0.0);
  const double dp0 = DisparityCurve(v1, v0, -hp.l1, hp.l0)(0.0);
  if (dp0 < -dm0) {
    model.swapped_ = true;
    std::swap(model.est1_, model.est0_);
    std::swap(model.c1_, model.c0_);
    std::swap(v1, v0);
    std::swap(model.hp_.l1, model.hp_.l0);
  }
  model.s2_ = fit_from_values(v1, v0, model.hp_);
  return model;
}

FittedFairBayes fit(const Dataset& train, const HyperParams& hp, const KernelSpec& kernel) {
  if (hp.bandwidth_grid.size() != 1)
    throw std::invalid_argument(
        "fit: bandwidth grid must have exactly one entry; run bandwidth selection first");
  return fit(train, hp, hp.bandwidth_grid.front(), hp.bandwidth_grid.front(), kernel);
}

namespace {

void write_double(std::ostream& os, double v) {
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
}

}  // namespace

void FittedFairBayes::save(std::ostream& os) const {
  os << "fairddp-model 1\n";
  os << "kernel " << (est1_->kernel().name.empty() ? "gaussian" : est1_->kernel().name) << "\n";
  os << "delta ";
  write_double(os, hp_.delta);
  os << "\nbeta ";
  write_double(os, hp_.beta);
  os << "\ndegree " << hp_.degree;
  os << "\ndelta_n ";
  write_double(os, hp_.delta_n);
  os << "\nr_n ";
  write_double(os, hp_.r_n);
  os << "\nl1 ";
  write_double(os, hp_.l1);
  os << "\nl0 ";
  write_double(os, hp_.l0);
  os << "\nswapped " << (swapped_ ? 1 : 0);
  os << "\nc1 ";
  write_double(os, c1_);
  os << "\nc0 ";
  write_double(os, c0_);
  os << "\nh1 ";
  write_double(os, est1_->bandwidth());
  os << "\nh0 ";
  write_double(os, est0_->bandwidth());
  os << "\nt_hat ";
  write_double(os, s2_.thresholds.t_hat);
  os << "\nT1 ";
  write_double(os, s2_.thresholds.T1);
  os << "\nT0 ";
  write_double(os, s2_.thresholds.T0);
  os << "\ntau1 ";
  write_double(os, s2_.tau.tau1);
  os << "\ntau0 ";
  write_double(os, s2_.tau.tau0);
  os << "\nd " << est1_->dim() << "\n";
  for (int g = 1; g >= 0; --g) {
    const LocalPolyEstimator& est = g == 1 ? *est1_ : *est0_;
    os << "group " << g << " n " << est.train_size() << "\n";
    const auto& xs = est.train_xs();
    const auto& ys = est.train_ys();
    const int d = est.dim();
    for (std::size_t j = 0; j < est.train_size(); ++j) {
      for (int t = 0; t < d; ++t) {
        write_double(os, xs[j * static_cast<std::size_t>(d) + static_cast<std::size_t>(t)]);
        os << ' ';
      }
      os << ys[j] << "\n";
    }
  }
}

FittedFairBayes FittedFairBayes::load(std::istream& is) {
  auto fail = [](const std::string& what) -> void {
    throw std::runtime_error("FittedFairBayes::load: " + what);
  };
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (!is || tag != "fairddp-model") fail("not a model file");
  if (version != 1) fail("unsupported format version");

  FittedFairBayes model;
  std::string kernel_name;
  auto expect_key = [&](const char* key) {
    std::string k;
    is >> k;
    if (!is || k != key) fail(std::string("missing field ") + key);
  };
  expect_key("kernel");
  is >> kernel_name;
  expect_key("delta");
  is >> model.hp_.delta;
  expect_key("beta");
  is >> model.hp_.beta;
  expect_key("degree");
  is >> model.hp_.degree;
  expect_key("delta_n");
  is >> model.hp_.delta_n;
  expect_key("r_n");
  is >> model.hp_.r_n;
  expect_key("l1");
  is >> model.hp_.l1;
  expect_key("l0");
  is >> model.hp_.l0;
  expect_key("swapped");
  int sw = 0;
  is >> sw;
  model.swapped_ = sw != 0;
  expect_key("c1");
  is >> model.c1_;
  expect_key("c0");
  is >> model.c0_;
  double h1 = 0.0, h0 = 0.0;
  expect_key("h1");
  is >> h1;
  expect_key("h0");
  is >> h0;
  expect_key("t_hat");
  is >> model.s2_.thresholds.t_hat;
  expect_key("T1");
  is >> model.s2_.thresholds.T1;
  expect_key("T0");
  is >> model.s2_.thresholds.T0;
  expect_key("tau1");
  is >> model.s2_.tau.tau1;
  expect_key("tau0");
  is >> model.s2_.tau.tau0;
  expect_key("d");
  int d = 0;
  is >> d;
  if (!is || d <= 0) fail("bad dimension");
  if (kernel_name != "gaussian") fail("unknown kernel " + kernel_name);

  for (int g = 1; g >= 0; --g) {
    std::string key;
    int glabel = -1;
    std::string nkey;
    std::size_t n = 0;
    is >> key >> glabel >> nkey >> n;
    if (!is || key != "group" || glabel != g || nkey != "n" || n == 0) fail("bad group header");
    GroupView gv;
    gv.a = g;
    gv.d = d;
    gv.n_a = n;
    gv.xs.resize(n * static_cast<std::size_t>(d));
    gv.ys.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (int t = 0; t < d; ++t) is >> gv.xs[j * static_cast<std::size_t>(d) + static_cast<std::size_t>(t)];
      int y = 0;
      is >> y;
      gv.ys[j] = y;
    }
    if (!is) fail("truncated training rows");
    auto est = std::make_shared<LocalPolyEstimator>(gv, g == 1 ? h1 : h0, model.hp_.degree);
    (g == 1 ? model.est1_ : model.est0_) = est;
  }
  return model;
}

OracleFairBayes::OracleFairBayes(EtaFn eta, double p1, double t_star, double tau1, double tau0)
    : eta_(std::move(eta)), p1_(p1), t_star_(t_star), tau1_(tau1), tau0_(tau0) {
  if (!eta_) throw std::invalid_argument("OracleFairBayes: empty eta");
  if (!(p1_ > 0.0 && p1_ < 1.0))
    throw std::invalid_argument("OracleFairBayes: p1 must lie in (0,1)");
  const double p0 = 1.0 - p1_;
  const double bound = std::min(p1_, p0);
  if (!(std::abs(t_star_) <= bound))
    throw std::invalid_argument("OracleFairBayes: threshold shift out of range");
  if (!(tau1_ >= 0.0 && tau1_ <= 1.0 && tau0_ >= 0.0 && tau0_ <= 1.0))
    throw std::invalid_argument("OracleFairBayes: tau must lie in [0,1]");
  T1_ = 0.5 + t_star_ / (2.0 * p1_);
  T0_ = 0.5 - t_star_ / (2.0 * p0);
}

double OracleFairBayes::accept_prob(double x1, double x2, int a) const {
  if (a != 0 && a != 1) throw std::invalid_argument("invalid protected attribute");
  const double e = eta_(a, x1, x2);
  const double T = a == 1 ? T1_ : T0_;
  if (e > T) return 1.0;
  if (e == T) return a == 1 ? tau1_ : tau0_;
  return 0.0;
}

FairClassifier OracleFairBayes::as_classifier() const {
  auto self = *this;
  return FairClassifier(
      [self](std::span<const double> x, int a) {
        if (x.size() != 2)
          throw std::invalid_argument("OracleFairBayes: expects 2-d features");
        return self.accept_prob(x[0], x[1], a);
      },
      "oracle");
}

}  // namespace fairddp
