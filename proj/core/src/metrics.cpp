#include "fairddp/metrics.hpp"

#include <memory>
#include <sstream>
#include <stdexcept>

namespace fairddp {

const char* MetricReport::csv_header() {
  return "method,delta,n,seed,acc,ddp,d_E,d_R,runtime_ms";
}

std::string MetricReport::csv_row() const {
  std::ostringstream os;
  os << method << ',' << format_double(delta) << ',' << n << ',' << seed << ','
     << format_double(acc) << ',' << format_double(ddp) << ',' << format_double(d_E)
     << ',' << format_double(d_R) << ',' << format_double(runtime_ms);
  return os.str();
}

double empirical_ddp(const FairClassifier& f, const Dataset& test) {
  double sum[2] = {0.0, 0.0};
  std::size_t cnt[2] = {0, 0};
  for (std::size_t i = 0; i < test.size(); ++i) {
    const LabeledSample& s = test[i];
    sum[s.a] += f(s.x, s.a);
    ++cnt[s.a];
  }
  if (cnt[0] == 0 || cnt[1] == 0) throw std::invalid_argument("empty group");
  return sum[1] / static_cast<double>(cnt[1]) - sum[0] / static_cast<double>(cnt[0]);
}

double empirical_risk(const FairClassifier& f, const Dataset& test) {
  if (test.size() == 0) throw std::invalid_argument("empty dataset");
  double loss = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const LabeledSample& s = test[i];
    const double v = f(s.x, s.a);
    loss += v * (1.0 - s.y) + (1.0 - v) * s.y;
  }
  return loss / static_cast<double>(test.size());
}

namespace {

double eval_clf(const FairClassifier& f, double x1, double x2, int a) {
  const double x[2] = {x1, x2};
  return f(std::span<const double>(x, 2), a);
}

}  // namespace

double exact_d_E(const FairClassifier& f, const OracleFairBayes& oracle,
                 const GroupExpectation& E) {
  double total = 0.0;
  for (int a : {1, 0}) {
    auto g = [&](double x1, double x2) {
      const double diff = eval_clf(f, x1, x2, a) - oracle.accept_prob(x1, x2, a);
      return diff * (oracle.threshold(a) - oracle.eta(a, x1, x2));
    };
    total += oracle.p(a) * E(a, g);
  }
  return 2.0 * total;
}

double exact_risk(const FairClassifier& f, const OracleFairBayes& oracle,
                  const GroupExpectation& E) {
  double total = 0.0;
  for (int a : {1, 0}) {
    auto g = [&](double x1, double x2) {
      const double e = oracle.eta(a, x1, x2);
      return (1.0 - 2.0 * e) * eval_clf(f, x1, x2, a) + e;
    };
    total += oracle.p(a) * E(a, g);
  }
  return total;
}

double exact_d_R(const FairClassifier& f, const OracleFairBayes& oracle,
                 const GroupExpectation& E) {
  return exact_risk(f, oracle, E) - exact_risk(oracle.as_classifier(), oracle, E);
}

GroupExpectation synth_group_expectation(const SyntheticParams& p,
                                         CubeQuadrature::Options opt,
                                         std::vector<double> thresholds1,
                                         std::vector<double> thresholds0) {
  auto curves_for = [&p](int a, const std::vector<double>& thresholds) {
    std::vector<LevelCurve> curves;
    curves.reserve(thresholds.size());
    for (double T : thresholds) curves.push_back(eta_threshold_breaks(p, a, T));
    return merge_level_curves(curves);
  };
  auto c1 = std::make_shared<LevelCurve>(curves_for(1, thresholds1));
  auto c0 = std::make_shared<LevelCurve>(curves_for(0, thresholds0));
  return [opt, c1, c0](int a, const std::function<double(double, double)>& g) {
    const LevelCurve& curve = a == 1 ? *c1 : *c0;
    const CubeQuadrature quad(opt);
    if (!curve.x1_breaks) return quad.expect(g);
    return quad.expect(g, curve.x1_breaks, curve.x2_splits);
  };
}

double exact_ddp(const FairClassifier& f, const GroupExpectation& E) {
  auto g1 = [&](double x1, double x2) { return eval_clf(f, x1, x2, 1); };
  auto g0 = [&](double x1, double x2) { return eval_clf(f, x1, x2, 0); };
  return E(1, g1) - E(0, g0);
}

Regime classify_regime(double dminus0, double dplus0, double delta) {
  if (!(dminus0 <= dplus0)) throw std::invalid_argument("disparity bounds out of order");
  if (!(delta >= 0.0)) throw std::invalid_argument("negative disparity level");
  if (delta < dminus0) return Regime::fairness_impacted;
  if (delta < dplus0) return Regime::fair_boundary;
  return Regime::automatically_fair;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::fairness_impacted: return "fairness-impacted";
    case Regime::fair_boundary: return "fair-boundary";
    case Regime::automatically_fair: return "automatically-fair";
  }
  throw std::logic_error("unknown regime");
}

}  // namespace fairddp
