#include "fairddp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fairddp/rng.hpp"

namespace fairddp {

namespace {

constexpr const char* kMethodName = "fairbayes-ddp+";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sanitize_error(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

double probabilistic_loss(double accept, int y) {
  return accept * (1.0 - y) + (1.0 - accept) * y;
}

double vec_mean(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double vec_sd(const std::vector<double>& v) {
  if (v.size() < 2) return kNaN;
  const double m = vec_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

// The score ignores a possible group swap in the final fit; the swap is a
// small-sample safeguard and the surrogate stays a valid selection rule.
SelectedFit fit_with_selection(const Dataset& train, const Dataset& val,
                               const HyperParams& hp, const KernelSpec& kernel) {
  const std::vector<double>& grid = hp.bandwidth_grid;
  if (grid.empty()) throw std::invalid_argument("select_bandwidth: empty bandwidth grid");
  if (grid.size() == 1) {
    return SelectedFit{fit(train, hp, grid[0], grid[0], kernel),
                       BandwidthChoice{grid[0], grid[0]}};
  }
  const GroupPair tg = split_by_group(train);
  const GroupPair vg = split_by_group(val);
  const int d = tg.g1.d;
  const std::size_t G = grid.size();

  std::vector<std::vector<double>> tv1(G), tv0(G), vv1(G), vv0(G);
  for (std::size_t gi = 0; gi < G; ++gi) {
    const double c = grid[gi];
    const LocalPolyEstimator e1(tg.g1, default_bandwidth(c, tg.g1.n_a, hp.beta, d),
                                hp.degree, kernel);
    e1.evaluate_rows(tg.g1.xs, tv1[gi]);
    e1.evaluate_rows(vg.g1.xs, vv1[gi]);
    const LocalPolyEstimator e0(tg.g0, default_bandwidth(c, tg.g0.n_a, hp.beta, d),
                                hp.degree, kernel);
    e0.evaluate_rows(tg.g0.xs, tv0[gi]);
    e0.evaluate_rows(vg.g0.xs, vv0[gi]);
  }

  auto index_of = [&grid](double c) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] == c) return i;
    }
    throw std::logic_error("multiplier not on grid");
  };
  const double n_val = static_cast<double>(val.size());
  auto score = [&](double c1, double c0) {
    const std::size_t i1 = index_of(c1);
    const std::size_t i0 = index_of(c0);
    const StepTwoResult s2 = fit_from_values(tv1[i1], tv0[i0], hp);
    double loss = 0.0;
    for (std::size_t j = 0; j < vg.g1.n_a; ++j) {
      loss += probabilistic_loss(
          band_acceptance(vv1[i1][j], s2.thresholds.T1, hp.l1, s2.tau.tau1), vg.g1.ys[j]);
    }
    for (std::size_t j = 0; j < vg.g0.n_a; ++j) {
      loss += probabilistic_loss(
          band_acceptance(vv0[i0][j], s2.thresholds.T0, hp.l0, s2.tau.tau0), vg.g0.ys[j]);
    }
    return loss / n_val;
  };
  const BandwidthChoice choice = select_bandwidth_pair(grid, score);
  return SelectedFit{fit(train, hp, choice.c1, choice.c0, kernel), choice};
}

HyperParams resolve_hyperparams(const ExperimentConfig& cfg, double delta, double offset_c,
                                const GroupPair& groups, std::size_t n_train, int d) {
  HyperParams hp;
  hp.delta = delta;
  hp.beta = cfg.fitting_beta();
  hp.degree = lp_degree(hp.beta);
  hp.bandwidth_grid = cfg.grid();
  hp.delta_n = delta_n_schedule(n_train, cfg.delta_n_c);
  hp.r_n = r_n_schedule(n_train, cfg.r_n_c);
  hp.l1 = offset_schedule(offset_c, groups.g1.n_a, hp.beta, d);
  hp.l0 = offset_schedule(offset_c, groups.g0.n_a, hp.beta, d);
  return hp;
}

namespace {

// Work queue over trial indices; `work` must not throw.
void run_parallel(std::size_t total, std::size_t jobs,
                  const std::function<void(std::size_t)>& work) {
  if (jobs <= 1 || total <= 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      work(i);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t width = std::min(jobs, total);
  pool.reserve(width);
  for (std::size_t t = 0; t < width; ++t) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
}

struct CellGrid {
  std::size_t D = 1, N = 1, O = 1, R = 1;

  std::size_t cells() const { return D * N * O; }
  std::size_t trials() const { return cells() * R; }
  // trial index -> (delta_idx, n_idx, offset_idx, rep)
  void decompose(std::size_t idx, std::size_t& di, std::size_t& ni, std::size_t& oi,
                 std::size_t& rep) const {
    rep = idx % R;
    std::size_t cell = idx / R;
    oi = cell % O;
    cell /= O;
    ni = cell % N;
    di = cell / N;
  }
};

std::vector<CellSummary> summarize(const std::vector<TrialResult>& trials,
                                   const CellGrid& g) {
  std::vector<CellSummary> out;
  out.reserve(g.cells());
  for (std::size_t cell = 0; cell < g.cells(); ++cell) {
    CellSummary cs;
    std::vector<double> acc, ddp, ddp_abs, d_E, d_R;
    cs.d_E_quad = kNaN;
    for (std::size_t rep = 0; rep < g.R; ++rep) {
      const TrialResult& t = trials[cell * g.R + rep];
      if (rep == 0) {
        cs.delta = t.report.delta;
        cs.offset_c = t.offset_c;
      }
      if (!t.error.empty()) continue;
      cs.n = t.report.n;  // identical across synth reps; train-split size otherwise
      acc.push_back(t.report.acc);
      ddp.push_back(t.report.ddp);
      ddp_abs.push_back(std::abs(t.report.ddp));
      d_E.push_back(t.report.d_E);
      d_R.push_back(t.report.d_R);
      if (rep == 0) cs.d_E_quad = t.d_E_quad;
    }
    cs.reps = acc.size();
    cs.acc_mean = vec_mean(acc);
    cs.acc_sd = vec_sd(acc);
    cs.ddp_mean = vec_mean(ddp);
    cs.ddp_sd = vec_sd(ddp);
    cs.ddp_abs_mean = vec_mean(ddp_abs);
    cs.ddp_abs_sd = vec_sd(ddp_abs);
    cs.d_E_mean = vec_mean(d_E);
    cs.d_E_sd = vec_sd(d_E);
    cs.d_R_mean = vec_mean(d_R);
    cs.d_R_sd = vec_sd(d_R);
    out.push_back(std::move(cs));
  }
  return out;
}

// Shared driver: builds the result vector, runs the queue, logs one line
// per finished cell, and aggregates.
ExperimentResult drive(const CellGrid& g, std::size_t jobs, std::ostream* log,
                       const std::function<TrialResult(std::size_t)>& trial_fn) {
  ExperimentResult result;
  result.trials.resize(g.trials());
  std::vector<std::atomic<std::size_t>> remaining(g.cells());
  for (auto& r : remaining) r.store(g.R);
  std::atomic<std::size_t> cells_done{0};
  std::mutex log_mutex;

  auto work = [&](std::size_t idx) {
    TrialResult tr;
    try {
      tr = trial_fn(idx);
    } catch (const std::exception& e) {  // trial_fn catches; this is a backstop
      tr.error = sanitize_error(e.what());
    } catch (...) {
      tr.error = "unknown error";
    }
    result.trials[idx] = std::move(tr);
    const std::size_t cell = idx / g.R;
    if (remaining[cell].fetch_sub(1) == 1 && log) {
      std::size_t errors = 0;
      for (std::size_t rep = 0; rep < g.R; ++rep) {
        if (!result.trials[cell * g.R + rep].error.empty()) ++errors;
      }
      const TrialResult& first = result.trials[cell * g.R];
      const std::size_t done = cells_done.fetch_add(1) + 1;
      std::lock_guard<std::mutex> lock(log_mutex);
      *log << "cell " << done << "/" << g.cells() << ": delta=" << first.report.delta
           << " n=" << first.report.n << " offset_c=" << first.offset_c << " reps=" << g.R;
      if (errors > 0) *log << " errors=" << errors;
      *log << std::endl;
    }
  };
  run_parallel(g.trials(), jobs, work);

  result.summary = summarize(result.trials, g);
  for (const TrialResult& t : result.trials) {
    if (!t.error.empty()) result.all_completed = false;
  }
  return result;
}

}  // namespace

namespace {

// One protected group's inner integral for calibration_d_E: at fixed x2,
// the integral over x1 of (fhat - fstar)(T*_a - eta_a).  The fitted rule
// takes at most three values along the line, so a value change between
// scan neighbors brackets its jumps; the exit from the left value and the
// entry into the right value are refined separately, which keeps a band
// narrower than one scan cell from losing an edge.  Between breaks both
// classifiers are constant and T*_a - eta_a has the exact antiderivative
//   (T*_a - mu_a) x1 - (s2/2) (1 - |x2|)^beta |x1|^(beta+1) / (beta+1),
// so no inner quadrature is needed.
class CalibrationLine {
 public:
  CalibrationLine(const FittedFairBayes& model, const SyntheticParams& p,
                  const OracleFairBayes& oracle, int a)
      : model_(model),
        p_(p),
        oracle_(oracle),
        a_(a),
        mu_(0.5 * (1.0 + (2.0 * a - 1.0) * p.s1)),
        tstar_(oracle.threshold(a)),
        curve_(eta_threshold_breaks(p, a, oracle.threshold(a))) {}

  const std::vector<double>& x2_splits() const { return curve_.x2_splits; }

  double operator()(double x2) {
    scan(x2);
    breaks_.assign({-1.0, 0.0, 1.0});
    for (double b : curve_.x1_breaks(x2))
      if (b > -1.0 && b < 1.0) breaks_.push_back(b);
    for (std::size_t i = 0; i < kScanCells; ++i) {
      if (vals_[i] == vals_[i + 1]) continue;
      const double lo = grid_x(i), hi = grid_x(i + 1);
      breaks_.push_back(refine_exit(lo, hi, vals_[i], x2));
      breaks_.push_back(refine_entry(lo, hi, vals_[i + 1], x2));
    }
    std::sort(breaks_.begin(), breaks_.end());
    breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());

    const double envb = std::pow(1.0 - std::abs(x2), p_.beta);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breaks_.size(); ++k) {
      const double l = breaks_[k], r = breaks_[k + 1];
      const double xm = 0.5 * (l + r);
      const double diff = fitted_at(xm, x2) - oracle_.accept_prob(xm, x2, a_);
      if (diff != 0.0) total += diff * (antideriv(r, envb) - antideriv(l, envb));
    }
    return total;
  }

 private:
  static constexpr std::size_t kScanCells = 256;

  static double grid_x(std::size_t i) {
    return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(kScanCells);
  }

  void scan(double x2) {
    xs_.clear();
    for (std::size_t i = 0; i <= kScanCells; ++i) {
      xs_.push_back(grid_x(i));
      xs_.push_back(x2);
    }
    model_.accept_prob_rows(xs_, a_, vals_);
  }

  double fitted_at(double x1, double x2) const {
    const double q[2] = {x1, x2};
    return model_.accept_prob(q, a_);
  }

  // Largest x1 in [lo, hi] where the rule still takes the left value.
  double refine_exit(double lo, double hi, double v, double x2) const {
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      (fitted_at(mid, x2) == v ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // Smallest x1 in [lo, hi] where it already takes the right value.
  double refine_entry(double lo, double hi, double v, double x2) const {
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      (fitted_at(mid, x2) == v ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double antideriv(double x1, double envb) const {
    return (tstar_ - mu_) * x1 -
           0.5 * p_.s2 * envb * std::pow(std::abs(x1), p_.beta + 1.0) / (p_.beta + 1.0);
  }

  const FittedFairBayes& model_;
  const SyntheticParams& p_;
  const OracleFairBayes& oracle_;
  int a_;
  double mu_, tstar_;
  LevelCurve curve_;
  std::vector<double> xs_, vals_;
  std::vector<double> breaks_;
};

// Bounded-depth refinement of one x2 panel.  The inner values are exact
// up to the break tolerance, and the line integral is continuous in x2
// (jump curves turn into kinks after x1 integration), so plain
// Gauss-Kronrod with halving converges; leaf error estimates accumulate
// into `achieved`.
double calibration_panel(CalibrationLine& line, double a, double b, double tol, int depth,
                         double& achieved) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      [&line](double x2) { return line(x2); }, a, b, 0, 0.0, &err);
  if (err <= tol || depth == 0) {
    achieved += err;
    return v;
  }
  const double mid = 0.5 * (a + b);
  return calibration_panel(line, a, mid, 0.5 * tol, depth - 1, achieved) +
         calibration_panel(line, mid, b, 0.5 * tol, depth - 1, achieved);
}

}  // namespace

double calibration_d_E(const FittedFairBayes& model, const SyntheticParams& p,
                       const OracleFairBayes& oracle, double abs_tol) {
  validate(p);
  if (!(abs_tol > 0.0))
    throw std::invalid_argument("calibration_d_E: tolerance must be positive");

  double total = 0.0;
  double achieved = 0.0;
  for (int a : {1, 0}) {
    CalibrationLine line(model, p, oracle, a);
    std::vector<double> cuts{-1.0, 0.0, 1.0};
    for (double s : line.x2_splits())
      if (s > -1.0 && s < 1.0) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // d_E = 2 sum_a p_a E_a[.] and E_a carries the density 1/4, so the
    // group enters with weight p_a / 2; the error budget is split half
    // per group, then evenly over its panels.
    const double weight = 0.5 * oracle.p(a);
    const double panel_tol =
        0.5 * abs_tol / (weight * static_cast<double>(cuts.size() - 1));
    double group_err = 0.0;
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      integral += calibration_panel(line, cuts[i], cuts[i + 1], panel_tol, 10, group_err);
    total += weight * integral;
    achieved += weight * group_err;
  }
  if (achieved > abs_tol) {
    std::ostringstream msg;
    msg << "calibration_d_E: tolerance " << abs_tol << " not reached (achieved "
        << achieved << ")";
    throw std::runtime_error(msg.str());
  }
  return total;
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t delta_idx, std::size_t n_count,
                         std::size_t n_idx, std::size_t offset_count,
                         std::size_t offset_idx, std::size_t reps, std::size_t rep,
                         std::size_t stream) {
  if (stream > 3) throw std::invalid_argument("trial_seed: stream must be < 4");
  const std::uint64_t cell =
      (static_cast<std::uint64_t>(delta_idx) * n_count + n_idx) * offset_count + offset_idx;
  const std::uint64_t idx = (cell * reps + rep) * 4 + stream;
  return derive_seed(base, idx);
}

const char* TrialResult::csv_header() {
  return "method,delta,n,seed,offset_c,c1,c0,acc,ddp,d_E,d_R,runtime_ms,error";
}

std::string TrialResult::csv_row() const {
  std::ostringstream os;
  os << report.method << ',' << format_double(report.delta) << ',' << report.n << ','
     << report.seed << ',' << format_double(offset_c) << ',' << format_double(c1) << ','
     << format_double(c0) << ',' << format_double(report.acc) << ','
     << format_double(report.ddp) << ',' << format_double(report.d_E) << ','
     << format_double(report.d_R) << ',' << format_double(report.runtime_ms) << ','
     << error;
  return os.str();
}

const char* CellSummary::csv_header() {
  return "delta,n,offset_c,reps,acc_mean,acc_sd,ddp_mean,ddp_sd,ddp_abs_mean,ddp_abs_sd,"
         "d_E_mean,d_E_sd,d_R_mean,d_R_sd,d_E_quad";
}

std::string CellSummary::csv_row() const {
  std::ostringstream os;
  os << format_double(delta) << ',' << n << ',' << format_double(offset_c) << ',' << reps
     << ',' << format_double(acc_mean) << ',' << format_double(acc_sd) << ','
     << format_double(ddp_mean) << ',' << format_double(ddp_sd) << ','
     << format_double(ddp_abs_mean) << ',' << format_double(ddp_abs_sd) << ','
     << format_double(d_E_mean) << ',' << format_double(d_E_sd) << ','
     << format_double(d_R_mean) << ',' << format_double(d_R_sd) << ','
     << format_double(d_E_quad);
  return os.str();
}

const char* OracleRow::csv_header() {
  return "delta,regime,t_star,q_star,T1,T0,ddp,risk,d_minus_0,d_plus_0";
}

std::string OracleRow::csv_row() const {
  std::ostringstream os;
  os << format_double(delta) << ',' << regime << ',' << format_double(t_star) << ','
     << format_double(q_star) << ',' << format_double(T1) << ',' << format_double(T0)
     << ',' << format_double(ddp) << ',' << format_double(risk) << ','
     << format_double(d_minus_0) << ',' << format_double(d_plus_0);
  return os.str();
}

std::vector<OracleRow> oracle_report(const SyntheticParams& p,
                                     std::span<const double> deltas) {
  validate(p);
  const double dm0 = dminus_zero(p);
  std::vector<OracleRow> rows;
  rows.reserve(deltas.size());
  for (double delta : deltas) {
    const OracleSolution sol = solve_t_star(p, delta);
    OracleRow r;
    r.delta = delta;
    r.regime = regime_name(classify_regime(dm0, dm0, delta));
    r.t_star = sol.t_star;
    r.q_star = sol.q_star;
    r.T1 = sol.T1;
    r.T0 = sol.T0;
    r.ddp = sol.ddp;
    r.risk = sol.risk;
    r.d_minus_0 = dm0;
    r.d_plus_0 = dm0;
    rows.push_back(std::move(r));
  }
  return rows;
}

ExperimentResult run_synth_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  if (cfg.mode != ExperimentConfig::Mode::synth)
    throw std::runtime_error("config: 'experiment.mode' is not synth");

  const SyntheticParams p = cfg.synth;

  std::vector<OracleSolution> sols;
  std::vector<OracleFairBayes> oracles;
  sols.reserve(cfg.delta_list.size());
  oracles.reserve(cfg.delta_list.size());
  const auto eta_fn = [p](int a, double x1, double x2) { return synth_eta(p, a, x1, x2); };
  for (double delta : cfg.delta_list) {
    sols.push_back(solve_t_star(p, delta));
    oracles.emplace_back(eta_fn, 0.5, sols.back().t_star);
  }

  CellGrid g{cfg.delta_list.size(), cfg.n_list.size(), cfg.offset_c.size(),
             cfg.repetitions};

  auto trial_fn = [&](std::size_t idx) {
    std::size_t di, ni, oi, rep;
    g.decompose(idx, di, ni, oi, rep);
    const double delta = cfg.delta_list[di];
    const std::size_t n = cfg.n_list[ni];
    const double cl = cfg.offset_c[oi];
    const OracleSolution& sol = sols[di];
    const OracleFairBayes& oracle = oracles[di];

    TrialResult tr;
    tr.report.method = kMethodName;
    tr.report.delta = delta;
    tr.report.n = n;
    tr.report.seed = trial_seed(cfg.seed, di, g.N, ni, g.O, oi, g.R, rep, 0);
    tr.offset_c = cl;
    tr.c1 = tr.c0 = kNaN;
    tr.report.acc = tr.report.ddp = tr.report.d_E = tr.report.d_R = kNaN;
    tr.d_E_quad = kNaN;

    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Dataset train = sample_synthetic(p, n, tr.report.seed);
      const Dataset val = sample_synthetic(
          p, cfg.n_val, trial_seed(cfg.seed, di, g.N, ni, g.O, oi, g.R, rep, 1));
      const Dataset test = sample_synthetic(
          p, cfg.n_test, trial_seed(cfg.seed, di, g.N, ni, g.O, oi, g.R, rep, 2));

      const GroupPair tg = split_by_group(train);
      const HyperParams hp = resolve_hyperparams(cfg, delta, cl, tg, train.size(), 2);

      const SelectedFit sf = fit_with_selection(train, val, hp);
      tr.c1 = sf.choice.c1;
      tr.c0 = sf.choice.c0;
      const FairClassifier f = sf.model.as_classifier();

      tr.report.acc = 1.0 - empirical_risk(f, test);
      tr.report.ddp = empirical_ddp(f, test);
      double sum = 0.0;
      for (std::size_t i = 0; i < test.size(); ++i) {
        const LabeledSample& s = test[i];
        const double t_star_a = s.a == 1 ? sol.T1 : sol.T0;
        const double eta = synth_eta(p, s.a, s.x[0], s.x[1]);
        sum += (f(s.x, s.a) - oracle.accept_prob(s.x[0], s.x[1], s.a)) * (t_star_a - eta);
      }
      tr.report.d_E = 2.0 * sum / static_cast<double>(test.size());
      tr.report.d_R = (1.0 - tr.report.acc) - sol.risk;

      if (rep == 0) {
        // Cell calibration: quadrature d_E of this fit.  A tolerance
        // failure degrades the column to nan, never the trial.
        try {
          tr.d_E_quad = calibration_d_E(sf.model, p, oracle);
        } catch (const std::exception&) {
          tr.d_E_quad = kNaN;
        }
      }
    } catch (const std::exception& e) {
      tr.error = sanitize_error(e.what());
    }
    tr.report.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    return tr;
  };

  return drive(g, cfg.jobs, log, trial_fn);
}

ExperimentResult run_csv_experiment(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.validate();
  if (cfg.mode != ExperimentConfig::Mode::csv)
    throw std::runtime_error("config: 'experiment.mode' is not csv");

  const IngestResult main = load_csv(cfg.ingest);
  std::optional<Dataset> ext_test;
  if (!cfg.ingest.test_path.empty()) {
    IngestSpec test_spec = cfg.ingest;
    test_spec.path = cfg.ingest.test_path;
    ext_test = load_csv(test_spec).data;
  }

  const int d = main.data.dim();

  CellGrid g{cfg.delta_list.size(), 1, cfg.offset_c.size(), cfg.repetitions};

  auto trial_fn = [&](std::size_t idx) {
    std::size_t di, ni, oi, rep;
    g.decompose(idx, di, ni, oi, rep);
    const double delta = cfg.delta_list[di];
    const double cl = cfg.offset_c[oi];

    TrialResult tr;
    tr.report.method = kMethodName;
    tr.report.delta = delta;
    tr.report.n = 0;
    tr.report.seed = trial_seed(cfg.seed, di, g.N, ni, g.O, oi, g.R, rep, 0);
    tr.offset_c = cl;
    tr.c1 = tr.c0 = kNaN;
    tr.report.acc = tr.report.ddp = tr.report.d_E = tr.report.d_R = kNaN;
    tr.d_E_quad = kNaN;

    const auto t0 = std::chrono::steady_clock::now();
    try {
      const ThreeWaySplit sp = split_dataset(main.data, cfg.ingest.train_frac,
                                             cfg.ingest.val_frac, tr.report.seed);
      tr.report.n = sp.train.size();
      const Dataset& test_raw = ext_test ? *ext_test : sp.test;
      if (test_raw.empty()) throw std::runtime_error("empty test split");

      const Standardizer st = fit_standardizer(sp.train);
      const Dataset train = st.apply(sp.train);
      const Dataset val = st.apply(sp.val);
      const Dataset test = st.apply(test_raw);

      const GroupPair tg = split_by_group(train);
      const HyperParams hp = resolve_hyperparams(cfg, delta, cl, tg, train.size(), d);

      const SelectedFit sf = fit_with_selection(train, val, hp);
      tr.c1 = sf.choice.c1;
      tr.c0 = sf.choice.c0;
      const FairClassifier f = sf.model.as_classifier();
      tr.report.acc = 1.0 - empirical_risk(f, test);
      tr.report.ddp = empirical_ddp(f, test);
    } catch (const std::exception& e) {
      tr.error = sanitize_error(e.what());
    }
    tr.report.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    return tr;
  };

  return drive(g, cfg.jobs, log, trial_fn);
}

void write_trials_csv(const ExperimentResult& result, std::ostream& out) {
  out << TrialResult::csv_header() << '\n';
  for (const TrialResult& t : result.trials) out << t.csv_row() << '\n';
}

void write_summary_csv(const ExperimentResult& result, std::ostream& out) {
  out << CellSummary::csv_header() << '\n';
  for (const CellSummary& c : result.summary) out << c.csv_row() << '\n';
}

void write_oracle_csv(std::span<const OracleRow> rows, std::ostream& out) {
  out << OracleRow::csv_header() << '\n';
  for (const OracleRow& r : rows) out << r.csv_row() << '\n';
}

}  // namespace fairddp
