#pragma once
// Experiment driver: seeded repeated trials over (delta, n, offset) cells,
// grid bandwidth selection scored on a validation split, evaluation
// against the analytic oracle (synthetic mode), and deterministic CSV
// emission.  Given the config and base seed, every output byte except the
// wall-time column is reproducible.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fairddp/config.hpp"
#include "fairddp/metrics.hpp"

namespace fairddp {

// Each trial owns four derived streams (train, validation, test, spare):
//   stream = (((delta_idx * #n) + n_idx) * #offsets + offset_idx) * reps + rep
//   seed_k = derive_seed(base, 4 * stream + k)
// which is injective across (cell, rep, k), so no draw is ever shared.
std::uint64_t trial_seed(std::uint64_t base, std::size_t delta_idx, std::size_t n_count,
                         std::size_t n_idx, std::size_t offset_count,
                         std::size_t offset_idx, std::size_t reps, std::size_t rep,
                         std::size_t stream);

// One row of trials.csv.  `report.runtime_ms` is the only
// non-reproducible column; `error` is empty iff the trial completed.
struct TrialResult {
  MetricReport report;
  double offset_c = 0.0;
  double c1 = 0.0;  // selected bandwidth multipliers
  double c0 = 0.0;
  std::string error;
  double d_E_quad = 0.0;  // set on the first repetition of a synth cell; not serialized

  static const char* csv_header();  // method,delta,n,seed,offset_c,c1,c0,acc,ddp,d_E,d_R,runtime_ms,error
  std::string csv_row() const;
};

// Per-(delta, n, offset) aggregate over completed repetitions;
// SDs use the n-1 denominator, undefined (nan) for a single repetition.
struct CellSummary {
  double delta = 0.0;
  std::size_t n = 0;
  double offset_c = 0.0;
  std::size_t reps = 0;  // completed
  double acc_mean = 0.0, acc_sd = 0.0;
  double ddp_mean = 0.0, ddp_sd = 0.0;
  double ddp_abs_mean = 0.0, ddp_abs_sd = 0.0;
  double d_E_mean = 0.0, d_E_sd = 0.0;
  double d_R_mean = 0.0, d_R_sd = 0.0;
  double d_E_quad = 0.0;  // one exact-quadrature evaluation (first rep's fit)

  static const char* csv_header();
  std::string csv_row() const;
};

struct ExperimentResult {
  std::vector<TrialResult> trials;  // cell-major, repetitions in order
  std::vector<CellSummary> summary;
  bool all_completed = true;
};

// Resolved hyper-parameters for a realized training set: the configured
// delta and smoothness plus the schedule values at these sample sizes.
HyperParams resolve_hyperparams(const ExperimentConfig& cfg, double delta, double offset_c,
                                const GroupPair& groups, std::size_t n_train, int d);

// Bandwidth-selected fit: Step-1 regression values are computed once per
// grid multiplier and group, every (c1, c0) pair is scored by the
// validation misclassification of its Step-2 classifier, and the final
// model is fitted at the argmin (lexicographic smaller pair on ties).
struct SelectedFit {
  FittedFairBayes model;
  BandwidthChoice choice;
};
SelectedFit fit_with_selection(const Dataset& train, const Dataset& val,
                               const HyperParams& hp, const KernelSpec& kernel = {});

// Repeated seeded trials on the synthetic benchmark: draw train/val/test,
// select (c1, c0) by validation misclassification of the fitted delta-fair
// classifier, fit, and score on test.  d_E is the test Monte Carlo
// estimate against the closed-form oracle; one quadrature d_E per cell
// calibrates it.  Trial errors are recorded per row; the run continues.
// `log`, when given, receives one progress line per cell.
ExperimentResult run_synth_experiment(const ExperimentConfig& cfg,
                                      std::ostream* log = nullptr);

// Quadrature d_E of a fitted model against the closed-form oracle (the
// per-cell calibration column).  Along each fixed-x2 line the fitted rule
// is a step function of x1; its jumps are located by a dense scan plus
// bisection and the smooth factor (T*_a - eta_a) integrates in closed
// form between jumps, so only the outer x2 integral is adaptive.  Throws
// if the error estimate exceeds abs_tol.
double calibration_d_E(const FittedFairBayes& model, const SyntheticParams& p,
                       const OracleFairBayes& oracle, double abs_tol = 5e-4);

// Same loop on an ingested table; resampling means re-splitting by seed.
// No oracle, so d_E/d_R are nan and the n column reports the train-split
// size.  With a separate test file, the main file is split train/val and
// any remainder past the two fractions goes unused.
ExperimentResult run_csv_experiment(const ExperimentConfig& cfg,
                                    std::ostream* log = nullptr);

// Analytic per-delta table; no sampling.
struct OracleRow {
  double delta = 0.0;
  std::string regime;
  double t_star = 0.0;
  double q_star = 0.0;
  double T1 = 0.0;
  double T0 = 0.0;
  double ddp = 0.0;       // disparity attained by the fair Bayes rule
  double risk = 0.0;      // R(f*_delta)
  double d_minus_0 = 0.0;
  double d_plus_0 = 0.0;  // equals d_minus_0 here (eta has no atoms)

  static const char* csv_header();
  std::string csv_row() const;
};
std::vector<OracleRow> oracle_report(const SyntheticParams& p, std::span<const double> deltas);

void write_trials_csv(const ExperimentResult& result, std::ostream& out);
void write_summary_csv(const ExperimentResult& result, std::ostream& out);
void write_oracle_csv(std::span<const OracleRow> rows, std::ostream& out);

}  // namespace fairddp
