#pragma once
// Experiment configuration: a flat sectioned key-value file.
//
//   # comment (';' also starts one)
//   [experiment]
//   mode = synth
//   deltas = 0, 0.1
//   ns = 100, 400, 1600
//
// Sections: [experiment] (mode, deltas, ns, repetitions, n_val, n_test,
// seed, jobs, out_dir), [synth] (s1, s2, beta), [fit] (beta, offset_c,
// delta_n_c, r_n_c, bandwidth_grid), [csv] (ingest fields).  Unknown keys,
// duplicate keys, and unparseable values are startup errors naming the
// offending field.  Defaults follow the reference simulation protocol:
// delta_n_c = r_n_c = 0.1, offset_c = 0.25, grid of 10 log-spaced
// multipliers on [0.5, 5].

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairddp/ingest.hpp"
#include "fairddp/synth.hpp"

namespace fairddp {

struct ExperimentConfig {
  enum class Mode { synth, csv };

  Mode mode = Mode::synth;
  std::vector<double> delta_list{0.0};
  std::vector<std::size_t> n_list{400};
  std::size_t repetitions = 100;
  std::size_t n_val = 1000;
  std::size_t n_test = 1000;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::string out_dir = "out";

  SyntheticParams synth;

  std::optional<double> fit_beta;      // override; see fitting_beta()
  std::vector<double> offset_c{0.25};  // l_a = c * n_a^(-beta/(2 beta + d))
  double delta_n_c = 0.1;              // Delta_n = c / ln ln n
  double r_n_c = 0.1;                  // r_n = c / ln n
  std::vector<double> bandwidth_grid;  // empty = default grid

  IngestSpec ingest;

  // Smoothness used by the estimator: the override when given, else the
  // generating beta (synth) or 3 (csv, matching the reference tabular setup).
  double fitting_beta() const;
  const std::vector<double>& grid() const;  // bandwidth_grid or the default

  // Throws std::runtime_error naming the field: repetitions >= 1,
  // deltas >= 0, ns >= 4, positive sizes, valid synth/ingest blocks.
  void validate() const;
};

// 10 multipliers log-spaced on [0.5, 5].
const std::vector<double>& default_bandwidth_grid();

// "logspace:<lo>:<hi>:<count>" or a comma-separated list.
std::vector<double> parse_bandwidth_grid(const std::string& text);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace fairddp
