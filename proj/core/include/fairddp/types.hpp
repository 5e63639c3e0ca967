#pragma once
// Basic data model: labeled samples with a binary protected attribute,
// group views, the hyper-parameter bundle, and the randomized-classifier
// abstraction shared by the whole library.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fairddp {

struct LabeledSample {
  std::vector<double> x;  // features, length d
  int a = 0;              // protected attribute, 0 or 1
  int y = 0;              // label, 0 or 1
};

// Validated sample container with a fixed feature dimension.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(int dim);

  // Throws std::invalid_argument on dimension mismatch, a or y outside
  // {0,1}, or non-finite feature values.
  void add(std::vector<double> x, int a, int y);
  void add(const LabeledSample& s) { add(s.x, s.a, s.y); }

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<LabeledSample>& samples() const noexcept { return samples_; }

 private:
  int dim_ = 0;  // 0 until the first sample fixes it (when constructed default)
  std::vector<LabeledSample> samples_;
};

// One protected group, features flattened row-major for kernel loops.
struct GroupView {
  int a = 0;
  int d = 0;
  std::size_t n_a = 0;
  double p_hat = 0.0;      // n_a / n
  std::vector<double> xs;  // n_a rows of d features
  std::vector<int> ys;

  std::span<const double> row(std::size_t j) const {
    return {xs.data() + j * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
};

struct GroupPair {
  GroupView g1;  // a = 1
  GroupView g0;  // a = 0
};

// Partition by protected attribute, preserving within-group sample order.
// Throws std::invalid_argument("empty dataset") / ("empty group").
GroupPair split_by_group(const Dataset& data);

// Everything the fitting pipeline needs beyond the data itself.
// Offsets and the (delta_n, r_n) pair are resolved values, not multipliers;
// the schedule helpers in disparity.hpp / lpreg.hpp produce them.
struct HyperParams {
  double delta = 0.0;                  // disparity level, in [0, 1]
  double beta = 1.0;                   // assumed smoothness, > 0
  int degree = 0;                      // local polynomial degree, ceil(beta) - 1
  std::vector<double> bandwidth_grid;  // multipliers c for h = c * n_a^(-1/(2 beta + d))
  double delta_n = 0.0;                // bracketing width for the threshold search
  double r_n = 0.0;                    // proximity radius for the threshold search
  double l1 = 0.0;                     // boundary offset, group 1
  double l0 = 0.0;                     // boundary offset, group 0
};

// Polynomial degree used for smoothness beta: the largest integer strictly
// below beta for integral beta, floor(beta) otherwise.
int lp_degree(double beta);

// Randomized group-aware classifier: value is the acceptance probability.
class FairClassifier {
 public:
  using Fn = std::function<double(std::span<const double>, int)>;

  FairClassifier() = default;
  FairClassifier(Fn fn, std::string name) : fn_(std::move(fn)), name_(std::move(name)) {}

  // Throws std::runtime_error if the underlying rule leaves [0, 1].
  double operator()(std::span<const double> x, int a) const;
  const std::string& name() const noexcept { return name_; }
  bool valid() const noexcept { return static_cast<bool>(fn_); }

 private:
  Fn fn_;
  std::string name_;
};

// Thresholded decision: 1 iff u < f(x, a).  u = f gives 0.
int predict_label(const FairClassifier& f, std::span<const double> x, int a, double u);

// Shortest decimal form that parses back to the same double ("nan"/"inf"
// for non-finite values); used for every number we emit to CSV.
std::string format_double(double v);

}  // namespace fairddp
