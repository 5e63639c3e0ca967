#include "fairddp/types.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace fairddp {

Dataset::Dataset(int dim) : dim_(dim) {
  if (dim <= 0) throw std::invalid_argument("Dataset: dimension must be positive");
}

void Dataset::add(std::vector<double> x, int a, int y) {
  if (dim_ == 0) {
    if (x.empty()) throw std::invalid_argument("Dataset: empty feature vector");
    dim_ = static_cast<int>(x.size());
  }
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("Dataset: feature dimension mismatch");
  if (a != 0 && a != 1) throw std::invalid_argument("invalid protected attribute");
  if (y != 0 && y != 1) throw std::invalid_argument("Dataset: label must be 0 or 1");
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite input");
  samples_.push_back(LabeledSample{std::move(x), a, y});
}

GroupPair split_by_group(const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("empty dataset");
  GroupPair out;
  out.g1.a = 1;
  out.g0.a = 0;
  out.g1.d = out.g0.d = data.dim();
  for (const auto& s : data.samples()) {
    GroupView& g = (s.a == 1) ? out.g1 : out.g0;
    g.xs.insert(g.xs.end(), s.x.begin(), s.x.end());
    g.ys.push_back(s.y);
  }
  out.g1.n_a = out.g1.ys.size();
  out.g0.n_a = out.g0.ys.size();
  if (out.g1.n_a == 0 || out.g0.n_a == 0) throw std::invalid_argument("empty group");
  const double n = static_cast<double>(data.size());
  out.g1.p_hat = static_cast<double>(out.g1.n_a) / n;
  out.g0.p_hat = static_cast<double>(out.g0.n_a) / n;
  return out;
}

int lp_degree(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("lp_degree: beta must be positive");
  return static_cast<int>(std::ceil(beta)) - 1;
}

double FairClassifier::operator()(std::span<const double> x, int a) const {
  if (!fn_) throw std::runtime_error("FairClassifier: empty rule");
  const double p = fn_(x, a);
  if (!(p >= 0.0 && p <= 1.0))
    throw std::runtime_error("FairClassifier: rule value outside [0,1]");
  return p;
}

int predict_label(const FairClassifier& f, std::span<const double> x, int a, double u) {
  return u < f(x, a) ? 1 : 0;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace fairddp
