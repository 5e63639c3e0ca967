#include "fairddp/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fairddp {

namespace {

void trim(std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  s = s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::runtime_error("config: " + what + " for '" + field + "'");
}

double to_double(const std::string& field, const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end == begin || *end != '\0' || !std::isfinite(v))
    fail(field, "bad numeric value '" + text + "'");
  return v;
}

std::uint64_t to_u64(const std::string& field, const std::string& text) {
  if (text.empty() || text[0] == '-') fail(field, "bad unsigned value '" + text + "'");
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE)
    fail(field, "bad unsigned value '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(text);
  while (std::getline(ss, cur, ',')) {
    trim(cur);
    parts.push_back(cur);
  }
  if (!text.empty() && text.back() == ',') parts.push_back("");
  return parts;
}

std::vector<double> to_double_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const std::string& p : split_list(text)) out.push_back(to_double(field, p));
  if (out.empty()) fail(field, "empty list");
  return out;
}

std::vector<std::size_t> to_size_list(const std::string& field, const std::string& text) {
  std::vector<std::size_t> out;
  for (const std::string& p : split_list(text))
    out.push_back(static_cast<std::size_t>(to_u64(field, p)));
  if (out.empty()) fail(field, "empty list");
  return out;
}

std::vector<std::string> to_string_list(const std::string& field, const std::string& text) {
  std::vector<std::string> out;
  for (const std::string& p : split_list(text)) {
    if (p.empty()) fail(field, "empty list entry");
    out.push_back(p);
  }
  if (out.empty()) fail(field, "empty list");
  return out;
}

}  // namespace

double ExperimentConfig::fitting_beta() const {
  if (fit_beta) return *fit_beta;
  return mode == Mode::synth ? synth.beta : 3.0;
}

const std::vector<double>& ExperimentConfig::grid() const {
  return bandwidth_grid.empty() ? default_bandwidth_grid() : bandwidth_grid;
}

const std::vector<double>& default_bandwidth_grid() {
  static const std::vector<double> grid = parse_bandwidth_grid("logspace:0.5:5:10");
  return grid;
}

std::vector<double> parse_bandwidth_grid(const std::string& text) {
  const std::string field = "fit.bandwidth_grid";
  if (text.rfind("logspace:", 0) == 0) {
    std::vector<std::string> parts;
    std::string cur;
    std::stringstream ss(text);
    while (std::getline(ss, cur, ':')) parts.push_back(cur);
    if (parts.size() != 4) fail(field, "expected logspace:<lo>:<hi>:<count>");
    const double lo = to_double(field, parts[1]);
    const double hi = to_double(field, parts[2]);
    const auto count = static_cast<std::size_t>(to_u64(field, parts[3]));
    if (!(lo > 0.0) || hi < lo || count < 1) fail(field, "bad logspace range");
    std::vector<double> grid;
    grid.reserve(count);
    if (count == 1) {
      grid.push_back(lo);
    } else {
      const double ratio = hi / lo;
      for (std::size_t i = 0; i < count; ++i) {
        grid.push_back(lo * std::pow(ratio, static_cast<double>(i) /
                                                static_cast<double>(count - 1)));
      }
    }
    return grid;
  }
  std::vector<double> grid = to_double_list(field, text);
  for (double c : grid) {
    if (!(c > 0.0)) fail(field, "non-positive multiplier");
  }
  return grid;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config: unterminated section at line " +
                                 std::to_string(line_no));
      section = line.substr(1, line.size() - 2);
      trim(section);
      if (section != "experiment" && section != "synth" && section != "fit" &&
          section != "csv")
        throw std::runtime_error("config: unknown section '" + section + "'");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key = value at line " +
                               std::to_string(line_no));
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    trim(key);
    trim(value);
    if (section.empty())
      throw std::runtime_error("config: key '" + key + "' before any section");
    const std::string field = section + "." + key;
    if (!seen.insert(field).second)
      throw std::runtime_error("config: duplicate key '" + field + "'");

    if (section == "experiment") {
      if (key == "mode") {
        if (value == "synth") cfg.mode = ExperimentConfig::Mode::synth;
        else if (value == "csv") cfg.mode = ExperimentConfig::Mode::csv;
        else fail(field, "expected synth or csv, got '" + value + "'");
      } else if (key == "deltas") {
        cfg.delta_list = to_double_list(field, value);
      } else if (key == "ns") {
        cfg.n_list = to_size_list(field, value);
      } else if (key == "repetitions") {
        cfg.repetitions = static_cast<std::size_t>(to_u64(field, value));
      } else if (key == "n_val") {
        cfg.n_val = static_cast<std::size_t>(to_u64(field, value));
      } else if (key == "n_test") {
        cfg.n_test = static_cast<std::size_t>(to_u64(field, value));
      } else if (key == "seed") {
        cfg.seed = to_u64(field, value);
      } else if (key == "jobs") {
        cfg.jobs = static_cast<std::size_t>(to_u64(field, value));
      } else if (key == "out_dir") {
        cfg.out_dir = value;
      } else {
        throw std::runtime_error("config: unknown key '" + field + "'");
      }
    } else if (section == "synth") {
      if (key == "s1") cfg.synth.s1 = to_double(field, value);
      else if (key == "s2") cfg.synth.s2 = to_double(field, value);
      else if (key == "beta") cfg.synth.beta = to_double(field, value);
      else throw std::runtime_error("config: unknown key '" + field + "'");
    } else if (section == "fit") {
      if (key == "beta") {
        cfg.fit_beta = to_double(field, value);
      } else if (key == "offset_c") {
        cfg.offset_c = to_double_list(field, value);
      } else if (key == "delta_n_c") {
        cfg.delta_n_c = to_double(field, value);
      } else if (key == "r_n_c") {
        cfg.r_n_c = to_double(field, value);
      } else if (key == "bandwidth_grid") {
        cfg.bandwidth_grid = parse_bandwidth_grid(value);
      } else {
        throw std::runtime_error("config: unknown key '" + field + "'");
      }
    } else {  // csv
      if (key == "path") cfg.ingest.path = value;
      else if (key == "test_path") cfg.ingest.test_path = value;
      else if (key == "label_column") cfg.ingest.label_column = value;
      else if (key == "positive_label") cfg.ingest.positive_label = value;
      else if (key == "group_column") cfg.ingest.group_column = value;
      else if (key == "privileged_value") cfg.ingest.privileged_value = value;
      else if (key == "feature_columns") cfg.ingest.feature_columns = to_string_list(field, value);
      else if (key == "train_frac") cfg.ingest.train_frac = to_double(field, value);
      else if (key == "val_frac") cfg.ingest.val_frac = to_double(field, value);
      else throw std::runtime_error("config: unknown key '" + field + "'");
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_config(in);
}

void ExperimentConfig::validate() const {
  if (repetitions < 1) fail("experiment.repetitions", "must be >= 1");
  if (delta_list.empty()) fail("experiment.deltas", "empty list");
  for (double d : delta_list) {
    if (!(d >= 0.0)) fail("experiment.deltas", "negative level");
  }
  if (n_list.empty()) fail("experiment.ns", "empty list");
  for (std::size_t n : n_list) {
    if (n < 4) fail("experiment.ns", "sample size below 4");
  }
  if (n_val < 1) fail("experiment.n_val", "must be >= 1");
  if (n_test < 1) fail("experiment.n_test", "must be >= 1");
  if (jobs < 1) fail("experiment.jobs", "must be >= 1");
  if (out_dir.empty()) fail("experiment.out_dir", "empty path");
  if (!(fitting_beta() > 0.0)) fail("fit.beta", "must be positive");
  if (offset_c.empty()) fail("fit.offset_c", "empty list");
  for (double c : offset_c) {
    if (!(c >= 0.0)) fail("fit.offset_c", "negative multiplier");
  }
  if (!(delta_n_c > 0.0)) fail("fit.delta_n_c", "must be positive");
  if (!(r_n_c > 0.0)) fail("fit.r_n_c", "must be positive");
  for (double c : grid()) {
    if (!(c > 0.0)) fail("fit.bandwidth_grid", "non-positive multiplier");
  }
  if (mode == Mode::synth) {
    try {
      fairddp::validate(synth);
    } catch (const std::exception& e) {
      throw std::runtime_error("config: [synth] " + std::string(e.what()));
    }
  } else {
    if (ingest.path.empty()) fail("csv.path", "required in csv mode");
    try {
      ingest.validate();
    } catch (const std::exception& e) {
      throw std::runtime_error("config: [csv] " + std::string(e.what()));
    }
  }
}

}  // namespace fairddp
