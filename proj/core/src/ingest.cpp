#include "fairddp/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "fairddp/rng.hpp"

namespace fairddp {

namespace {

void trim(std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  s = s.substr(b, e - b);
}

bool all_space(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) return false;
  out = v;
  return true;
}

struct RawRecord {
  std::vector<std::string> fields;
  bool bad = false;
};

// One pass over the normalized text ('\n' record breaks only).  Quoted
// fields may contain delimiters and newlines; "" is a literal quote.
std::vector<RawRecord> parse_records(const std::string& text) {
  std::vector<RawRecord> records;
  RawRecord rec;
  std::string cur;
  bool in_quotes = false;    // inside an open quoted field
  bool was_quoted = false;   // current field started with a quote
  bool after_quote = false;  // closing quote seen, expecting ',' or '\n'

  auto flush_field = [&] {
    if (!was_quoted) trim(cur);
    rec.fields.push_back(std::move(cur));
    cur.clear();
    was_quoted = false;
    after_quote = false;
  };
  auto flush_record = [&] {
    records.push_back(std::move(rec));
    rec = RawRecord{};
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        cur += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (after_quote || !all_space(cur)) {
          rec.bad = true;  // quote opening mid-field
        } else {
          cur.clear();
          in_quotes = true;
          was_quoted = true;
        }
        break;
      case ',':
        flush_field();
        break;
      case '\n':
        flush_field();
        flush_record();
        break;
      default:
        if (after_quote) {
          if (!std::isspace(static_cast<unsigned char>(c))) rec.bad = true;
        } else {
          cur += c;
        }
    }
  }
  if (in_quotes) rec.bad = true;  // unterminated quote at EOF
  if (!cur.empty() || was_quoted || !rec.fields.empty()) {
    flush_field();
    flush_record();
  }
  return records;
}

bool blank_record(const RawRecord& r) {
  return !r.bad && r.fields.size() == 1 && r.fields[0].empty();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::invalid_argument("missing column '" + name + "'");
}

CsvTable parse_csv(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  // Normalize line endings so only '\n' breaks records.
  std::string norm;
  norm.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      norm += '\n';
    } else {
      norm += text[i];
    }
  }
  const std::vector<RawRecord> records = parse_records(norm);

  CsvTable table;
  std::size_t first = 0;
  while (first < records.size() && blank_record(records[first])) ++first;
  if (first == records.size()) throw std::invalid_argument("missing csv header");
  if (records[first].bad) throw std::invalid_argument("malformed csv header");
  table.header = records[first].fields;

  const std::size_t ncols = table.header.size();
  for (std::size_t i = first + 1; i < records.size(); ++i) {
    const RawRecord& r = records[i];
    if (blank_record(r)) continue;
    if (r.bad || r.fields.size() != ncols) {
      ++table.dropped;
      continue;
    }
    table.rows.push_back(r.fields);
  }
  return table;
}

CsvTable parse_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_csv(in);
}

void IngestSpec::validate() const {
  if (feature_columns.empty()) throw std::invalid_argument("empty feature list");
  if (!(train_frac > 0.0 && train_frac < 1.0))
    throw std::invalid_argument("train fraction outside (0,1)");
  if (!(val_frac > 0.0 && val_frac < 1.0))
    throw std::invalid_argument("validation fraction outside (0,1)");
  if (train_frac + val_frac > 1.0)
    throw std::invalid_argument("train and validation fractions exceed 1");
}

IngestResult encode_table(const CsvTable& table, const IngestSpec& spec) {
  spec.validate();
  const std::size_t label_idx = table.column(spec.label_column);
  const std::size_t group_idx = table.column(spec.group_column);
  std::vector<std::size_t> feat_idx;
  feat_idx.reserve(spec.feature_columns.size());
  for (const std::string& name : spec.feature_columns) feat_idx.push_back(table.column(name));

  struct Pending {
    std::vector<double> x;
    std::string group;
    int y;
  };
  std::vector<Pending> usable;
  usable.reserve(table.rows.size());
  std::size_t dropped = table.dropped;

  for (const std::vector<std::string>& row : table.rows) {
    Pending p;
    p.x.reserve(feat_idx.size());
    bool ok = true;
    for (std::size_t idx : feat_idx) {
      double v = 0.0;
      if (!parse_double(row[idx], v)) {
        ok = false;
        break;
      }
      p.x.push_back(v);
    }
    if (!ok || row[label_idx].empty() || row[group_idx].empty()) {
      ++dropped;
      continue;
    }
    p.group = row[group_idx];
    p.y = row[label_idx] == spec.positive_label ? 1 : 0;
    usable.push_back(std::move(p));
  }

  if (usable.empty()) throw std::runtime_error("no usable rows in '" + spec.path + "'");

  // Binary protected attribute by contract: refuse to collapse categories.
  std::set<std::string> categories;
  for (const Pending& p : usable) categories.insert(p.group);
  if (categories.size() != 2) {
    throw std::runtime_error("protected column '" + spec.group_column + "' has " +
                             std::to_string(categories.size()) + " categories; expected 2");
  }
  if (categories.count(spec.privileged_value) == 0) {
    throw std::runtime_error("privileged value '" + spec.privileged_value +
                             "' absent from column '" + spec.group_column + "'");
  }

  IngestResult result;
  result.data = Dataset(static_cast<int>(feat_idx.size()));
  result.dropped = dropped;
  for (Pending& p : usable) {
    result.data.add(std::move(p.x), p.group == spec.privileged_value ? 1 : 0, p.y);
  }
  return result;
}

IngestResult load_csv(const IngestSpec& spec) {
  return encode_table(parse_csv_file(spec.path), spec);
}

Standardizer fit_standardizer(const Dataset& train) {
  if (train.empty()) throw std::invalid_argument("empty dataset");
  const int d = train.dim();
  const double n = static_cast<double>(train.size());
  Standardizer st;
  st.mean.assign(static_cast<std::size_t>(d), 0.0);
  st.sd.assign(static_cast<std::size_t>(d), 1.0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    for (int j = 0; j < d; ++j) st.mean[static_cast<std::size_t>(j)] += train[i].x[static_cast<std::size_t>(j)];
  }
  for (double& m : st.mean) m /= n;
  for (int j = 0; j < d; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      const double dev = train[i].x[static_cast<std::size_t>(j)] - st.mean[static_cast<std::size_t>(j)];
      ss += dev * dev;
    }
    const double var = train.size() > 1 ? ss / (n - 1.0) : 0.0;
    if (var > 0.0) {
      st.sd[static_cast<std::size_t>(j)] = std::sqrt(var);
    } else {
      st.constant_columns.push_back(static_cast<std::size_t>(j));
    }
  }
  return st;
}

Dataset Standardizer::apply(const Dataset& d) const {
  if (static_cast<std::size_t>(d.dim()) != mean.size())
    throw std::invalid_argument("dimension mismatch");
  Dataset out(d.dim());
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::vector<double> x = d[i].x;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = (x[j] - mean[j]) / sd[j];
    out.add(std::move(x), d[i].a, d[i].y);
  }
  return out;
}

ThreeWaySplit split_dataset(const Dataset& data, double train_frac, double val_frac,
                            std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0))
    throw std::invalid_argument("train fraction outside (0,1)");
  if (!(val_frac > 0.0 && val_frac < 1.0))
    throw std::invalid_argument("validation fraction outside (0,1)");
  if (train_frac + val_frac > 1.0)
    throw std::invalid_argument("train and validation fractions exceed 1");

  const std::size_t n = data.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  seeded_shuffle(order, seed);

  const auto n_train = static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::floor(val_frac * static_cast<double>(n)));

  ThreeWaySplit split{Dataset(data.dim()), Dataset(data.dim()), Dataset(data.dim())};
  for (std::size_t i = 0; i < n; ++i) {
    const LabeledSample& s = data[order[i]];
    if (i < n_train) {
      split.train.add(s);
    } else if (i < n_train + n_val) {
      split.val.add(s);
    } else {
      split.test.add(s);
    }
  }
  return split;
}

std::vector<std::string> select_features_by_correlation(
    const CsvTable& table, const std::string& label_column,
    const std::string& positive_label, const std::vector<std::string>& candidates,
    std::size_t k) {
  const std::size_t label_idx = table.column(label_column);
  struct Scored {
    double score;
    std::size_t header_pos;
    std::string name;
  };
  std::vector<Scored> scored;
  scored.reserve(candidates.size());
  for (const std::string& name : candidates) {
    const std::size_t idx = table.column(name);
    double n = 0.0, sx = 0.0, sxx = 0.0, sxy = 0.0, sy = 0.0;
    for (const std::vector<std::string>& row : table.rows) {
      double x = 0.0;
      if (row[label_idx].empty() || !parse_double(row[idx], x)) continue;
      const double y = row[label_idx] == positive_label ? 1.0 : 0.0;
      n += 1.0;
      sx += x;
      sxx += x * x;
      sxy += x * y;
      sy += y;
    }
    double score = -1.0;  // unusable columns sort last
    if (n >= 2.0) {
      const double vx = n * sxx - sx * sx;
      const double vy = n * sy - sy * sy;  // y is binary, so sum y^2 = sum y
      if (vx > 0.0 && vy > 0.0) score = std::abs((n * sxy - sx * sy) / std::sqrt(vx * vy));
    }
    scored.push_back({score, idx, name});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.header_pos < b.header_pos;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].name);
  return out;
}

void write_csv(const Dataset& d, std::ostream& out,
               const std::vector<std::string>& feature_names,
               const std::string& group_column, const std::string& label_column) {
  if (static_cast<std::size_t>(d.dim()) != feature_names.size())
    throw std::invalid_argument("dimension mismatch");
  for (const std::string& name : feature_names) out << csv_escape(name) << ',';
  out << csv_escape(group_column) << ',' << csv_escape(label_column) << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (double v : d[i].x) out << format_double(v) << ',';
    out << d[i].a << ',' << d[i].y << '\n';
  }
}

}  // namespace fairddp
