#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairddp/ingest.hpp"
#include "fairddp/types.hpp"

using namespace fairddp;

namespace {

CsvTable parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

IngestSpec adult_style_spec() {
  IngestSpec spec;
  spec.path = "mem";
  spec.label_column = "income";
  spec.positive_label = ">50K";
  spec.group_column = "sex";
  spec.privileged_value = "Male";
  spec.feature_columns = {"age"};
  return spec;
}

std::string sorted_triples(const Dataset& d) {
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::string r;
    for (double v : d[i].x) r += format_double(v) + ",";
    r += std::to_string(d[i].a) + "," + std::to_string(d[i].y);
    rows.push_back(r);
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const std::string& r : rows) out += r + "\n";
  return out;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("parser keeps well-formed rows and counts the rest") {
  const CsvTable t = parse_string("a,b\n1,2\n3\n4,5\n");
  REQUIRE(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0] == std::vector<std::string>{"1", "2"});
  CHECK(t.rows[1] == std::vector<std::string>{"4", "5"});
  CHECK(t.dropped == 1);
}

TEST_CASE("parser dialect") {
  SUBCASE("quoted fields carry commas, escaped quotes, and newlines") {
    const CsvTable t = parse_string("k,v\n1,\"a,b\"\n2,\"say \"\"hi\"\"\"\n3,\"x\ny\"\n");
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0][1] == "a,b");
    CHECK(t.rows[1][1] == "say \"hi\"");
    CHECK(t.rows[2][1] == "x\ny");
    CHECK(t.dropped == 0);
  }
  SUBCASE("unquoted cells are trimmed, quoted cells kept verbatim") {
    const CsvTable t = parse_string("k,v\n 1 ,\" padded \"\n");
    CHECK(t.rows[0][0] == "1");
    CHECK(t.rows[0][1] == " padded ");
  }
  SUBCASE("crlf and bare cr both break records") {
    const CsvTable t = parse_string("a,b\r\n1,2\r3,4\n");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1] == std::vector<std::string>{"3", "4"});
  }
  SUBCASE("blank lines are skipped, not counted as drops") {
    const CsvTable t = parse_string("\na,b\n\n1,2\n\n");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    CHECK(t.rows.size() == 1);
    CHECK(t.dropped == 0);
  }
  SUBCASE("no trailing newline still flushes the last record") {
    const CsvTable t = parse_string("a,b\n1,2");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][1] == "2");
  }
  SUBCASE("unterminated quote drops the record") {
    const CsvTable t = parse_string("a,b\n1,\"open\n");
    CHECK(t.rows.empty());
    CHECK(t.dropped == 1);
  }
  SUBCASE("junk after a closing quote drops the record") {
    const CsvTable t = parse_string("a,b\n\"x\"junk,2\n1,2\n");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.dropped == 1);
  }
}

TEST_CASE("parser errors") {
  std::istringstream empty("");
  CHECK_THROWS_WITH_AS(parse_csv(empty), "missing csv header", std::invalid_argument);
  std::istringstream blank("\n\n");
  CHECK_THROWS_WITH_AS(parse_csv(blank), "missing csv header", std::invalid_argument);
  std::istringstream badhdr("\"a\n");
  CHECK_THROWS_WITH_AS(parse_csv(badhdr), "malformed csv header", std::invalid_argument);
  CHECK_THROWS_AS(parse_csv_file("/no/such/file.csv"), std::runtime_error);
}

TEST_CASE("column lookup") {
  const CsvTable t = parse_string("age,income,sex\n");
  CHECK(t.column("age") == 0);
  CHECK(t.column("sex") == 2);
  CHECK_THROWS_WITH_AS(t.column("fnlwgt"), "missing column 'fnlwgt'",
                       std::invalid_argument);
}

TEST_CASE("label and group encoding") {
  const CsvTable t =
      parse_string("age,income,sex\n39, <=50K ,Male\n50,>50K,Female\n38,>50K,Male\n");
  const IngestResult r = encode_table(t, adult_style_spec());
  REQUIRE(r.data.size() == 3);
  CHECK(r.data.dim() == 1);
  CHECK(r.dropped == 0);
  CHECK(r.data[0].y == 0);  // "<=50K" is the negative class
  CHECK(r.data[1].y == 1);
  CHECK(r.data[2].y == 1);
  CHECK(r.data[0].a == 1);  // privileged value maps to a = 1
  CHECK(r.data[1].a == 0);
  CHECK(r.data[2].a == 1);
  CHECK(r.data[0].x[0] == 39.0);
}

TEST_CASE("encode-time drops combine with parse-time drops") {
  // One row short a field (parse drop), one with a non-numeric feature,
  // one with an empty label cell (both encode drops).
  const CsvTable t = parse_string(
      "age,income,sex\n39,>50K,Male\nbroken\n?,>50K,Female\n41,,Male\n22,<=50K,Female\n");
  CHECK(t.dropped == 1);
  const IngestResult r = encode_table(t, adult_style_spec());
  CHECK(r.data.size() == 2);
  CHECK(r.dropped == 3);
}

TEST_CASE("protected column must be cleanly binary") {
  IngestSpec spec = adult_style_spec();
  SUBCASE("three categories refuse to collapse") {
    const CsvTable t =
        parse_string("age,income,sex\n1,>50K,Male\n2,>50K,Female\n3,>50K,Other\n");
    CHECK_THROWS_WITH_AS(encode_table(t, spec),
                         "protected column 'sex' has 3 categories; expected 2",
                         std::runtime_error);
  }
  SUBCASE("one category is just as wrong") {
    const CsvTable t = parse_string("age,income,sex\n1,>50K,Male\n2,>50K,Male\n");
    CHECK_THROWS_WITH_AS(encode_table(t, spec),
                         "protected column 'sex' has 1 categories; expected 2",
                         std::runtime_error);
  }
  SUBCASE("privileged value must actually occur") {
    const CsvTable t = parse_string("age,income,sex\n1,>50K,F\n2,>50K,M\n");
    CHECK_THROWS_WITH_AS(encode_table(t, spec),
                         "privileged value 'Male' absent from column 'sex'",
                         std::runtime_error);
  }
}

TEST_CASE("encode validation") {
  const CsvTable t = parse_string("age,income,sex\n1,>50K,Male\n2,<=50K,Female\n");
  IngestSpec spec = adult_style_spec();
  SUBCASE("empty feature list") {
    spec.feature_columns.clear();
    CHECK_THROWS_WITH_AS(encode_table(t, spec), "empty feature list",
                         std::invalid_argument);
  }
  SUBCASE("fractions outside (0,1)") {
    spec.train_frac = 1.0;
    CHECK_THROWS_WITH_AS(encode_table(t, spec), "train fraction outside (0,1)",
                         std::invalid_argument);
    spec.train_frac = 0.7;
    spec.val_frac = 0.0;
    CHECK_THROWS_WITH_AS(encode_table(t, spec), "validation fraction outside (0,1)",
                         std::invalid_argument);
    spec.val_frac = 0.5;
    CHECK_THROWS_WITH_AS(encode_table(t, spec),
                         "train and validation fractions exceed 1", std::invalid_argument);
  }
  SUBCASE("all rows dropped") {
    const CsvTable bad = parse_string("age,income,sex\nx,>50K,Male\n");
    CHECK_THROWS_WITH_AS(encode_table(bad, spec), "no usable rows in 'mem'",
                         std::runtime_error);
  }
}

TEST_CASE("standardizer") {
  SUBCASE("z-scoring with given statistics") {
    Standardizer st;
    st.mean = {10.0};
    st.sd = {2.0};
    Dataset d(1);
    d.add({14.0}, 0, 0);
    const Dataset z = st.apply(d);
    CHECK(z[0].x[0] == 2.0);
  }
  SUBCASE("fit computes mean and n-1 deviation") {
    Dataset train(2);
    train.add({1.0, 5.0}, 0, 0);
    train.add({2.0, 5.0}, 1, 1);
    train.add({3.0, 5.0}, 0, 1);
    train.add({4.0, 5.0}, 1, 0);
    const Standardizer st = fit_standardizer(train);
    CHECK(st.mean[0] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(st.sd[0] == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
    // Constant column: unscaled (sd forced to 1) and reported.
    CHECK(st.mean[1] == 5.0);
    CHECK(st.sd[1] == 1.0);
    REQUIRE(st.constant_columns == std::vector<std::size_t>{1});
    const Dataset z = st.apply(train);
    CHECK(z[0].x[0] == doctest::Approx((1.0 - 2.5) / st.sd[0]).epsilon(1e-15));
    CHECK(z[0].x[1] == 0.0);
    CHECK(z[3].a == 1);
    CHECK(z[2].y == 1);
  }
  SUBCASE("statistics come from the fitted set, not the applied one") {
    Dataset train(1), test(1);
    train.add({0.0}, 0, 0);
    train.add({2.0}, 0, 1);
    test.add({5.0}, 1, 1);
    const Standardizer st = fit_standardizer(train);
    const Dataset z = st.apply(test);
    CHECK(z[0].x[0] == doctest::Approx((5.0 - 1.0) / std::sqrt(2.0)).epsilon(1e-15));
  }
  SUBCASE("single row makes every column constant") {
    Dataset one(2);
    one.add({3.0, -1.0}, 0, 0);
    const Standardizer st = fit_standardizer(one);
    CHECK(st.sd == std::vector<double>{1.0, 1.0});
    CHECK(st.constant_columns.size() == 2);
  }
  SUBCASE("errors") {
    CHECK_THROWS_WITH_AS(fit_standardizer(Dataset(1)), "empty dataset",
                         std::invalid_argument);
    Standardizer st;
    st.mean = {0.0};
    st.sd = {1.0};
    Dataset wide(2);
    wide.add({1.0, 2.0}, 0, 0);
    CHECK_THROWS_WITH_AS(st.apply(wide), "dimension mismatch", std::invalid_argument);
  }
}

TEST_CASE("three-way split") {
  Dataset d(1);
  for (int i = 0; i < 10; ++i) d.add({static_cast<double>(i)}, i % 2, (i / 2) % 2);

  SUBCASE("floor sizes, remainder to test") {
    const ThreeWaySplit s = split_dataset(d, 0.7, 0.3, 5);
    CHECK(s.train.size() == 7);
    CHECK(s.val.size() == 3);
    CHECK(s.test.size() == 0);
    const ThreeWaySplit u = split_dataset(d, 0.55, 0.25, 5);
    CHECK(u.train.size() == 5);
    CHECK(u.val.size() == 2);
    CHECK(u.test.size() == 3);
  }
  SUBCASE("parts partition the input") {
    const ThreeWaySplit s = split_dataset(d, 0.55, 0.25, 12);
    Dataset merged(1);
    for (const Dataset* part : {&s.train, &s.val, &s.test}) {
      for (std::size_t i = 0; i < part->size(); ++i) merged.add((*part)[i]);
    }
    CHECK(sorted_triples(merged) == sorted_triples(d));
  }
  SUBCASE("deterministic per seed") {
    const ThreeWaySplit a = split_dataset(d, 0.7, 0.3, 99);
    const ThreeWaySplit b = split_dataset(d, 0.7, 0.3, 99);
    for (std::size_t i = 0; i < a.train.size(); ++i) {
      CHECK(a.train[i].x[0] == b.train[i].x[0]);
    }
  }
  SUBCASE("different seeds reorder") {
    std::set<std::string> orders;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const ThreeWaySplit s = split_dataset(d, 0.7, 0.3, seed);
      std::string key;
      for (std::size_t i = 0; i < s.train.size(); ++i) {
        key += format_double(s.train[i].x[0]) + ",";
      }
      orders.insert(key);
    }
    CHECK(orders.size() == 10);
  }
  SUBCASE("fraction validation") {
    CHECK_THROWS_WITH_AS(split_dataset(d, 0.0, 0.3, 1), "train fraction outside (0,1)",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(split_dataset(d, 0.7, 1.0, 1),
                         "validation fraction outside (0,1)", std::invalid_argument);
    CHECK_THROWS_WITH_AS(split_dataset(d, 0.8, 0.3, 1),
                         "train and validation fractions exceed 1", std::invalid_argument);
  }
}

TEST_CASE("write and re-ingest reproduces samples bit for bit") {
  Dataset d(2);
  d.add({0.1, -0.59657359027997265471}, 1, 1);
  d.add({1.0 / 3.0, 1e-17}, 0, 1);
  d.add({-2.0 / 7.0, 123456.789012345}, 1, 0);
  d.add({5e-324 * 2, 0.0}, 0, 0);

  std::ostringstream out;
  write_csv(d, out, {"x1", "x2"}, "a", "y");

  std::istringstream in(out.str());
  const CsvTable t = parse_csv(in);
  IngestSpec spec;
  spec.label_column = "y";
  spec.positive_label = "1";
  spec.group_column = "a";
  spec.privileged_value = "1";
  spec.feature_columns = {"x1", "x2"};
  const IngestResult r = encode_table(t, spec);

  REQUIRE(r.data.size() == d.size());
  CHECK(r.dropped == 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(r.data[i].x[0] == d[i].x[0]);
    CHECK(r.data[i].x[1] == d[i].x[1]);
    CHECK(r.data[i].a == d[i].a);
    CHECK(r.data[i].y == d[i].y);
  }
}

TEST_CASE("csv writer escapes awkward column names") {
  Dataset d(1);
  d.add({1.5}, 0, 1);
  std::ostringstream out;
  write_csv(d, out, {"we,ird"}, "gr\"p", "y");
  std::istringstream in(out.str());
  const CsvTable t = parse_csv(in);
  REQUIRE(t.header.size() == 3);
  CHECK(t.header[0] == "we,ird");
  CHECK(t.header[1] == "gr\"p");
  CHECK(t.rows[0][0] == "1.5");

  std::ostringstream bad;
  CHECK_THROWS_WITH_AS(write_csv(d, bad, {"x1", "x2"}, "a", "y"), "dimension mismatch",
                       std::invalid_argument);
}

TEST_CASE("feature ranking by label correlation") {
  // f_perfect matches the label exactly, f_anti is its mirror (same
  // magnitude, later column), f_noise agrees on 6 of 8 rows, f_const
  // carries nothing.
  const CsvTable t = parse_string(
      "label,f_perfect,f_noise,f_const,f_anti\n"
      "p,1,1,7,0\n"
      "n,0,0,7,1\n"
      "p,1,0,7,0\n"
      "n,0,1,7,1\n"
      "p,1,1,7,0\n"
      "n,0,0,7,1\n"
      "p,1,1,7,0\n"
      "n,0,0,7,1\n");
  const std::vector<std::string> candidates = {"f_noise", "f_anti", "f_const",
                                               "f_perfect"};
  const std::vector<std::string> top2 =
      select_features_by_correlation(t, "label", "p", candidates, 2);
  CHECK(top2 == std::vector<std::string>{"f_perfect", "f_anti"});
  const std::vector<std::string> all =
      select_features_by_correlation(t, "label", "p", candidates, 10);
  CHECK(all == std::vector<std::string>{"f_perfect", "f_anti", "f_noise", "f_const"});
  CHECK(select_features_by_correlation(t, "label", "p", candidates, 0).empty());
  CHECK_THROWS_AS(select_features_by_correlation(t, "nope", "p", candidates, 1),
                  std::invalid_argument);
}

TEST_CASE("ranking skips unparseable cells per candidate") {
  // The '?' row drops out of f_a's sums only; f_b still sees a clean
  // perfect alignment over its own usable rows.
  const CsvTable t = parse_string(
      "label,f_a,f_b\n"
      "p,?,1\n"
      "p,1,1\n"
      "n,0,0\n"
      "p,1,1\n"
      "n,0,0\n");
  const std::vector<std::string> top =
      select_features_by_correlation(t, "label", "p", {"f_a", "f_b"}, 2);
  CHECK(top == std::vector<std::string>{"f_a", "f_b"});  // tie at |r| = 1, header order
}

}  // TEST_SUITE
