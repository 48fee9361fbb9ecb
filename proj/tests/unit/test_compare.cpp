#include "streamlink/compare/comparators.hpp"
#include "streamlink/compare/comparison_matrix.hpp"
#include "streamlink/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <limits>
#include <random>

using namespace streamlink;

namespace {

const std::vector<double> kCut{0.25, 0.5, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

FieldSchema tiny_schema() {
  return FieldSchema({{"name", FieldKind::text, kCut},
                      {"sex", FieldKind::categorical, {}},
                      {"age", FieldKind::numeric, {1.0, 4.0, kInf}}});
}

RecordFile make_file(int index, std::vector<std::tuple<std::string, std::string, double>> rows) {
  RecordFile f;
  f.index = index;
  int r = 1;
  for (auto& [n, s, a] : rows) f.records.push_back({index, r++, {n, s, a}});
  return f;
}

} // namespace

TEST_CASE("compare_text") {
  CHECK(compare_text("ryan", "ryan", kCut) == 0);
  CHECK(normalized_levenshtein("maddisom", "maddison") == doctest::Approx(1.0 / 8));
  CHECK(compare_text("maddisom", "maddison", kCut) == 1);
  CHECK(compare_text("abc", "xyz", kCut) == 3);
  CHECK(compare_text("", "", kCut) == 0);
  CHECK(compare_text("abcd", "abxy", kCut) == 2);
  // scalar values, not bytes
  CHECK(levenshtein(decode_utf8("müller"), decode_utf8("muller")) == 1);
  CHECK(normalized_levenshtein("müller", "muller") == doctest::Approx(1.0 / 6));
}

TEST_CASE("compare_categorical") {
  CHECK(compare_categorical("f", "f") == 0);
  CHECK(compare_categorical("f", "d") == 1);
  const std::vector<std::string> domain{"a", "b", "c", "ab", ""};
  for (const auto& x : domain)
    for (const auto& y : domain) CHECK(compare_categorical(x, y) == compare_categorical(y, x));
}

TEST_CASE("compare_numeric") {
  const std::vector<double> edges{1.0, 4.0, kInf};
  CHECK(compare_numeric(3, 3, edges) == 0);
  CHECK(compare_numeric(3, 5, edges) == 2);
  CHECK(compare_numeric(3, 3.5, edges) == 1);
  CHECK(compare_numeric(0, 100, edges) == 3);
  CHECK_THROWS_AS(compare_numeric(kInf, 1, edges), IngestionError);
  CHECK_THROWS_AS(compare_numeric(std::nan(""), 1, edges), IngestionError);

  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(gen), b = u(gen), c = u(gen);
    CHECK(compare_numeric(a, b, edges) == compare_numeric(b, a, edges));
    if (std::fabs(a - b) <= std::fabs(a - c)) CHECK(compare_numeric(a, b, edges) <= compare_numeric(a, c, edges));
  }
}

TEST_CASE("text comparison is symmetric and zero only on equality") {
  std::mt19937_64 gen(8);
  const std::string alphabet = "abc";
  auto word = [&] {
    std::string s;
    const int n = static_cast<int>(gen() % 5);
    for (int i = 0; i < n; ++i) s += alphabet[gen() % alphabet.size()];
    return s;
  };
  for (int i = 0; i < 3000; ++i) {
    const auto a = word(), b = word();
    const int l = compare_text(a, b, kCut);
    CHECK(l == compare_text(b, a, kCut));
    CHECK((l == 0) == (a == b));
  }
}

TEST_CASE("build_comparison_matrix") {
  const auto schema = tiny_schema();
  SUBCASE("single pair gives one row") {
    std::vector<RecordFile> prev{make_file(1, {{"ann", "f", 30}})};
    const auto m = build_comparison_matrix(make_file(2, {{"anne", "f", 33}}), prev, schema);
    CHECK(m.rows() == 1);
    CHECK(m.level(0, 0) == 1);
    CHECK(m.level(0, 1) == 0);
    CHECK(m.level(0, 2) == 2);
  }
  SUBCASE("files (2, 3) give 6 rows, each with F ones") {
    std::vector<RecordFile> prev{make_file(1, {{"ann", "f", 30}, {"bob", "m", 40}})};
    const auto m = build_comparison_matrix(
        make_file(2, {{"ann", "f", 30}, {"rob", "m", 41}, {"zed", "x", 90}}), prev, schema);
    REQUIRE(m.rows() == 6);
    // row order: earlier record major, new row fastest
    CHECK(m.row_index(1, 1) == 4);
    CHECK(m.level(m.row_index(1, 1), 0) == 2);
    CHECK(m.level(m.row_index(0, 0), 0) == 0);
    CHECK(m.level(m.row_index(0, 2), 2) == 3);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto ind = m.indicators(r);
      CHECK(ind.size() == static_cast<std::size_t>(schema.indicator_length()));
      int ones = 0;
      for (int f = 0; f < schema.field_count(); ++f) {
        int block = 0;
        for (int l = 0; l < schema.block_size(f); ++l) block += ind[schema.block_offset(f) + l];
        CHECK(block == 1);
        ones += block;
      }
      CHECK(ones == schema.field_count());
    }
    const auto path = std::filesystem::temp_directory_path() / "streamlink_gamma_roundtrip.bin";
    save_comparison_matrix(path, m);
    CHECK(load_comparison_matrix(path) == m);
    std::filesystem::remove(path);
  }
  SUBCASE("schema mismatch is an ingestion error") {
    std::vector<RecordFile> prev{make_file(1, {{"ann", "f", 30}})};
    RecordFile bad;
    bad.index = 2;
    bad.records.push_back({2, 1, {std::string("ann"), std::string("f")}});
    CHECK_THROWS_AS(build_comparison_matrix(bad, prev, schema), IngestionError);
  }
}

TEST_CASE("record parsing rejects missing values") {
  const auto schema = tiny_schema();
  CHECK_THROWS_AS(parse_value(schema.field(0), ""), IngestionError);
  CHECK_THROWS_AS(parse_value(schema.field(2), "abc"), IngestionError);
  CHECK(std::get<double>(parse_value(schema.field(2), "2.5")) == 2.5);
  const auto rows = csv::parse("a,\"b,c\",\"d\"\"e\"\r\n1,2,3\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][1] == "b,c");
  CHECK(rows[0][2] == "d\"e");
}
