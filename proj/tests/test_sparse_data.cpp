#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <tuple>

#include "a2nlf/errors.hpp"
#include "a2nlf/sparse_data.hpp"
#include "oracle.hpp"

using namespace a2nlf;

namespace {

RatingData parse(const std::string& text, Separator sep = Separator::DoubleColon) {
  std::istringstream in(text);
  return parse_ratings(in, sep);
}

}  // namespace

TEST_CASE("parse_ratings maps fields directly") {
  const RatingData d = parse("1::10::5.0\n2::10::3.0");
  CHECK(d.matrix.num_rows() == 2);
  CHECK(d.matrix.num_cols() == 1);
  REQUIRE(d.matrix.size() == 2);
  CHECK(d.matrix.entry(0) == Entry{0, 0, 5.0});
  CHECK(d.matrix.entry(1) == Entry{1, 0, 3.0});
  CHECK(d.row_ids == std::vector<std::string>{"1", "2"});
  CHECK(d.col_ids == std::vector<std::string>{"10"});
}

TEST_CASE("parse_ratings keeps the last duplicate") {
  const RatingData d = parse("1::10::5.0\n1::10::2.0");
  REQUIRE(d.matrix.size() == 1);
  CHECK(d.matrix.entry(0).value == 2.0);
}

TEST_CASE("parse_ratings errors") {
  SUBCASE("too few fields") {
    try {
      parse("1::10");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
    }
  }
  SUBCASE("line number counts blank lines") {
    try {
      parse("1::10::3\n\n2::11\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("bad rating text") { CHECK_THROWS_AS(parse("1::10::abc"), ParseError); }
  SUBCASE("negative rating") { CHECK_THROWS_AS(parse("1::10::-1"), DomainError); }
  SUBCASE("empty stream") { CHECK_THROWS_AS(parse(""), DomainError); }
  SUBCASE("only blank lines") { CHECK_THROWS_AS(parse("\n  \n\r\n"), DomainError); }
}

TEST_CASE("parse_ratings separators, extra fields and line endings") {
  CHECK(parse("u1\ti1\t4\t978300760\n", Separator::Tab).matrix.entry(0).value == 4.0);
  CHECK(parse("u1,i1,4.5,x,y\r\n", Separator::Comma).matrix.entry(0).value == 4.5);
  CHECK(parse("7 8 1.25\n", Separator::Space).matrix.entry(0).value == 1.25);
  const RatingData ml = parse("1::1193::5::978300760\n1::661::3::978302109\n");
  CHECK(ml.matrix.num_cols() == 2);
  CHECK(ml.col_ids == std::vector<std::string>{"1193", "661"});
  CHECK_THROWS_AS(parse("1,2,3\n", Separator::DoubleColon), ParseError);
  CHECK(parse_separator("::") == Separator::DoubleColon);
  CHECK(parse_separator("tab") == Separator::Tab);
  CHECK_THROWS_AS(parse_separator("pipe"), ConfigError);
}

TEST_CASE("parse_ratings re-indexes in first-appearance order, stably") {
  const std::string text = "b::y::1\na::x::2\nb::x::3\nc::z::4\n";
  const RatingData first = parse(text);
  const RatingData second = parse(text);
  CHECK(first.row_ids == std::vector<std::string>{"b", "a", "c"});
  CHECK(first.col_ids == std::vector<std::string>{"y", "x", "z"});
  CHECK(first.matrix == second.matrix);
  CHECK(first.row_ids == second.row_ids);
  CHECK(first.col_ids == second.col_ids);
}

TEST_CASE("HdiMatrix rejects invalid entries") {
  CHECK_THROWS_AS(HdiMatrix(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}), DomainError);
  CHECK_THROWS_AS(HdiMatrix(2, 2, {{2, 0, 1.0}}), DomainError);
  CHECK_THROWS_AS(HdiMatrix(2, 2, {{0, 0, -1.0}}), DomainError);
}

TEST_CASE("HdiMatrix row and column indexes agree with the entry list") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 1 + rng.below(15), cols = 1 + rng.below(15);
    const HdiMatrix m = oracle::random_matrix(rng, rows, cols, rng.uniform());
    std::vector<Entry> by_row, by_col;
    std::size_t row_total = 0, col_total = 0;
    for (std::size_t u = 0; u < rows; ++u) {
      row_total += m.row_count(u);
      for (const Entry& e : m.row(u)) {
        CHECK(e.row == u);
        by_row.push_back(e);
      }
    }
    for (std::size_t i = 0; i < cols; ++i) {
      col_total += m.col_count(i);
      for (const std::size_t id : m.col(i)) {
        CHECK(m.entry(id).col == i);
        by_col.push_back(m.entry(id));
      }
    }
    CHECK(row_total == m.size());
    CHECK(col_total == m.size());
    const auto key_order = [](const Entry& a, const Entry& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    };
    std::sort(by_col.begin(), by_col.end(), key_order);
    std::vector<Entry> all(m.entries().begin(), m.entries().end());
    CHECK(by_row == all);
    CHECK(by_col == all);
  }
}

TEST_CASE("transposed swaps roles") {
  const HdiMatrix m(2, 3, {{0, 2, 1.0}, {1, 0, 2.0}});
  const HdiMatrix t = m.transposed();
  CHECK(t.num_rows() == 3);
  CHECK(t.num_cols() == 2);
  CHECK(t.entry(0) == Entry{0, 1, 2.0});
  CHECK(t.entry(1) == Entry{2, 0, 1.0});
}

TEST_CASE("density") {
  CHECK(density(HdiMatrix(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}})) == 1.0);
  CHECK(density(HdiMatrix(2, 2, {{1, 1, 3}})) == 0.25);
  CHECK_THROWS_AS(density(HdiMatrix(0, 3, {})), DomainError);

  // MovieLens 1M shape: 1000209 ratings over 6040 users and 3706 movies.
  std::vector<Entry> entries;
  entries.reserve(1000209);
  for (std::size_t n = 0; n < 1000209; ++n)
    entries.push_back({static_cast<Index>(n / 3706), static_cast<Index>(n % 3706), 1.0});
  CHECK(density(HdiMatrix(6040, 3706, std::move(entries))) == doctest::Approx(0.0447).epsilon(1e-3));
}

TEST_CASE("ten_fold_splits sizes") {
  SUBCASE("100 entries") {
    Rng rng(3);
    std::vector<Entry> entries;
    for (Index n = 0; n < 100; ++n) entries.push_back({n / 10, n % 10, 1.0 + n % 5});
    const auto splits = ten_fold_splits(HdiMatrix(10, 10, entries), 9);
    REQUIRE(splits.size() == 10);
    for (const DatasetSplit& s : splits) {
      CHECK(s.train.size() == 70);
      CHECK(s.validation.size() == 10);
      CHECK(s.test.size() == 20);
    }
  }
  SUBCASE("13 entries") {
    std::vector<Entry> entries;
    for (Index n = 0; n < 13; ++n) entries.push_back({n, 0, 1.0});
    const HdiMatrix m(13, 1, entries);
    const FoldPartition p = partition_entries(m, 5);
    std::vector<std::size_t> sizes;
    for (std::size_t s = 0; s < kNumFolds; ++s) sizes.push_back(p.subset_size(s));
    CHECK(sizes == std::vector<std::size_t>{2, 2, 2, 1, 1, 1, 1, 1, 1, 1});
    for (const DatasetSplit& s : ten_fold_splits(m, 5))
      CHECK(s.train.size() + s.validation.size() + s.test.size() == 13);
  }
  SUBCASE("too few entries") {
    CHECK_THROWS_AS(ten_fold_splits(HdiMatrix(9, 1, {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}}), 1), DomainError);
  }
}

TEST_CASE("fold f rotates subsets: train f..f+6, validation f+7, test f+8 and f+9") {
  std::vector<Entry> entries;
  for (Index n = 0; n < 20; ++n) entries.push_back({n, 0, static_cast<double>(n)});
  const HdiMatrix m(20, 1, entries);
  const FoldPartition p = partition_entries(m, 17);
  const auto subset_keys = [&](std::size_t s) {
    std::set<std::pair<Index, Index>> k;
    for (std::size_t pos = p.bounds[s]; pos < p.bounds[s + 1]; ++pos) {
      const Entry& e = m.entry(p.order[pos]);
      k.insert({e.row, e.col});
    }
    return k;
  };
  for (std::size_t f = 0; f < kNumFolds; ++f) {
    const DatasetSplit split = make_fold(m, p, f);
    CHECK(oracle::keys(split.validation) == subset_keys((f + 7) % 10));
    auto test = subset_keys((f + 8) % 10);
    test.merge(subset_keys((f + 9) % 10));
    CHECK(oracle::keys(split.test) == test);
  }
}

TEST_CASE("ten_fold_splits is deterministic, disjoint and complete") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const HdiMatrix m = oracle::random_matrix(rng, 5 + rng.below(20), 5 + rng.below(20), 0.5);
    if (m.size() < 10) continue;
    const std::uint64_t seed = rng.below(1000);
    const auto a = ten_fold_splits(m, seed);
    const auto b = ten_fold_splits(m, seed);
    for (std::size_t f = 0; f < kNumFolds; ++f) {
      CHECK(a[f].train == b[f].train);
      CHECK(a[f].validation == b[f].validation);
      CHECK(a[f].test == b[f].test);
      const auto tr = oracle::keys(a[f].train), va = oracle::keys(a[f].validation),
                 te = oracle::keys(a[f].test);
      std::set<std::pair<Index, Index>> all = tr;
      all.insert(va.begin(), va.end());
      all.insert(te.begin(), te.end());
      CHECK(all.size() == tr.size() + va.size() + te.size());
      CHECK(all == oracle::keys(m));
    }
  }
}
