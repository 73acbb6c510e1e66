#include "a2nlf/sparse_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "a2nlf/errors.hpp"
#include "a2nlf/rng.hpp"

namespace a2nlf {

HdiMatrix::HdiMatrix(std::size_t num_rows, std::size_t num_cols, std::vector<Entry> entries)
    : num_rows_(num_rows), num_cols_(num_cols), entries_(std::move(entries)) {
  for (const Entry& e : entries_) {
    if (e.row >= num_rows_ || e.col >= num_cols_)
      throw DomainError("entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                        ") outside a " + std::to_string(num_rows_) + "x" +
                        std::to_string(num_cols_) + " matrix");
    if (!std::isfinite(e.value) || e.value < 0.0)
      throw DomainError("entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                        ") has negative or non-finite value");
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t n = 1; n < entries_.size(); ++n) {
    if (entries_[n].row == entries_[n - 1].row && entries_[n].col == entries_[n - 1].col)
      throw DomainError("duplicate entry (" + std::to_string(entries_[n].row) + ", " +
                        std::to_string(entries_[n].col) + ")");
  }

  row_ptr_.assign(num_rows_ + 1, 0);
  col_ptr_.assign(num_cols_ + 1, 0);
  for (const Entry& e : entries_) {
    ++row_ptr_[e.row + 1];
    ++col_ptr_[e.col + 1];
  }
  for (std::size_t u = 0; u < num_rows_; ++u) row_ptr_[u + 1] += row_ptr_[u];
  for (std::size_t i = 0; i < num_cols_; ++i) col_ptr_[i + 1] += col_ptr_[i];

  // Scanning ids in (row, col) order leaves every column list sorted by row.
  col_ids_.resize(entries_.size());
  std::vector<std::size_t> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t id = 0; id < entries_.size(); ++id) col_ids_[cursor[entries_[id].col]++] = id;
}

HdiMatrix HdiMatrix::transposed() const {
  std::vector<Entry> swapped;
  swapped.reserve(entries_.size());
  for (const Entry& e : entries_) swapped.push_back({e.col, e.row, e.value});
  return HdiMatrix(num_cols_, num_rows_, std::move(swapped));
}

double density(const HdiMatrix& matrix) {
  if (matrix.num_rows() == 0 || matrix.num_cols() == 0)
    throw DomainError("density of a zero-dimension matrix");
  return static_cast<double>(matrix.size()) /
         (static_cast<double>(matrix.num_rows()) * static_cast<double>(matrix.num_cols()));
}

Separator parse_separator(std::string_view name) {
  if (name == "dcolon" || name == "::") return Separator::DoubleColon;
  if (name == "tab" || name == "\t") return Separator::Tab;
  if (name == "comma" || name == ",") return Separator::Comma;
  if (name == "space" || name == " ") return Separator::Space;
  throw ConfigError("unknown separator '" + std::string(name) + "'");
}

std::string_view separator_name(Separator sep) {
  switch (sep) {
    case Separator::DoubleColon: return "dcolon";
    case Separator::Tab: return "tab";
    case Separator::Comma: return "comma";
    case Separator::Space: return "space";
  }
  return "dcolon";
}

namespace {

std::string_view separator_text(Separator sep) {
  switch (sep) {
    case Separator::DoubleColon: return "::";
    case Separator::Tab: return "\t";
    case Separator::Comma: return ",";
    case Separator::Space: return " ";
  }
  return "::";
}

// Splits off at most the first three fields; anything after is ignored.
std::size_t split_fields(std::string_view line, std::string_view sep,
                         std::array<std::string_view, 3>& out) {
  std::size_t count = 0;
  while (count < 3) {
    const std::size_t pos = line.find(sep);
    out[count++] = line.substr(0, pos);
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + sep.size());
  }
  return count;
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

struct PairHash {
  std::size_t operator()(std::uint64_t key) const noexcept { return splitmix64(key); }
};

}  // namespace

RatingData parse_ratings(std::istream& in, Separator sep) {
  const std::string_view sep_text = separator_text(sep);
  RatingData data;
  std::unordered_map<std::string, Index> row_lookup;
  std::unordered_map<std::string, Index> col_lookup;
  std::unordered_map<std::uint64_t, std::size_t, PairHash> position;
  std::vector<Entry> entries;

  const auto intern = [](std::unordered_map<std::string, Index>& lookup,
                         std::vector<std::string>& ids, std::string_view id) {
    auto [it, inserted] = lookup.try_emplace(std::string(id), static_cast<Index>(ids.size()));
    if (inserted) ids.emplace_back(id);
    return it->second;
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    std::array<std::string_view, 3> fields;
    if (split_fields(line, sep_text, fields) < 3)
      throw ParseError(line_no, "expected user, item and rating fields");

    const std::string_view user = trim(fields[0]);
    const std::string_view item = trim(fields[1]);
    const std::string_view rating_text = trim(fields[2]);
    if (user.empty() || item.empty()) throw ParseError(line_no, "empty id field");

    double rating = 0.0;
    const auto [end, ec] =
        std::from_chars(rating_text.data(), rating_text.data() + rating_text.size(), rating);
    if (ec != std::errc() || end != rating_text.data() + rating_text.size() ||
        !std::isfinite(rating))
      throw ParseError(line_no, "bad rating '" + std::string(rating_text) + "'");
    if (rating < 0.0)
      throw DomainError("line " + std::to_string(line_no) + ": negative rating " +
                        std::string(rating_text));

    const Index row = intern(row_lookup, data.row_ids, user);
    const Index col = intern(col_lookup, data.col_ids, item);
    const std::uint64_t key = (std::uint64_t{row} << 32) | col;
    auto [it, inserted] = position.try_emplace(key, entries.size());
    if (inserted)
      entries.push_back({row, col, rating});
    else
      entries[it->second].value = rating;
  }
  if (entries.empty()) throw DomainError("ratings input contains no entries");

  data.matrix = HdiMatrix(data.row_ids.size(), data.col_ids.size(), std::move(entries));
  return data;
}

RatingData parse_ratings_file(const std::string& path, Separator sep) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open ratings file '" + path + "'");
  return parse_ratings(in, sep);
}

FoldPartition partition_entries(const HdiMatrix& matrix, std::uint64_t seed) {
  const std::size_t n = matrix.size();
  if (n < kNumFolds)
    throw DomainError("ten-fold split needs at least 10 entries, got " + std::to_string(n));

  FoldPartition partition;
  partition.order.resize(n);
  for (std::size_t id = 0; id < n; ++id) partition.order[id] = id;
  Rng rng(seed);
  for (std::size_t m = n - 1; m > 0; --m) std::swap(partition.order[m], partition.order[rng.below(m + 1)]);

  const std::size_t base = n / kNumFolds;
  const std::size_t extra = n % kNumFolds;
  partition.bounds[0] = 0;
  for (std::size_t s = 0; s < kNumFolds; ++s)
    partition.bounds[s + 1] = partition.bounds[s] + base + (s < extra ? 1 : 0);
  return partition;
}

DatasetSplit make_fold(const HdiMatrix& matrix, const FoldPartition& partition, std::size_t fold) {
  if (fold >= kNumFolds) throw DomainError("fold index " + std::to_string(fold) + " out of range");
  std::vector<Entry> train;
  std::vector<Entry> validation;
  std::vector<Entry> test;
  train.reserve(matrix.size());
  for (std::size_t offset = 0; offset < kNumFolds; ++offset) {
    const std::size_t s = (fold + offset) % kNumFolds;
    std::vector<Entry>& target = offset < 7 ? train : (offset == 7 ? validation : test);
    for (std::size_t p = partition.bounds[s]; p < partition.bounds[s + 1]; ++p)
      target.push_back(matrix.entry(partition.order[p]));
  }
  return {HdiMatrix(matrix.num_rows(), matrix.num_cols(), std::move(train)),
          HdiMatrix(matrix.num_rows(), matrix.num_cols(), std::move(validation)),
          HdiMatrix(matrix.num_rows(), matrix.num_cols(), std::move(test))};
}

std::vector<DatasetSplit> ten_fold_splits(const HdiMatrix& matrix, std::uint64_t seed) {
  const FoldPartition partition = partition_entries(matrix, seed);
  std::vector<DatasetSplit> splits;
  splits.reserve(kNumFolds);
  for (std::size_t f = 0; f < kNumFolds; ++f) splits.push_back(make_fold(matrix, partition, f));
  return splits;
}

}  // namespace a2nlf
