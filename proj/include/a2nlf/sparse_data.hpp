#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace a2nlf {

using Index = std::uint32_t;

/// One known rating y(row, col).
struct Entry {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  bool operator==(const Entry&) const = default;
};

/// Sparse nonnegative matrix holding only its known entries, indexed both by
/// row and by column.
///
/// Entries are stored sorted by (row, col); the position of an entry in that
/// order is its entry id. Row u owns the contiguous id range
/// [row_begin(u), row_end(u)). Column i is a list of entry ids, sorted by row.
/// Immutable after construction.
class HdiMatrix {
 public:
  HdiMatrix() = default;

  /// Throws DomainError on out-of-range indices, negative or non-finite values,
  /// or repeated (row, col) keys.
  HdiMatrix(std::size_t num_rows, std::size_t num_cols, std::vector<Entry> entries);

  std::size_t num_rows() const noexcept { return num_rows_; }
  std::size_t num_cols() const noexcept { return num_cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::span<const Entry> entries() const noexcept { return entries_; }
  const Entry& entry(std::size_t id) const noexcept { return entries_[id]; }

  /// Entries of row u, i.e. the set Lambda(u), as (col, value) records.
  std::span<const Entry> row(std::size_t u) const noexcept {
    return {entries_.data() + row_ptr_[u], entries_.data() + row_ptr_[u + 1]};
  }
  std::size_t row_begin(std::size_t u) const noexcept { return row_ptr_[u]; }
  std::size_t row_end(std::size_t u) const noexcept { return row_ptr_[u + 1]; }
  std::size_t row_count(std::size_t u) const noexcept { return row_ptr_[u + 1] - row_ptr_[u]; }

  /// Entry ids of column i, i.e. the set Lambda(i).
  std::span<const std::size_t> col(std::size_t i) const noexcept {
    return {col_ids_.data() + col_ptr_[i], col_ids_.data() + col_ptr_[i + 1]};
  }
  std::size_t col_count(std::size_t i) const noexcept { return col_ptr_[i + 1] - col_ptr_[i]; }

  /// Same entries with rows and columns swapped.
  HdiMatrix transposed() const;

  bool operator==(const HdiMatrix& other) const {
    return num_rows_ == other.num_rows_ && num_cols_ == other.num_cols_ &&
           entries_ == other.entries_;
  }

 private:
  std::size_t num_rows_ = 0;
  std::size_t num_cols_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_ptr_{0};
  std::vector<std::size_t> col_ids_;
};

/// |Lambda| / (|U| * |I|). Throws DomainError for a zero-dimension matrix.
double density(const HdiMatrix& matrix);

enum class Separator { DoubleColon, Tab, Comma, Space };

/// Accepts "dcolon", "tab", "comma", "space" (also the literal "::", "\t", ",", " ").
Separator parse_separator(std::string_view name);
std::string_view separator_name(Separator sep);

/// A parsed ratings file: the matrix plus the original ids of each dense index.
struct RatingData {
  HdiMatrix matrix;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;
};

/// Reads "user<sep>item<sep>rating[<sep>ignored...]" lines. Ids are re-indexed
/// densely in first-appearance order; a repeated (user, item) pair keeps the
/// last rating. Blank lines are skipped.
///
/// Throws ParseError for a line with fewer than three fields or an unparsable
/// rating, DomainError for a negative rating or an input without ratings.
RatingData parse_ratings(std::istream& in, Separator sep);
RatingData parse_ratings_file(const std::string& path, Separator sep);

/// Train (Lambda), validation (Omega) and test (K) sets sharing one shape.
struct DatasetSplit {
  HdiMatrix train;
  HdiMatrix validation;
  HdiMatrix test;
};

inline constexpr std::size_t kNumFolds = 10;

/// Shuffled assignment of every entry id of a matrix to one of ten subsets.
/// Subset s holds the shuffled positions [bounds[s], bounds[s+1]); the first
/// |Lambda| mod 10 subsets get one extra entry.
struct FoldPartition {
  std::vector<std::size_t> order;
  std::array<std::size_t, kNumFolds + 1> bounds{};

  std::size_t subset_size(std::size_t s) const { return bounds[s + 1] - bounds[s]; }
};

/// Throws DomainError when the matrix holds fewer than ten entries.
FoldPartition partition_entries(const HdiMatrix& matrix, std::uint64_t seed);

/// Fold f trains on subsets f..f+6, validates on f+7 and tests on f+8, f+9
/// (all mod 10).
DatasetSplit make_fold(const HdiMatrix& matrix, const FoldPartition& partition, std::size_t fold);

std::vector<DatasetSplit> ten_fold_splits(const HdiMatrix& matrix, std::uint64_t seed);

}  // namespace a2nlf
