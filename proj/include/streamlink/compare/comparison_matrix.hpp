#pragma once

#include "streamlink/linkage/layout.hpp"
#include "streamlink/linkage/records.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace streamlink {

/// Comparisons between the records of one new file and every record of the
/// earlier files. Rows run over (earlier record, new row) with the new row
/// varying fastest; each row stores one level code per field. The binary
/// P-length indicator form is available through `indicators`.
class ComparisonMatrix {
public:
  ComparisonMatrix() = default;
  ComparisonMatrix(std::vector<int> file_sizes, std::vector<int> levels, std::string schema_hash,
                   std::vector<std::uint8_t> codes);

  /// Sizes of files 1..m, the last one being the new file.
  const std::vector<int>& file_sizes() const noexcept { return file_sizes_; }
  const std::vector<int>& levels() const noexcept { return levels_; }
  const std::string& schema_hash() const noexcept { return schema_hash_; }

  int previous_records() const noexcept { return previous_; }
  int new_records() const noexcept { return file_sizes_.back(); }
  int field_count() const noexcept { return static_cast<int>(levels_.size()); }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(previous_) * new_records(); }

  std::size_t row_index(RecordId earlier, int new_row) const {
    return static_cast<std::size_t>(earlier) * static_cast<std::size_t>(new_records()) +
           static_cast<std::size_t>(new_row);
  }
  std::span<const std::uint8_t> row(std::size_t index) const {
    return {codes_.data() + index * levels_.size(), levels_.size()};
  }
  std::uint8_t level(std::size_t index, int field) const { return codes_[index * levels_.size() + field]; }
  std::span<const std::uint8_t> codes() const noexcept { return codes_; }

  /// Mixed-radix index of the row's level codes, available when the number of
  /// distinct level combinations is small enough to tabulate.
  bool has_patterns() const noexcept { return !patterns_.empty(); }
  std::uint32_t pattern(std::size_t index) const { return patterns_[index]; }
  std::uint32_t pattern_space() const noexcept { return pattern_space_; }

  /// P-length 0/1 expansion of one row.
  std::vector<std::uint8_t> indicators(std::size_t index) const;

  /// Per-level totals over every row, laid out as a P-vector.
  const std::vector<std::int64_t>& level_totals() const noexcept { return totals_; }

  friend bool operator==(const ComparisonMatrix& a, const ComparisonMatrix& b) {
    return a.file_sizes_ == b.file_sizes_ && a.levels_ == b.levels_ &&
           a.schema_hash_ == b.schema_hash_ && a.codes_ == b.codes_;
  }

private:
  std::vector<int> file_sizes_;
  std::vector<int> levels_;
  std::string schema_hash_;
  std::vector<std::uint8_t> codes_;
  std::vector<std::uint32_t> patterns_;
  std::uint32_t pattern_space_ = 0;
  std::vector<std::int64_t> totals_;
  int previous_ = 0;
};

/// Largest number of level combinations tabulated by pattern.
inline constexpr std::uint64_t kMaxPatternSpace = 1u << 20;

/// Builds Gamma for `new_file` against `previous` (in stream order). Records
/// of every file must conform to `schema`; mismatches throw IngestionError.
ComparisonMatrix build_comparison_matrix(const RecordFile& new_file,
                                         std::span<const RecordFile> previous,
                                         const FieldSchema& schema);

void save_comparison_matrix(const std::filesystem::path& path, const ComparisonMatrix& m);
ComparisonMatrix load_comparison_matrix(const std::filesystem::path& path);
/// Debug export: one row per pair with 1-based indices and level codes.
void export_comparison_csv(const std::filesystem::path& path, const ComparisonMatrix& m,
                           const FieldSchema& schema);

/// The comparison matrices of a corpus, indexed by the 0-based later file.
/// A streaming update may hold only the newest matrix; absent blocks are
/// skipped by every tally.
class ComparisonSet {
public:
  ComparisonSet() = default;
  ComparisonSet(FileLayout layout, std::vector<int> levels);

  const FileLayout& layout() const noexcept { return layout_; }
  const std::vector<int>& levels() const noexcept { return levels_; }
  int field_count() const noexcept { return static_cast<int>(levels_.size()); }
  int indicator_length() const noexcept { return block_offsets_.back(); }
  int block_offset(int field) const { return block_offsets_[field]; }

  /// Installs Gamma for later file `file` (0-based, >= 1).
  void set(int file, std::shared_ptr<const ComparisonMatrix> m);
  bool present(int file) const {
    return file > 0 && file < static_cast<int>(blocks_.size()) && blocks_[file] != nullptr;
  }
  bool complete() const;
  const ComparisonMatrix& block(int file) const;

  /// Row of the pair (earlier, later) inside the later record's block.
  std::size_t pair_row(RecordId earlier, RecordId later, int later_file) const {
    return blocks_[later_file]->row_index(earlier, later - layout_.offset(later_file));
  }

  /// Per-level totals over the present blocks.
  std::vector<std::int64_t> level_totals() const;

  /// New set with one more file whose matrix is `m`.
  ComparisonSet extended(std::shared_ptr<const ComparisonMatrix> m) const;

private:
  FileLayout layout_;
  std::vector<int> levels_;
  std::vector<int> block_offsets_{0};
  std::vector<std::shared_ptr<const ComparisonMatrix>> blocks_;
};

/// Builds every matrix of a corpus held in memory.
ComparisonSet build_comparison_set(std::span<const RecordFile> files, const FieldSchema& schema);

} // namespace streamlink
