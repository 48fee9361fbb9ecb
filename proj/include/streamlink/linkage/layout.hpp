#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace streamlink {

/// 0-based global record index: records of file 0 first, then file 1, ...
using RecordId = std::int32_t;

/// Position of a record as (file, row), both 0-based internally.
struct RecordRef {
  int file = 0;
  int row = 0;
  friend bool operator==(const RecordRef&, const RecordRef&) = default;
};

/// File-size vector n_1..n_k with the cumulative offsets used to flatten
/// (file, row) into a single global index. The 1-based external index of a
/// record is `global + 1`.
class FileLayout {
public:
  FileLayout() = default;
  explicit FileLayout(std::vector<int> sizes);

  int file_count() const noexcept { return static_cast<int>(sizes_.size()); }
  int size(int file) const { return sizes_.at(file); }
  std::span<const int> sizes() const noexcept { return sizes_; }

  /// Number of records in files [0, file).
  RecordId offset(int file) const { return offsets_.at(file); }
  RecordId total() const noexcept { return offsets_.back(); }

  RecordId global(RecordRef ref) const;
  RecordRef locate(RecordId id) const;
  int file_of(RecordId id) const { return locate(id).file; }

  /// Layout of the first `files` files.
  FileLayout prefix(int files) const;
  /// Layout with one more file appended.
  FileLayout extended(int new_file_size) const;

  friend bool operator==(const FileLayout& a, const FileLayout& b) {
    return a.sizes_ == b.sizes_;
  }

private:
  std::vector<int> sizes_;
  std::vector<RecordId> offsets_{0};
  std::vector<int> file_by_record_;
};

} // namespace streamlink
