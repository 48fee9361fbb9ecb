#include "streamlink/linkage/layout.hpp"

#include "streamlink/errors.hpp"

#include <string>

namespace streamlink {

FileLayout::FileLayout(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  offsets_.reserve(sizes_.size() + 1);
  for (std::size_t f = 0; f < sizes_.size(); ++f) {
    if (sizes_[f] < 1)
      throw StructuralError("file " + std::to_string(f + 1) + " has no records");
    offsets_.push_back(offsets_.back() + sizes_[f]);
    file_by_record_.insert(file_by_record_.end(), sizes_[f], static_cast<int>(f));
  }
}

RecordId FileLayout::global(RecordRef ref) const {
  if (ref.file < 0 || ref.file >= file_count() || ref.row < 0 || ref.row >= sizes_[ref.file])
    throw StructuralError("record reference out of range");
  return offsets_[ref.file] + ref.row;
}

RecordRef FileLayout::locate(RecordId id) const {
  if (id < 0 || id >= total())
    throw StructuralError("global record index " + std::to_string(id) + " out of range");
  const int file = file_by_record_[id];
  return {file, static_cast<int>(id - offsets_[file])};
}

FileLayout FileLayout::prefix(int files) const {
  if (files < 0 || files > file_count()) throw StructuralError("layout prefix out of range");
  return FileLayout(std::vector<int>(sizes_.begin(), sizes_.begin() + files));
}

FileLayout FileLayout::extended(int new_file_size) const {
  auto sizes = sizes_;
  sizes.push_back(new_file_size);
  return FileLayout(std::move(sizes));
}

} // namespace streamlink
