#pragma once

#include "streamlink/linkage/schema.hpp"

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace streamlink {

/// Text and categorical values are strings; numeric values are finite doubles.
using FieldValue = std::variant<std::string, double>;

struct Record {
  int file = 0; ///< 1-based
  int row = 0;  ///< 1-based within the file
  std::vector<FieldValue> values;
};

/// A duplicate-free file of records conforming to one schema.
struct RecordFile {
  int index = 0; ///< 1-based position in the stream
  std::vector<Record> records;

  int size() const noexcept { return static_cast<int>(records.size()); }
};

/// Parses the raw cell of field `f`; empty cells and non-finite numbers throw
/// IngestionError.
FieldValue parse_value(const FieldSpec& field, const std::string& cell);
std::string format_value(const FieldValue& value);

/// Reads an RFC 4180 CSV whose header names every schema field (extra columns
/// are ignored). Throws IngestionError on schema mismatch or an empty file.
RecordFile read_record_file(const std::filesystem::path& path, const FieldSchema& schema, int index);
void write_record_file(const std::filesystem::path& path, const RecordFile& file,
                       const FieldSchema& schema);

namespace csv {

/// Splits RFC 4180 text into rows of unquoted cells.
std::vector<std::vector<std::string>> parse(const std::string& text);
/// Quotes a cell if it contains a comma, quote or line break.
std::string escape(const std::string& cell);
std::string join(const std::vector<std::string>& cells);

} // namespace csv

} // namespace streamlink
