#pragma once

#include <string>
#include <vector>

namespace streamlink {

enum class FieldKind { text, categorical, numeric };

FieldKind parse_field_kind(const std::string& name);
const char* to_string(FieldKind kind);

/// One compared field. `thresholds` are the text cutpoints on normalized
/// Levenshtein distance, or the numeric bin edges on absolute difference;
/// categorical fields have none and a single disagreement level.
struct FieldSpec {
  std::string name;
  FieldKind kind = FieldKind::categorical;
  std::vector<double> thresholds;

  /// L_f: disagreement levels beyond exact equality.
  int levels() const;
};

/// Ordered field list shared by every file in a corpus.
class FieldSchema {
public:
  FieldSchema() = default;
  explicit FieldSchema(std::vector<FieldSpec> fields);

  /// Ten fields: two names, occupation, age band and six 12-way categoricals.
  static FieldSchema default_simulation();

  const std::vector<FieldSpec>& fields() const noexcept { return fields_; }
  const FieldSpec& field(int f) const { return fields_.at(f); }
  int field_count() const noexcept { return static_cast<int>(fields_.size()); }
  /// P = sum over fields of (L_f + 1).
  int indicator_length() const noexcept { return offsets_.back(); }
  /// Start of field f's block in a P-length vector.
  int block_offset(int f) const { return offsets_.at(f); }
  int block_size(int f) const { return offsets_.at(f + 1) - offsets_.at(f); }
  std::vector<int> level_counts() const;

  /// Stable hex digest of the canonical schema description.
  std::string hash() const;
  std::string canonical() const;

  friend bool operator==(const FieldSchema& a, const FieldSchema& b) {
    return a.canonical() == b.canonical();
  }

private:
  std::vector<FieldSpec> fields_;
  std::vector<int> offsets_{0};
};

} // namespace streamlink
