#include "streamlink/linkage/schema.hpp"

#include "streamlink/errors.hpp"
#include "streamlink/util/digest.hpp"

#include <cmath>
#include <sstream>

namespace streamlink {

FieldKind parse_field_kind(const std::string& name) {
  if (name == "text") return FieldKind::text;
  if (name == "categorical") return FieldKind::categorical;
  if (name == "numeric") return FieldKind::numeric;
  throw ConfigError("unknown field kind '" + name + "'");
}

const char* to_string(FieldKind kind) {
  switch (kind) {
  case FieldKind::text: return "text";
  case FieldKind::categorical: return "categorical";
  case FieldKind::numeric: return "numeric";
  }
  return "?";
}

int FieldSpec::levels() const {
  return kind == FieldKind::categorical ? 1 : static_cast<int>(thresholds.size());
}

FieldSchema::FieldSchema(std::vector<FieldSpec> fields) : fields_(std::move(fields)) {
  if (fields_.empty()) throw ConfigError("schema needs at least one field");
  for (auto& field : fields_) {
    if (field.name.empty()) throw ConfigError("schema field without a name");
    if (field.kind == FieldKind::categorical) {
      field.thresholds.clear();
    } else {
      if (field.thresholds.empty())
        throw ConfigError("field '" + field.name + "' needs at least one threshold");
      double prev = 0.0;
      for (double t : field.thresholds) {
        if (!(t > prev))
          throw ConfigError("thresholds of field '" + field.name +
                            "' must be positive and strictly increasing");
        prev = t;
      }
      if (field.kind == FieldKind::text && field.thresholds.back() != 1.0)
        throw ConfigError("text cutpoints of field '" + field.name + "' must end at 1");
    }
    offsets_.push_back(offsets_.back() + field.levels() + 1);
  }
}

FieldSchema FieldSchema::default_simulation() {
  const std::vector<double> cut{0.25, 0.5, 1.0};
  std::vector<FieldSpec> f{
      {"given_name", FieldKind::text, cut},
      {"surname", FieldKind::text, cut},
      {"occupation", FieldKind::categorical, {}},
      {"age_band", FieldKind::categorical, {}},
  };
  for (int q = 1; q <= 6; ++q) f.push_back({"q" + std::to_string(q), FieldKind::categorical, {}});
  return FieldSchema(std::move(f));
}

std::vector<int> FieldSchema::level_counts() const {
  std::vector<int> out;
  for (const auto& f : fields_) out.push_back(f.levels());
  return out;
}

std::string FieldSchema::canonical() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& f : fields_) {
    os << f.name << ':' << to_string(f.kind);
    for (double t : f.thresholds) os << ',' << t;
    os << ';';
  }
  return os.str();
}

std::string FieldSchema::hash() const { return sha256_hex(canonical()); }

} // namespace streamlink
