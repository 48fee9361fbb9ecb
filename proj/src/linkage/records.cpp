#include "streamlink/linkage/records.hpp"

#include "streamlink/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace streamlink {

namespace csv {

std::vector<std::vector<std::string>> parse(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool cell_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
      continue;
    }
    switch (c) {
    case '"':
      if (!cell.empty()) throw IngestionError("stray quote inside unquoted CSV cell");
      quoted = true;
      cell_started = true;
      break;
    case ',':
      row.push_back(std::move(cell));
      cell.clear();
      cell_started = true;
      break;
    case '\r':
      break;
    case '\n':
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      cell_started = false;
      break;
    default:
      cell.push_back(c);
      cell_started = true;
    }
  }
  if (quoted) throw IngestionError("unterminated quoted CSV cell");
  if (cell_started || !cell.empty() || !row.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(cells[i]);
  }
  return out;
}

} // namespace csv

FieldValue parse_value(const FieldSpec& field, const std::string& cell) {
  if (cell.empty()) throw IngestionError("missing value in field '" + field.name + "'");
  if (field.kind != FieldKind::numeric) return cell;
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw IngestionError("field '" + field.name + "' value '" + cell + "' is not a finite number");
  return v;
}

std::string format_value(const FieldValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  std::ostringstream os;
  os.precision(17);
  os << std::get<double>(value);
  return os.str();
}

RecordFile read_record_file(const std::filesystem::path& path, const FieldSchema& schema, int index) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open record file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  auto rows = csv::parse(buf.str());
  if (rows.empty()) throw IngestionError(path.string() + ": missing header row");

  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < rows[0].size(); ++c) column.emplace(rows[0][c], c);
  std::vector<std::size_t> pick;
  for (const auto& field : schema.fields()) {
    auto it = column.find(field.name);
    if (it == column.end())
      throw IngestionError(path.string() + ": schema field '" + field.name + "' missing from header");
    pick.push_back(it->second);
  }

  RecordFile file;
  file.index = index;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue; // blank line
    if (row.size() != rows[0].size())
      throw IngestionError(path.string() + ": row " + std::to_string(r) + " has " +
                           std::to_string(row.size()) + " cells, header has " +
                           std::to_string(rows[0].size()));
    Record rec;
    rec.file = index;
    rec.row = static_cast<int>(file.records.size()) + 1;
    for (int f = 0; f < schema.field_count(); ++f) {
      try {
        rec.values.push_back(parse_value(schema.field(f), row[pick[f]]));
      } catch (const IngestionError& e) {
        throw IngestionError(path.string() + ": row " + std::to_string(r) + ": " + e.what());
      }
    }
    file.records.push_back(std::move(rec));
  }
  if (file.records.empty()) throw IngestionError(path.string() + ": file has no records");
  return file;
}

void write_record_file(const std::filesystem::path& path, const RecordFile& file,
                       const FieldSchema& schema) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StructuralError("cannot write " + path.string());
  std::vector<std::string> header;
  for (const auto& f : schema.fields()) header.push_back(f.name);
  out << csv::join(header) << '\n';
  for (const auto& rec : file.records) {
    std::vector<std::string> cells;
    for (const auto& v : rec.values) cells.push_back(format_value(v));
    out << csv::join(cells) << '\n';
  }
}

} // namespace streamlink
