#include "streamlink/compare/comparators.hpp"

#include "streamlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace streamlink {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      cp = c;
    } else if ((c >> 5) == 0x6) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c >> 4) == 0xE) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c >> 3) == 0x1E) {
      extra = 3;
      cp = c & 0x07;
    } else {
      out.push_back(U'�');
      ++i;
      continue;
    }
    bool ok = true;
    for (int e = 1; e <= extra; ++e) {
      if (i + e >= s.size()) {
        ok = false;
        break;
      }
      const auto cc = static_cast<unsigned char>(s[i + e]);
      if ((cc >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double normalized_levenshtein(std::string_view a, std::string_view b) {
  const auto ua = decode_utf8(a);
  const auto ub = decode_utf8(b);
  const std::size_t longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(levenshtein(ua, ub)) / static_cast<double>(longest);
}

namespace {

int bin_of(double distance, std::span<const double> edges) {
  for (std::size_t l = 0; l < edges.size(); ++l)
    if (distance <= edges[l]) return static_cast<int>(l) + 1;
  return static_cast<int>(edges.size());
}

} // namespace

int compare_text(std::string_view a, std::string_view b, std::span<const double> cutpoints) {
  if (a == b) return 0;
  return bin_of(normalized_levenshtein(a, b), cutpoints);
}

int compare_categorical(std::string_view a, std::string_view b) { return a == b ? 0 : 1; }

int compare_numeric(double a, double b, std::span<const double> bin_edges) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw IngestionError("numeric comparison of a non-finite value");
  if (a == b) return 0;
  return bin_of(std::fabs(a - b), bin_edges);
}

int compare_field(const FieldSpec& field, const FieldValue& a, const FieldValue& b) {
  switch (field.kind) {
  case FieldKind::text:
  case FieldKind::categorical: {
    const auto* sa = std::get_if<std::string>(&a);
    const auto* sb = std::get_if<std::string>(&b);
    if (!sa || !sb) throw IngestionError("field '" + field.name + "' expects string values");
    return field.kind == FieldKind::text ? compare_text(*sa, *sb, field.thresholds)
                                         : compare_categorical(*sa, *sb);
  }
  case FieldKind::numeric: {
    const auto* da = std::get_if<double>(&a);
    const auto* db = std::get_if<double>(&b);
    if (!da || !db) throw IngestionError("field '" + field.name + "' expects numeric values");
    return compare_numeric(*da, *db, field.thresholds);
  }
  }
  return 0;
}

} // namespace streamlink
