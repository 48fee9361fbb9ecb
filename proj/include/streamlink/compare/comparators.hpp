#pragma once

#include "streamlink/linkage/records.hpp"

#include <span>
#include <string_view>

namespace streamlink {

/// Decodes UTF-8 into Unicode scalar values; malformed bytes map to U+FFFD.
std::u32string decode_utf8(std::string_view s);

/// Edit distance with unit insert, delete and substitute costs.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// lev(a, b) / max(|a|, |b|) over scalar values; 0 when both are empty.
double normalized_levenshtein(std::string_view a, std::string_view b);

/// Level 0 iff a == b; otherwise the 1-based bin (c_{l-1}, c_l] of the
/// normalized distance. Cutpoints are strictly increasing and end at 1.
int compare_text(std::string_view a, std::string_view b, std::span<const double> cutpoints);

/// 0 if equal, 1 otherwise.
int compare_categorical(std::string_view a, std::string_view b);

/// Level 0 iff a == b; otherwise the bin of |a - b| among (0, e_1], (e_1, e_2], ...
/// Differences past the last finite edge land in the last level.
int compare_numeric(double a, double b, std::span<const double> bin_edges);

/// Dispatches on the field kind.
int compare_field(const FieldSpec& field, const FieldValue& a, const FieldValue& b);

} // namespace streamlink
