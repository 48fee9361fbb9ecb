#include "streamlink/model/scoring.hpp"

#include <cmath>

namespace streamlink {

PairScorer::PairScorer(const ComparisonSet& set, const MUParams& mu) : set_(&set) {
  offsets_.assign(static_cast<std::size_t>(set.field_count()), 0);
  for (int f = 0; f < set.field_count(); ++f) offsets_[f] = set.block_offset(f);

  std::uint64_t space = 1;
  for (int l : set.levels()) space *= static_cast<std::uint64_t>(l + 1);
  std::uint64_t rows = 0;
  bool patterns = true;
  for (int t = 1; t < set.layout().file_count(); ++t) {
    if (!set.present(t)) continue;
    rows += set.block(t).rows();
    patterns = patterns && set.block(t).has_patterns();
  }
  tabulated_ = patterns && rows > 0 && space <= kMaxPatternSpace && space <= rows;
  refresh(mu);
}

void PairScorer::refresh(const MUParams& mu) {
  llr_.resize(mu.m.size());
  for (std::size_t i = 0; i < llr_.size(); ++i) llr_[i] = std::log(mu.m[i]) - std::log(mu.u[i]);
  if (!tabulated_) return;
  table_.assign(1, 0.0);
  std::vector<double> next;
  const auto& levels = set_->levels();
  for (std::size_t f = 0; f < levels.size(); ++f) {
    const std::size_t radix = static_cast<std::size_t>(levels[f]) + 1;
    next.resize(table_.size() * radix);
    for (std::size_t key = 0; key < table_.size(); ++key)
      for (std::size_t c = 0; c < radix; ++c) next[key * radix + c] = table_[key] + llr_[offsets_[f] + c];
    table_.swap(next);
  }
}

double link_gain(const MatchingVectors& z, const PairScorer& score, RecordId r, RecordId p) {
  double g = 0.0;
  for (RecordId a = p;; a = z.target(a)) {
    for (RecordId b = r;; b = z.source(b)) {
      g += score(a, b);
      if (z.is_free(b)) break;
    }
    if (!z.is_linked(a)) break;
  }
  return g;
}

} // namespace streamlink
