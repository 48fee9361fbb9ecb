#pragma once

#include "streamlink/compare/comparison_matrix.hpp"
#include "streamlink/linkage/matching.hpp"
#include "streamlink/model/params.hpp"

#include <vector>

namespace streamlink {

/// Per-pair log likelihood ratio log m(gamma) - log u(gamma) under the current
/// m, u. When the level-combination space is small the ratio is tabulated by
/// pattern, so scoring a pair is one lookup.
class PairScorer {
public:
  PairScorer() = default;
  /// `set` must outlive the scorer.
  PairScorer(const ComparisonSet& set, const MUParams& mu);

  void refresh(const MUParams& mu);

  /// Score of the pair (earlier, later); the later record's block must be present.
  double operator()(RecordId earlier, RecordId later) const {
    const int file = set_->layout().file_of(later);
    const auto& block = set_->block(file);
    return row(block, block.row_index(earlier, later - set_->layout().offset(file)));
  }

  double row(const ComparisonMatrix& block, std::size_t index) const {
    if (tabulated_) return table_[block.pattern(index)];
    double s = 0.0;
    const auto codes = block.row(index);
    for (std::size_t f = 0; f < codes.size(); ++f) s += llr_[offsets_[f] + codes[f]];
    return s;
  }

  /// log m - log u as a P-vector.
  const std::vector<double>& llr() const noexcept { return llr_; }
  bool tabulated() const noexcept { return tabulated_; }

private:
  const ComparisonSet* set_ = nullptr;
  std::vector<int> offsets_;
  std::vector<double> llr_;
  std::vector<double> table_;
  bool tabulated_ = false;
};

/// Sum of pair scores over A(p) x D(r): the change in the log likelihood
/// caused by linking the unlinked record r to the free record p.
double link_gain(const MatchingVectors& z, const PairScorer& score, RecordId r, RecordId p);

} // namespace streamlink
