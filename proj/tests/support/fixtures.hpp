#pragma once

// Tiny hand-made corpora shared by the unit and acceptance tests. Records are
// integer feature triples (name, sex, region); the name field compares by
// capped absolute difference so the level codes are easy to reason about.

#include "oracle.hpp"

#include "streamlink/compare/comparison_matrix.hpp"
#include "streamlink/model/params.hpp"

#include "streamlink/linkage/matching.hpp"

#include <array>
#include <memory>
#include <random>
#include <vector>

namespace fixtures {

using Features = std::array<int, 3>;

struct TinyCorpus {
  std::vector<std::vector<Features>> files;

  std::vector<int> sizes() const;
  std::vector<Features> flat() const;
  int code(int earlier, int later, int f) const;
  /// Comparison set over the first `files` files (all by default).
  std::shared_ptr<streamlink::ComparisonSet> comparisons(int files = -1) const;
  std::shared_ptr<const streamlink::ComparisonMatrix> matrix(int later_file) const;
  /// a = (6,2,2,2) on the name and (10.5,1.5) on the categoricals; flat b.
  streamlink::Hypers hypers() const;
  oracle::Case oracle_case(int files = -1) const;
};

inline const std::vector<int> kLevels{3, 1, 1};

/// Files (2, 2) with one near match and one partial match.
TinyCorpus corpus_22();
/// Files (2, 2, 2).
TinyCorpus corpus_222();

/// Random valid target array (-1 = unlinked): each later record tries one
/// uniformly drawn earlier record with probability `link_prob`.
std::vector<int> random_targets(const std::vector<int>& sizes, std::mt19937_64& gen, double link_prob = 0.6);
streamlink::ZVectors to_external(const std::vector<int>& sizes, const std::vector<int>& targets);
streamlink::MatchingVectors to_matching(const std::vector<int>& sizes, const std::vector<int>& targets);

} // namespace fixtures
