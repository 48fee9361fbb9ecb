#pragma once

#include "streamlink/compare/comparison_matrix.hpp"
#include "streamlink/linkage/matching.hpp"
#include "streamlink/model/params.hpp"
#include "streamlink/model/scoring.hpp"
#include "streamlink/samplers/rng.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace streamlink {

/// One chain's (m, u, Z) with matched level counts over the present
/// comparison blocks kept current under every link change.
class ChainState {
public:
  ChainState(std::shared_ptr<const ComparisonSet> set, MatchingVectors z, MUParams mu);

  const ComparisonSet& set() const noexcept { return *set_; }
  const std::shared_ptr<const ComparisonSet>& set_ptr() const noexcept { return set_; }
  const MatchingVectors& z() const noexcept { return z_; }
  const MUParams& mu() const noexcept { return mu_; }
  const PairScorer& scorer() const noexcept { return scorer_; }

  /// Matched tallies over the present blocks.
  const std::vector<std::int64_t>& matched() const noexcept { return matched_; }
  /// Level totals over the present blocks (constant).
  const std::vector<std::int64_t>& totals() const noexcept { return totals_; }

  void set_mu(MUParams mu);
  /// Conjugate draw of m and u. `extra_matched` and `extra_totals` add
  /// tallies from data whose blocks are not held (the old files in PPRB).
  void draw_mu(const DirichletHyper& prior, Rng& rng, std::span<const std::int64_t> extra_matched = {},
               std::span<const std::int64_t> extra_totals = {});

  void link(RecordId r, RecordId p);
  void unlink(RecordId r);
  /// Replaces every link with `targets` (internal form) and recounts.
  void assign_links(std::span<const RecordId> targets);
  void recount();

  /// Unnormalized log posterior from the cached counts, with optional
  /// tallies for absent blocks as in `draw_mu`.
  double log_posterior(const Hypers& hypers, std::span<const std::int64_t> extra_matched = {},
                       std::span<const std::int64_t> extra_totals = {}) const;

  /// Throws std::logic_error if any record receives two links; every
  /// recorded state passes through here.
  void check_valid() const;

private:
  void tally(RecordId r, RecordId p, int sign);

  std::shared_ptr<const ComparisonSet> set_;
  MatchingVectors z_;
  MUParams mu_;
  PairScorer scorer_;
  std::vector<std::int64_t> matched_;
  std::vector<std::int64_t> totals_;
  mutable std::vector<int> hits_;
  std::vector<double> alpha_;
};

/// Number of states checked by ChainState::check_valid in this process.
std::uint64_t validity_checks();

/// All records unlinked, m and u drawn from their priors.
ChainState initial_state(std::shared_ptr<const ComparisonSet> set, const Hypers& hypers, Rng& rng);

} // namespace streamlink
