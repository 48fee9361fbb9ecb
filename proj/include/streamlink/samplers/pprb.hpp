#pragma once

#include "streamlink/samplers/chain_state.hpp"
#include "streamlink/samplers/kernels.hpp"
#include "streamlink/samplers/sample_pool.hpp"

#include <memory>
#include <optional>

namespace streamlink {

struct PprbConfig {
  int iterations = 5000;
  int burn_in = 1000;
  /// Locally balanced block size for the newest vector; 0 disables blocking.
  int block_size = 0;
  int lb_moves = 1;

  void validate() const;
};

/// PPRB-within-Gibbs over a pool for files 1..k-1 and the comparisons of a
/// new file k. The old comparisons are never touched: the pool's per-draw
/// matched tallies stand in for them.
class PprbSampler {
public:
  /// Starts at a uniformly chosen pool draw with the new file unlinked.
  PprbSampler(const SamplePool& pool, std::shared_ptr<const ComparisonMatrix> gamma, const Hypers& hypers,
              Rng& rng);

  ChainState& state() { return *state_; }
  const ChainState& state() const { return *state_; }
  /// Pool index supplying the current old links.
  std::size_t current() const noexcept { return current_; }

  /// Log acceptance ratio for swapping the old links to pool draw `proposed`:
  /// the new-data likelihood ratio times the ratio of old-data full
  /// conditionals of (m, u). -inf when the swap breaks link validity.
  double log_acceptance(std::size_t proposed) const;

  void step_mu(Rng& rng);
  bool step_pprb(Rng& rng, ChainStats* stats = nullptr);
  void step_z(Rng& rng, int block_size, int lb_moves, ChainStats* stats = nullptr);

  /// Matched tallies over every comparison of files 1..k.
  std::vector<std::int64_t> all_matched() const;
  std::vector<std::int64_t> all_totals() const;

private:
  double new_data_score(std::span<const RecordId> old_targets) const;
  void move_to(std::size_t s);

  const SamplePool* pool_;
  Hypers hypers_;
  int new_file_ = 0;
  std::vector<double> lnorm_m_, lnorm_u_;
  std::optional<ChainState> state_;
  std::size_t current_ = 0;
  mutable std::vector<char> taken_;
  std::vector<RecordId> merged_;
};

SamplePool pprb_within_gibbs_update(const SamplePool& pool, std::shared_ptr<const ComparisonMatrix> gamma,
                                    const Hypers& hypers, const PprbConfig& config, Rng& rng,
                                    ChainStats* stats = nullptr);

} // namespace streamlink
