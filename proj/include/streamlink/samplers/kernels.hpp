#pragma once

#include "streamlink/model/params.hpp"
#include "streamlink/samplers/chain_state.hpp"
#include "streamlink/samplers/rng.hpp"

#include <cstdint>

namespace streamlink {

/// Acceptance bookkeeping shared by the samplers.
struct ChainStats {
  std::uint64_t lb_proposed = 0;
  std::uint64_t lb_accepted = 0;
  std::uint64_t lb_null = 0;
  std::uint64_t pprb_proposed = 0;
  std::uint64_t pprb_accepted = 0;
  double burn_seconds = 0.0;
  double sample_seconds = 0.0;

  ChainStats& operator+=(const ChainStats& o);
  double lb_accept_rate() const { return lb_proposed ? double(lb_accepted) / double(lb_proposed) : 0.0; }
  double pprb_accept_rate() const {
    return pprb_proposed ? double(pprb_accepted) / double(pprb_proposed) : 0.0;
  }
};

/// Draws every component of matching vector `file` (0-based file index,
/// >= 1) in turn from its full conditional.
void component_sweep(ChainState& state, int file, const ZPriorHyper& hyper, Rng& rng);

/// One local move on matching vector `file`.
struct MoveProposal {
  enum class Kind { none, add, remove, target_swap, source_swap, double_swap };
  Kind kind = Kind::none;
  /// add: j1 -> p1. remove: j1 -> p1 dropped. target_swap: j1 moves from p1
  /// to p2. source_swap: the link j1 -> p1 becomes j2 -> p1. double_swap:
  /// j1 -> p1 and j2 -> p2 become j1 -> p2 and j2 -> p1.
  RecordId j1 = -1, j2 = -1, p1 = -1, p2 = -1;
  /// log pi(y) - log pi(x).
  double log_delta = 0.0;
  /// log Z_g(x) and log Z_g(y) over the same block.
  double log_zx = 0.0;
  double log_zy = 0.0;

  double log_accept() const { return kind == Kind::none ? 0.0 : log_zx - log_zy; }
};

/// Barker weight g(t) = t / (1 + t) in log form, taking log t.
double log_barker(double log_t);

/// Draws a locally balanced move for matching vector `file` from a random
/// block of `block_size` new-file rows and as many earlier records (0 means
/// no blocking). Returns the null move when the neighborhood is empty.
MoveProposal lb_propose(const ChainState& state, int file, const ZPriorHyper& hyper, int block_size,
                        Rng& rng);

void apply_move(ChainState& state, const MoveProposal& move);
void revert_move(ChainState& state, const MoveProposal& move);

/// lb_propose followed by the Metropolis-Hastings accept step. Returns true
/// when the move was accepted.
bool lb_step(ChainState& state, int file, const ZPriorHyper& hyper, int block_size, Rng& rng,
             ChainStats* stats = nullptr);

/// Block size used by default: 75 records per 200 in the newest file.
int scaled_block_size(int new_file_size);

} // namespace streamlink
