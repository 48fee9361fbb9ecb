#pragma once

#include "streamlink/samplers/chain_state.hpp"
#include "streamlink/samplers/kernels.hpp"
#include "streamlink/samplers/sample_pool.hpp"

#include <functional>
#include <memory>

namespace streamlink {

/// How a sweep updates the matching vectors.
enum class ZKernel { component, lb };

const char* to_string(ZKernel kernel);

struct GibbsConfig {
  int iterations = 2500;
  int burn_in = 500;
  ZKernel kernel = ZKernel::component;
  /// Locally balanced block size; 0 disables blocking.
  int block_size = 0;
  /// Locally balanced moves per vector per sweep.
  int lb_moves = 1;

  void validate() const;
};

/// One full sweep: conjugate m, u draw, then every matching vector in order.
void gibbs_iteration(ChainState& state, const Hypers& hypers, ZKernel kernel, int block_size, int lb_moves,
                     Rng& rng, ChainStats* stats = nullptr);

/// Called after every iteration with the 0-based iteration index.
using IterationObserver = std::function<void(int, const ChainState&)>;

/// Runs `config.iterations` sweeps from `state` and records the draws after
/// burn-in. Every recorded state is checked for link validity.
SamplePool gibbs_sample(ChainState& state, const Hypers& hypers, const GibbsConfig& config, Rng& rng,
                        ChainStats* stats = nullptr, const IterationObserver& observer = {});

/// Component-wise sampler from the unlinked state with m, u drawn from the priors.
SamplePool gibbs_componentwise(std::shared_ptr<const ComparisonSet> set, const Hypers& hypers,
                               int iterations, int burn_in, Rng& rng, ChainStats* stats = nullptr);

/// Locally balanced sampler from the unlinked state.
SamplePool gibbs_lb(std::shared_ptr<const ComparisonSet> set, const Hypers& hypers, int iterations,
                    int burn_in, int block_size, Rng& rng, ChainStats* stats = nullptr);

/// Bipartite fit of the first two files, the starting pool of a stream.
SamplePool two_file_fit(std::shared_ptr<const ComparisonSet> set, const Hypers& hypers, int iterations,
                        int burn_in, Rng& rng, ChainStats* stats = nullptr);

} // namespace streamlink
