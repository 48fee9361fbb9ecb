#pragma once

#include "streamlink/samplers/chain_state.hpp"
#include "streamlink/samplers/kernels.hpp"
#include "streamlink/samplers/sample_pool.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace streamlink {

/// component: component-wise jumping and transition. lb: locally balanced
/// for both. mixed: component-wise jumping, locally balanced transition.
enum class SmcmcKernel { component, lb, mixed };

const char* to_string(SmcmcKernel kernel);
SmcmcKernel parse_smcmc_kernel(const std::string& name);
int default_jump_iterations(SmcmcKernel kernel);
int default_transition_iterations(SmcmcKernel kernel);

struct SmcmcConfig {
  SmcmcKernel kernel = SmcmcKernel::component;
  /// Negative values take the kernel defaults.
  int jump_iterations = -1;
  int transition_iterations = -1;
  int block_size = 0;
  int lb_moves = 1;
  /// Members of the new ensemble; 0 keeps the input size. Members start from
  /// input draws spread evenly over the input.
  int ensemble_size = 0;
  int workers = 1;
  std::uint64_t seed = 1;

  int jumps() const { return jump_iterations >= 0 ? jump_iterations : default_jump_iterations(kernel); }
  int transitions() const {
    return transition_iterations >= 0 ? transition_iterations : default_transition_iterations(kernel);
  }
  void validate() const;
};

struct SmcmcResult {
  SamplePool ensemble;
  /// Thread CPU seconds spent on each member.
  std::vector<double> member_seconds;
  ChainStats stats;
  /// Set when no transition iterations ran; such ensembles are biased.
  bool jump_only = false;
};

/// One member's update: jumping kernel on the newest vector with m, u fixed,
/// then full transition sweeps. Deterministic given `rng`.
void smcmc_member(ChainState& state, const Hypers& hypers, const SmcmcConfig& config, Rng& rng,
                  ChainStats* stats = nullptr);

/// Updates an ensemble (or pool) over files 1..k-1 to files 1..k using every
/// comparison matrix in `set`. Members run on `config.workers` threads with
/// one random stream per (seed, member, stage), so the output does not depend
/// on the worker count.
SmcmcResult smcmc_update(const SamplePool& input, std::shared_ptr<const ComparisonSet> set,
                         const Hypers& hypers, const SmcmcConfig& config);

} // namespace streamlink
