#include "streamlink/samplers/gibbs.hpp"

#include "streamlink/errors.hpp"

#include <chrono>

namespace streamlink {

const char* to_string(ZKernel kernel) { return kernel == ZKernel::component ? "component" : "lb"; }

void GibbsConfig::validate() const {
  if (iterations <= burn_in) throw ConfigError("iterations must exceed burn_in");
  if (burn_in < 0) throw ConfigError("burn_in must be non-negative");
  if (block_size < 0) throw ConfigError("block_size must be non-negative");
  if (lb_moves < 1) throw ConfigError("lb_moves must be at least 1");
}

void gibbs_iteration(ChainState& state, const Hypers& hypers, ZKernel kernel, int block_size, int lb_moves,
                     Rng& rng, ChainStats* stats) {
  state.draw_mu(hypers.dirichlet, rng);
  const int k = state.z().layout().file_count();
  for (int t = 1; t < k; ++t) {
    if (kernel == ZKernel::component) {
      component_sweep(state, t, hypers.z, rng);
    } else {
      for (int i = 0; i < lb_moves; ++i) lb_step(state, t, hypers.z, block_size, rng, stats);
    }
  }
}

SamplePool gibbs_sample(ChainState& state, const Hypers& hypers, const GibbsConfig& config, Rng& rng,
                        ChainStats* stats, const IterationObserver& observer) {
  config.validate();
  const auto& set = state.set();
  if (!set.complete()) throw StructuralError("Gibbs sampling needs every comparison matrix");
  SamplePool pool(set.layout(), state.mu().layout, "", StoreKind::pool);
  pool.iterations = config.iterations;
  pool.burn_in = config.burn_in;
  pool.set_totals(state.totals());

  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  for (int it = 0; it < config.iterations; ++it) {
    if (it == config.burn_in && stats) {
      stats->burn_seconds += std::chrono::duration<double>(clock::now() - start).count();
      start = clock::now();
    }
    gibbs_iteration(state, hypers, config.kernel, config.block_size, config.lb_moves, rng, stats);
    if (it >= config.burn_in) {
      state.check_valid();
      pool.append(state.mu(), state.z(), state.matched());
    }
    if (observer) observer(it, state);
  }
  if (stats) stats->sample_seconds += std::chrono::duration<double>(clock::now() - start).count();
  return pool;
}

SamplePool gibbs_componentwise(std::shared_ptr<const ComparisonSet> set, const Hypers& hypers,
                               int iterations, int burn_in, Rng& rng, ChainStats* stats) {
  ChainState state = initial_state(std::move(set), hypers, rng);
  GibbsConfig config;
  config.iterations = iterations;
  config.burn_in = burn_in;
  return gibbs_sample(state, hypers, config, rng, stats);
}

SamplePool gibbs_lb(std::shared_ptr<const ComparisonSet> set, const Hypers& hypers, int iterations,
                    int burn_in, int block_size, Rng& rng, ChainStats* stats) {
  ChainState state = initial_state(std::move(set), hypers, rng);
  GibbsConfig config;
  config.iterations = iterations;
  config.burn_in = burn_in;
  config.kernel = ZKernel::lb;
  config.block_size = block_size;
  return gibbs_sample(state, hypers, config, rng, stats);
}

SamplePool two_file_fit(std::shared_ptr<const ComparisonSet> set, const Hypers& hypers, int iterations,
                        int burn_in, Rng& rng, ChainStats* stats) {
  if (set->layout().file_count() != 2) throw ConfigError("a two-file fit needs exactly two files");
  return gibbs_componentwise(std::move(set), hypers, iterations, burn_in, rng, stats);
}

} // namespace streamlink
