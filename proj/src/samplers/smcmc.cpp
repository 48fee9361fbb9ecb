#include "streamlink/samplers/smcmc.hpp"

#include "streamlink/errors.hpp"
#include "streamlink/samplers/gibbs.hpp"

#include <atomic>
#include <ctime>
#include <exception>
#include <mutex>
#include <thread>

namespace streamlink {

namespace {

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

} // namespace

const char* to_string(SmcmcKernel kernel) {
  switch (kernel) {
  case SmcmcKernel::component: return "component";
  case SmcmcKernel::lb: return "lb";
  case SmcmcKernel::mixed: return "mixed";
  }
  return "?";
}

SmcmcKernel parse_smcmc_kernel(const std::string& name) {
  if (name == "component" || name == "comp") return SmcmcKernel::component;
  if (name == "lb") return SmcmcKernel::lb;
  if (name == "mixed") return SmcmcKernel::mixed;
  throw ConfigError("unknown SMCMC kernel: " + name);
}

int default_jump_iterations(SmcmcKernel kernel) { return kernel == SmcmcKernel::lb ? 50 : 5; }

int default_transition_iterations(SmcmcKernel kernel) {
  return kernel == SmcmcKernel::component ? 50 : 200;
}

void SmcmcConfig::validate() const {
  if (jumps() < 0 || transitions() < 0) throw ConfigError("iteration counts must be non-negative");
  if (block_size < 0) throw ConfigError("block_size must be non-negative");
  if (lb_moves < 1) throw ConfigError("lb_moves must be at least 1");
  if (ensemble_size < 0) throw ConfigError("ensemble_size must be non-negative");
  if (workers < 1) throw ConfigError("workers must be at least 1");
}

void smcmc_member(ChainState& state, const Hypers& hypers, const SmcmcConfig& config, Rng& rng,
                  ChainStats* stats) {
  const int newest = state.z().layout().file_count() - 1;
  for (int it = 0; it < config.jumps(); ++it) {
    if (config.kernel == SmcmcKernel::lb) {
      for (int i = 0; i < config.lb_moves; ++i) lb_step(state, newest, hypers.z, config.block_size, rng, stats);
    } else {
      component_sweep(state, newest, hypers.z, rng);
    }
  }
  const ZKernel transition = config.kernel == SmcmcKernel::component ? ZKernel::component : ZKernel::lb;
  for (int it = 0; it < config.transitions(); ++it)
    gibbs_iteration(state, hypers, transition, config.block_size, config.lb_moves, rng, stats);
  state.check_valid();
}

SmcmcResult smcmc_update(const SamplePool& input, std::shared_ptr<const ComparisonSet> set,
                         const Hypers& hypers, const SmcmcConfig& config) {
  config.validate();
  if (input.empty()) throw ConfigError("SMCMC needs a nonempty ensemble");
  if (!set || !set->complete()) throw StructuralError("SMCMC needs every comparison matrix");
  const auto& layout = set->layout();
  const auto& old = input.layout();
  if (layout.file_count() != old.file_count() + 1 ||
      !std::equal(old.sizes().begin(), old.sizes().end(), layout.sizes().begin()))
    throw StructuralError("comparisons do not extend the ensemble's files");
  if (set->levels() != input.indicators().levels())
    throw StructuralError("comparisons use different field levels than the ensemble");

  const std::size_t in_size = input.size();
  const std::size_t S = config.ensemble_size > 0 ? static_cast<std::size_t>(config.ensemble_size) : in_size;
  const int new_size = layout.size(layout.file_count() - 1);
  const auto stage = static_cast<std::uint64_t>(layout.file_count());

  struct Member {
    MUParams mu;
    std::vector<RecordId> targets;
    std::vector<std::int64_t> matched;
    ChainStats stats;
    double seconds = 0.0;
  };
  std::vector<Member> members(S);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= S) return;
      try {
        const double t0 = thread_cpu_seconds();
        const std::size_t src = i * in_size / S;
        Rng rng = Rng::stream(config.seed, i, stage);
        ChainState state(set, input.z(src).extended(new_size), input.mu(src));
        auto& out = members[i];
        smcmc_member(state, hypers, config, rng, &out.stats);
        out.mu = state.mu();
        out.targets.assign(state.z().targets().begin(), state.z().targets().end());
        out.matched = state.matched();
        out.seconds = thread_cpu_seconds() - t0;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(S);
        return;
      }
    }
  };

  const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(config.workers), S));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SmcmcResult result;
  result.ensemble = SamplePool(layout, input.indicators(), input.schema_hash(), StoreKind::ensemble);
  result.ensemble.iterations = config.transitions();
  result.ensemble.burn_in = 0;
  result.ensemble.set_totals(ChainState(set, MatchingVectors(layout), input.mu(0)).totals());
  result.member_seconds.reserve(S);
  for (auto& m : members) {
    result.ensemble.append(m.mu.m, m.mu.u, m.targets, m.matched);
    result.member_seconds.push_back(m.seconds);
    result.stats += m.stats;
  }
  result.jump_only = config.transitions() == 0;
  return result;
}

} // namespace streamlink
