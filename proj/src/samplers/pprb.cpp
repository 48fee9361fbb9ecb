#include "streamlink/samplers/pprb.hpp"

#include "streamlink/errors.hpp"
#include "streamlink/model/posterior.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace streamlink {

void PprbConfig::validate() const {
  if (iterations <= burn_in) throw ConfigError("iterations must exceed burn_in");
  if (burn_in < 0) throw ConfigError("burn_in must be non-negative");
  if (block_size < 0) throw ConfigError("block_size must be non-negative");
  if (lb_moves < 1) throw ConfigError("lb_moves must be at least 1");
}

PprbSampler::PprbSampler(const SamplePool& pool, std::shared_ptr<const ComparisonMatrix> gamma,
                         const Hypers& hypers, Rng& rng)
    : pool_(&pool), hypers_(hypers) {
  if (pool.empty()) throw ConfigError("PPRB needs a nonempty sample pool");
  if (!gamma) throw StructuralError("missing comparison matrix for the new file");
  const auto& old = pool.layout();
  const auto sizes = gamma->file_sizes();
  if (!std::equal(old.sizes().begin(), old.sizes().end(), sizes.begin(), sizes.end() - 1))
    throw StructuralError("new comparisons were built against different earlier files");
  if (gamma->levels() != pool.indicators().levels())
    throw StructuralError("new comparisons use different field levels than the pool");
  hypers_.dirichlet.validate(pool.indicators());

  auto set = std::make_shared<ComparisonSet>(old.extended(gamma->new_records()), gamma->levels());
  new_file_ = old.file_count();
  set->set(new_file_, std::move(gamma));

  // Old-data full-conditional normalizers, one per pool draw.
  const auto& ind = pool.indicators();
  const auto P = static_cast<std::size_t>(ind.length());
  lnorm_m_.resize(pool.size());
  lnorm_u_.resize(pool.size());
  std::vector<double> a(P), b(P);
  for (std::size_t s = 0; s < pool.size(); ++s) {
    const auto matched = pool.matched(s);
    for (std::size_t i = 0; i < P; ++i) {
      a[i] = hypers_.dirichlet.a[i] + static_cast<double>(matched[i]);
      b[i] = hypers_.dirichlet.b[i] + static_cast<double>(pool.totals()[i] - matched[i]);
    }
    lnorm_m_[s] = log_dirichlet_normalizer(a, ind);
    lnorm_u_[s] = log_dirichlet_normalizer(b, ind);
  }

  current_ = static_cast<std::size_t>(rng.below(pool.size()));
  state_.emplace(std::move(set), pool.z(current_).extended(sizes.back()), pool.mu(current_));
}

double PprbSampler::new_data_score(std::span<const RecordId> old_targets) const {
  const auto& z = state_->z();
  const auto& layout = z.layout();
  const auto& score = state_->scorer();
  double s = 0.0;
  const RecordId first = layout.offset(new_file_);
  for (RecordId r = first; r < first + layout.size(new_file_); ++r) {
    if (!z.is_linked(r)) continue;
    for (RecordId a = z.target(r);; a = old_targets[a]) {
      s += score(a, r);
      if (old_targets[a] == a) break;
    }
  }
  return s;
}

double PprbSampler::log_acceptance(std::size_t proposed) const {
  if (proposed == current_) return 0.0;
  const auto& z = state_->z();
  const auto& layout = z.layout();
  const auto star = pool_->targets(proposed);
  taken_.assign(star.size(), 0);
  for (RecordId r = 0; r < static_cast<RecordId>(star.size()); ++r)
    if (star[r] != r) taken_[star[r]] = 1;
  const RecordId first = layout.offset(new_file_);
  for (RecordId r = first; r < first + layout.size(new_file_); ++r)
    if (z.is_linked(r) && taken_[z.target(r)]) return -std::numeric_limits<double>::infinity();

  double la = new_data_score(star) - new_data_score(pool_->targets(current_));
  la += lnorm_m_[proposed] - lnorm_m_[current_] + lnorm_u_[proposed] - lnorm_u_[current_];
  const auto m_star = pool_->matched(proposed);
  const auto m_cur = pool_->matched(current_);
  const auto& mu = state_->mu();
  for (std::size_t i = 0; i < m_star.size(); ++i) {
    const auto d = static_cast<double>(m_star[i] - m_cur[i]);
    if (d != 0.0) la += d * (std::log(mu.m[i]) - std::log(mu.u[i]));
  }
  return la;
}

void PprbSampler::move_to(std::size_t s) {
  const auto& z = state_->z();
  const auto old = pool_->targets(s);
  merged_.assign(z.targets().begin(), z.targets().end());
  std::copy(old.begin(), old.end(), merged_.begin());
  state_->assign_links(merged_);
  current_ = s;
}

void PprbSampler::step_mu(Rng& rng) {
  state_->draw_mu(hypers_.dirichlet, rng, pool_->matched(current_), pool_->totals());
}

bool PprbSampler::step_pprb(Rng& rng, ChainStats* stats) {
  const auto proposed = static_cast<std::size_t>(rng.below(pool_->size()));
  if (stats) ++stats->pprb_proposed;
  const double la = log_acceptance(proposed);
  if (la == -std::numeric_limits<double>::infinity()) return false;
  if (la >= 0.0 || std::log(rng.uniform()) < la) {
    if (proposed != current_) move_to(proposed);
    if (stats) ++stats->pprb_accepted;
    return true;
  }
  return false;
}

void PprbSampler::step_z(Rng& rng, int block_size, int lb_moves, ChainStats* stats) {
  for (int i = 0; i < lb_moves; ++i) lb_step(*state_, new_file_, hypers_.z, block_size, rng, stats);
}

std::vector<std::int64_t> PprbSampler::all_matched() const {
  std::vector<std::int64_t> out = state_->matched();
  const auto old = pool_->matched(current_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += old[i];
  return out;
}

std::vector<std::int64_t> PprbSampler::all_totals() const {
  std::vector<std::int64_t> out = state_->totals();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += pool_->totals()[i];
  return out;
}

SamplePool pprb_within_gibbs_update(const SamplePool& pool, std::shared_ptr<const ComparisonMatrix> gamma,
                                    const Hypers& hypers, const PprbConfig& config, Rng& rng,
                                    ChainStats* stats) {
  config.validate();
  PprbSampler sampler(pool, std::move(gamma), hypers, rng);
  SamplePool out(sampler.state().z().layout(), pool.indicators(), pool.schema_hash(), StoreKind::pool);
  out.iterations = config.iterations;
  out.burn_in = config.burn_in;
  out.set_totals(sampler.all_totals());

  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  for (int it = 0; it < config.iterations; ++it) {
    if (it == config.burn_in && stats) {
      stats->burn_seconds += std::chrono::duration<double>(clock::now() - start).count();
      start = clock::now();
    }
    sampler.step_mu(rng);
    sampler.step_pprb(rng, stats);
    sampler.step_z(rng, config.block_size, config.lb_moves, stats);
    if (it >= config.burn_in) {
      const auto& state = sampler.state();
      state.check_valid();
      out.append(state.mu(), state.z(), sampler.all_matched());
    }
  }
  if (stats) stats->sample_seconds += std::chrono::duration<double>(clock::now() - start).count();
  return out;
}

} // namespace streamlink
