#include "streamlink/samplers/chain_state.hpp"

#include "streamlink/errors.hpp"
#include "streamlink/model/posterior.hpp"

#include <atomic>
#include <stdexcept>

namespace streamlink {

namespace {

std::atomic<std::uint64_t> g_validity_checks{0};

} // namespace

std::uint64_t validity_checks() { return g_validity_checks.load(); }

ChainState::ChainState(std::shared_ptr<const ComparisonSet> set, MatchingVectors z, MUParams mu)
    : set_(std::move(set)), z_(std::move(z)), mu_(std::move(mu)) {
  if (!set_) throw StructuralError("chain state without comparisons");
  if (!(set_->layout() == z_.layout())) throw StructuralError("Z and comparisons cover different files");
  if (!(mu_.layout == IndicatorLayout(set_->levels()))) throw StructuralError("m/u layout does not match comparisons");
  scorer_ = PairScorer(*set_, mu_);
  totals_ = set_->level_totals();
  recount();
}

void ChainState::set_mu(MUParams mu) {
  mu_ = std::move(mu);
  scorer_.refresh(mu_);
}

void ChainState::draw_mu(const DirichletHyper& prior, Rng& rng, std::span<const std::int64_t> extra_matched,
                         std::span<const std::int64_t> extra_totals) {
  const std::size_t P = matched_.size();
  alpha_.resize(P);
  for (std::size_t i = 0; i < P; ++i)
    alpha_[i] = prior.a[i] + static_cast<double>(matched_[i] + (extra_matched.empty() ? 0 : extra_matched[i]));
  rng.dirichlet(alpha_, mu_.layout, mu_.m);
  for (std::size_t i = 0; i < P; ++i) {
    const auto m = matched_[i] + (extra_matched.empty() ? 0 : extra_matched[i]);
    const auto t = totals_[i] + (extra_totals.empty() ? 0 : extra_totals[i]);
    alpha_[i] = prior.b[i] + static_cast<double>(t - m);
  }
  rng.dirichlet(alpha_, mu_.layout, mu_.u);
  scorer_.refresh(mu_);
}

void ChainState::tally(RecordId r, RecordId p, int sign) {
  const auto& layout = z_.layout();
  for (RecordId b = r;; b = z_.source(b)) {
    const int file = layout.file_of(b);
    const auto& block = set_->block(file);
    const int row = b - layout.offset(file);
    for (RecordId a = p;; a = z_.target(a)) {
      const auto codes = block.row(block.row_index(a, row));
      for (std::size_t f = 0; f < codes.size(); ++f)
        matched_[set_->block_offset(static_cast<int>(f)) + codes[f]] += sign;
      if (!z_.is_linked(a)) break;
    }
    if (z_.is_free(b)) break;
  }
}

void ChainState::link(RecordId r, RecordId p) {
  z_.link(r, p);
  // r is linked now, so walking r's descendants and p's ancestors covers
  // exactly the newly coreferent pairs.
  tally(r, p, +1);
}

void ChainState::unlink(RecordId r) {
  if (!z_.is_linked(r)) return;
  tally(r, z_.target(r), -1);
  z_.unlink(r);
}

void ChainState::assign_links(std::span<const RecordId> targets) {
  z_ = MatchingVectors::from_targets(z_.layout(), targets);
  recount();
}

void ChainState::recount() { matched_ = matched_counts(*set_, z_); }

double ChainState::log_posterior(const Hypers& hypers, std::span<const std::int64_t> extra_matched,
                                 std::span<const std::int64_t> extra_totals) const {
  double lp = log_dirichlet_kernel(mu_.m, hypers.dirichlet.a) + log_dirichlet_kernel(mu_.u, hypers.dirichlet.b);
  const auto& layout = z_.layout();
  for (int t = 1; t < layout.file_count(); ++t)
    lp += log_z_prior(z_.link_count(t), layout.offset(t), layout.size(t), hypers.z);
  std::vector<std::int64_t> m = matched_, u = totals_;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!extra_matched.empty()) m[i] += extra_matched[i];
    if (!extra_totals.empty()) u[i] += extra_totals[i];
    u[i] -= m[i];
  }
  return lp + log_multinomial_kernel(m, mu_.m) + log_multinomial_kernel(u, mu_.u);
}

void ChainState::check_valid() const {
  const auto& layout = z_.layout();
  hits_.assign(static_cast<std::size_t>(layout.total()), 0);
  const auto targets = z_.targets();
  for (RecordId r = 0; r < layout.total(); ++r) {
    const RecordId p = targets[r];
    if (p == r) continue;
    if (p < 0 || p >= layout.offset(layout.file_of(r)) || ++hits_[p] > 1)
      throw std::logic_error("sampler produced a matching state that violates link validity");
  }
  g_validity_checks.fetch_add(1, std::memory_order_relaxed);
}

ChainState initial_state(std::shared_ptr<const ComparisonSet> set, const Hypers& hypers, Rng& rng) {
  const IndicatorLayout layout(set->levels());
  MUParams mu = MUParams::uniform(layout);
  rng.dirichlet(hypers.dirichlet.a, layout, mu.m);
  rng.dirichlet(hypers.dirichlet.b, layout, mu.u);
  MatchingVectors z(set->layout());
  return ChainState(std::move(set), std::move(z), std::move(mu));
}

} // namespace streamlink
