#include "streamlink/model/posterior.hpp"

#include "streamlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace streamlink {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTiny = 1e-300;

double lbeta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

void add_row(std::vector<std::int64_t>& counts, const ComparisonMatrix& block, std::size_t index,
             const ComparisonSet& set) {
  const auto codes = block.row(index);
  for (std::size_t f = 0; f < codes.size(); ++f) ++counts[set.block_offset(static_cast<int>(f)) + codes[f]];
}

} // namespace

std::vector<std::int64_t> matched_counts(const ComparisonSet& set, const MatchingVectors& z) {
  if (!(set.layout() == z.layout())) throw StructuralError("comparison set and Z cover different files");
  std::vector<std::int64_t> out(static_cast<std::size_t>(set.indicator_length()), 0);
  const auto& layout = z.layout();
  for (int t = 1; t < layout.file_count(); ++t) {
    if (!set.present(t)) continue;
    const auto& block = set.block(t);
    for (RecordId b = layout.offset(t); b < layout.offset(t) + layout.size(t); ++b) {
      if (!z.is_linked(b)) continue;
      for (RecordId a = z.target(b);; a = z.target(a)) {
        add_row(out, block, block.row_index(a, b - layout.offset(t)), set);
        if (!z.is_linked(a)) break;
      }
    }
  }
  return out;
}

AgreementCounts agreement_counts(const ComparisonSet& set, const MatchingVectors& z) {
  if (!set.complete()) throw StructuralError("agreement counts need every comparison matrix");
  AgreementCounts out;
  out.matched = matched_counts(set, z);
  out.unmatched = set.level_totals();
  for (std::size_t i = 0; i < out.unmatched.size(); ++i) out.unmatched[i] -= out.matched[i];
  return out;
}

double log_multinomial_kernel(std::span<const std::int64_t> counts, std::span<const double> probs) {
  double s = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (!(probs[i] > 0.0)) return kNegInf;
    s += static_cast<double>(counts[i]) * std::log(probs[i]);
  }
  return s;
}

double log_likelihood(const ComparisonSet& set, const MUParams& mu, const MatchingVectors& z) {
  const auto counts = agreement_counts(set, z);
  return log_multinomial_kernel(counts.matched, mu.m) + log_multinomial_kernel(counts.unmatched, mu.u);
}

double log_likelihood(const ComparisonSet& set, const MUParams& mu, const ZVectors& z) {
  if (!validate_links(z, set.layout())) return kNegInf;
  return log_likelihood(set, mu, MatchingVectors::from_external(z, set.layout()));
}

double log_z_prior(std::int64_t links, std::int64_t previous, std::int64_t n_new,
                   const ZPriorHyper& hyper) {
  if (links < 0 || links > n_new) throw StructuralError("link count out of range");
  if (links > previous) return kNegInf;
  const auto N = static_cast<double>(previous);
  const auto n = static_cast<double>(links);
  return std::lgamma(N - n + 1.0) - std::lgamma(N + 1.0) +
         lbeta(n + hyper.alpha_pi, static_cast<double>(n_new) - n + hyper.beta_pi) -
         lbeta(hyper.alpha_pi, hyper.beta_pi);
}

double log_z_prior(std::span<const std::int64_t> z_vector, std::int64_t previous,
                   const ZPriorHyper& hyper) {
  std::unordered_set<std::int64_t> seen;
  std::int64_t links = 0;
  for (std::size_t j = 0; j < z_vector.size(); ++j) {
    const auto v = z_vector[j];
    if (v == previous + static_cast<std::int64_t>(j) + 1) continue;
    if (v < 1 || v > previous) throw StructuralError("matching vector component out of range");
    if (!seen.insert(v).second) return kNegInf;
    ++links;
  }
  return log_z_prior(links, previous, static_cast<std::int64_t>(z_vector.size()), hyper);
}

namespace experimental {

double log_z_prior_constrained(std::span<const std::int64_t> z_vector, const MatchingVectors& z_prev,
                               const ZPriorHyper& hyper) {
  const std::int64_t N = z_prev.layout().total();
  std::unordered_set<std::int64_t> candidates;
  for (RecordId p : candidate_set(z_prev)) candidates.insert(p + 1);
  std::unordered_set<std::int64_t> seen;
  std::int64_t links = 0;
  for (std::size_t j = 0; j < z_vector.size(); ++j) {
    const auto v = z_vector[j];
    if (v == N + static_cast<std::int64_t>(j) + 1) continue;
    if (v < 1 || v > N) throw StructuralError("matching vector component out of range");
    if (!candidates.count(v) || !seen.insert(v).second) return kNegInf;
    ++links;
  }
  return log_z_prior(links, static_cast<std::int64_t>(candidates.size()),
                     static_cast<std::int64_t>(z_vector.size()), hyper);
}

} // namespace experimental

double log_dirichlet_kernel(std::span<const double> x, std::span<const double> alpha) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < kTiny) return kNegInf;
    s += (alpha[i] - 1.0) * std::log(x[i]);
  }
  return s;
}

double log_dirichlet_normalizer(std::span<const double> alpha, const IndicatorLayout& layout) {
  double s = 0.0;
  for (int f = 0; f < layout.field_count(); ++f) {
    double total = 0.0;
    for (int l = 0; l < layout.block_size(f); ++l) {
      total += alpha[layout.offset(f) + l];
      s -= std::lgamma(alpha[layout.offset(f) + l]);
    }
    s += std::lgamma(total);
  }
  return s;
}

double log_dirichlet_density(std::span<const double> x, std::span<const double> alpha,
                             const IndicatorLayout& layout) {
  return log_dirichlet_normalizer(alpha, layout) + log_dirichlet_kernel(x, alpha);
}

double log_posterior(const ComparisonSet& set, const MUParams& mu, const MatchingVectors& z,
                     const Hypers& hypers) {
  double lp = log_dirichlet_kernel(mu.m, hypers.dirichlet.a) + log_dirichlet_kernel(mu.u, hypers.dirichlet.b);
  if (lp == kNegInf) return kNegInf;
  const auto& layout = z.layout();
  for (int t = 1; t < layout.file_count(); ++t)
    lp += log_z_prior(z.link_count(t), layout.offset(t), layout.size(t), hypers.z);
  return lp + log_likelihood(set, mu, z);
}

DirichletHyper full_conditional_mu(const AgreementCounts& counts, const DirichletHyper& prior) {
  if (counts.matched.size() != prior.a.size() || counts.unmatched.size() != prior.b.size())
    throw StructuralError("count and hyperparameter shapes differ");
  DirichletHyper out = prior;
  for (std::size_t i = 0; i < out.a.size(); ++i) {
    out.a[i] += static_cast<double>(counts.matched[i]);
    out.b[i] += static_cast<double>(counts.unmatched[i]);
  }
  return out;
}

void component_log_weights(RecordId r, const MatchingVectors& z, const PairScorer& score,
                           const ZPriorHyper& hyper, std::vector<double>& cum,
                           std::vector<double>& out) {
  const auto& layout = z.layout();
  const int t = layout.file_of(r);
  const RecordId previous = layout.offset(t);
  const int n0 = z.link_count(t);
  const double self = log_z_prior(n0, previous, layout.size(t), hyper);
  const double linked = log_z_prior(n0 + 1, previous, layout.size(t), hyper);

  cum.resize(static_cast<std::size_t>(previous));
  out.resize(static_cast<std::size_t>(previous) + 1);
  for (RecordId p = 0; p < previous; ++p) {
    double s = 0.0;
    for (RecordId b = r;; b = z.source(b)) {
      s += score(p, b);
      if (z.is_free(b)) break;
    }
    if (z.is_linked(p)) s += cum[z.target(p)];
    cum[p] = s;
    out[p] = z.is_free(p) ? linked + s : kNegInf;
  }
  out[previous] = self;
}

std::vector<double> z_component_full_conditional(RecordId r, const ComparisonSet& set,
                                                 const MUParams& mu, const MatchingVectors& z,
                                                 const ZPriorHyper& hyper) {
  if (z.layout().file_of(r) < 1) throw StructuralError("records of the first file have no matching vector");
  MatchingVectors rest = z;
  if (rest.is_linked(r)) rest.unlink(r);
  const PairScorer score(set, mu);
  std::vector<double> cum, w;
  component_log_weights(r, rest, score, hyper, cum, w);
  const double top = *std::max_element(w.begin(), w.end());
  double total = 0.0;
  for (double& x : w) total += (x = std::exp(x - top));
  for (double& x : w) x /= total;
  return w;
}

} // namespace streamlink
