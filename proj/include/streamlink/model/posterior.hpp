#pragma once

#include "streamlink/compare/comparison_matrix.hpp"
#include "streamlink/linkage/matching.hpp"
#include "streamlink/model/params.hpp"
#include "streamlink/model/scoring.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace streamlink {

/// Matched level tallies over the present blocks of `set` only.
std::vector<std::int64_t> matched_counts(const ComparisonSet& set, const MatchingVectors& z);

/// Matched and unmatched tallies over every block; the set must be complete.
AgreementCounts agreement_counts(const ComparisonSet& set, const MatchingVectors& z);

/// Sum of count * log(prob) with 0 * log 0 = 0; a positive count on a zero
/// probability gives -inf.
double log_multinomial_kernel(std::span<const std::int64_t> counts, std::span<const double> probs);

double log_likelihood(const ComparisonSet& set, const MUParams& mu, const MatchingVectors& z);
/// -inf when `z` breaks link validity; malformed vectors throw.
double log_likelihood(const ComparisonSet& set, const MUParams& mu, const ZVectors& z);

/// Marginal prior of one matching vector with `links` links, `n_new`
/// components and `previous` earlier records.
double log_z_prior(std::int64_t links, std::int64_t previous, std::int64_t n_new,
                   const ZPriorHyper& hyper);
/// Same for an external vector; -inf if two components share a target.
double log_z_prior(std::span<const std::int64_t> z_vector, std::int64_t previous,
                   const ZPriorHyper& hyper);

namespace experimental {

/// The candidate-set-conditioned prior that provably over-links. Kept only as
/// a test subject; no sampler uses it. `z_prev` covers files 1..k-1 and the
/// vector links file k into them. Targets outside the candidate set give -inf.
double log_z_prior_constrained(std::span<const std::int64_t> z_vector, const MatchingVectors& z_prev,
                               const ZPriorHyper& hyper);

} // namespace experimental

/// sum (alpha - 1) log x over every block.
double log_dirichlet_kernel(std::span<const double> x, std::span<const double> alpha);
/// Log normalizing constant log Gamma(sum alpha_f) - sum log Gamma(alpha_fl), summed over fields.
double log_dirichlet_normalizer(std::span<const double> alpha, const IndicatorLayout& layout);
/// Full log density, blockwise Dirichlet.
double log_dirichlet_density(std::span<const double> x, std::span<const double> alpha,
                             const IndicatorLayout& layout);

/// Unnormalized log posterior: Dirichlet kernels of m and u, the marginal
/// prior of every matching vector and the likelihood. Any m or u entry below
/// 1e-300 gives -inf.
double log_posterior(const ComparisonSet& set, const MUParams& mu, const MatchingVectors& z,
                     const Hypers& hypers);

/// Conjugate update: a + matched for m, b + unmatched for u.
DirichletHyper full_conditional_mu(const AgreementCounts& counts, const DirichletHyper& prior);

/// Unnormalized log weights of every value of the unlinked component `r`:
/// entry p < offset(file(r)) for a link into p (-inf when p already has a
/// source), and the last entry for the self link. `cum` is scratch.
void component_log_weights(RecordId r, const MatchingVectors& z, const PairScorer& score,
                           const ZPriorHyper& hyper, std::vector<double>& cum,
                           std::vector<double>& out);

/// Normalized full conditional of Z_j for record `r` (any link state), over
/// the options 1..N_prev then self.
std::vector<double> z_component_full_conditional(RecordId r, const ComparisonSet& set,
                                                 const MUParams& mu, const MatchingVectors& z,
                                                 const ZPriorHyper& hyper);

} // namespace streamlink
