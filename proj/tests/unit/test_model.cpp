#include "fixtures.hpp"
#include "oracle.hpp"

#include "streamlink/errors.hpp"
#include "streamlink/model/posterior.hpp"
#include "streamlink/model/scoring.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

using namespace streamlink;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// One binary field, files (1, 1), the single pair agreeing.
std::shared_ptr<ComparisonSet> single_pair(std::uint8_t level) {
  auto set = std::make_shared<ComparisonSet>(FileLayout({1, 1}), std::vector<int>{1});
  set->set(1, std::make_shared<ComparisonMatrix>(std::vector<int>{1, 1}, std::vector<int>{1}, "x",
                                                 std::vector<std::uint8_t>{level}));
  return set;
}

// Every single-vector matching of n_new records into `previous` earlier
// records, in external form.
void matchings(int previous, int n_new, int j, std::vector<std::int64_t>& cur, std::vector<char>& used,
               std::vector<std::vector<std::int64_t>>& out) {
  if (j == n_new) {
    out.push_back(cur);
    return;
  }
  cur[j] = previous + j + 1;
  matchings(previous, n_new, j + 1, cur, used, out);
  for (int p = 0; p < previous; ++p) {
    if (used[p]) continue;
    used[p] = 1;
    cur[j] = p + 1;
    matchings(previous, n_new, j + 1, cur, used, out);
    used[p] = 0;
  }
}

std::vector<std::vector<std::int64_t>> all_matchings(int previous, int n_new) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> cur(static_cast<std::size_t>(n_new));
  std::vector<char> used(static_cast<std::size_t>(previous), 0);
  matchings(previous, n_new, 0, cur, used, out);
  return out;
}

MUParams random_mu(const IndicatorLayout& layout, std::mt19937_64& gen) {
  MUParams mu = MUParams::uniform(layout);
  std::gamma_distribution<double> g(2.0, 1.0);
  for (auto* v : {&mu.m, &mu.u})
    for (int f = 0; f < layout.field_count(); ++f) {
      double s = 0.0;
      for (int l = 0; l < layout.block_size(f); ++l) s += ((*v)[layout.offset(f) + l] = g(gen));
      for (int l = 0; l < layout.block_size(f); ++l) (*v)[layout.offset(f) + l] /= s;
    }
  return mu;
}

} // namespace

TEST_CASE("informative_m_prior") {
  SUBCASE("string field, p = 1/2, three levels, s = 12") {
    const auto a = informative_m_prior(IndicatorLayout({3}), std::vector<double>{0.5}, 12.0);
    CHECK(a == std::vector<double>{6, 2, 2, 2});
  }
  SUBCASE("categorical, p = 1/8, s = 120") {
    const auto a = informative_m_prior(IndicatorLayout({1}), std::vector<double>{0.125}, 120.0);
    CHECK(a[0] == doctest::Approx(105));
    CHECK(a[1] == doctest::Approx(15));
  }
  SUBCASE("blocks sum to s") {
    IndicatorLayout layout({3, 1, 5});
    const auto a = informative_m_prior(layout, std::vector<double>{0.3, 0.2, 0.7}, 40.0);
    for (int f = 0; f < 3; ++f) {
      double s = 0;
      for (int l = 0; l < layout.block_size(f); ++l) s += a[layout.offset(f) + l];
      CHECK(s == doctest::Approx(40.0));
    }
  }
  SUBCASE("bad inputs") {
    CHECK_THROWS_AS(informative_m_prior(IndicatorLayout({1}), std::vector<double>{1.0}, 12), ConfigError);
    CHECK_THROWS_AS(informative_m_prior(IndicatorLayout({1}), std::vector<double>{0.5}, 0), ConfigError);
  }
  SUBCASE("numeric fields take the text probability") {
    FieldSchema schema({{"n", FieldKind::text, {0.25, 0.5, 1}},
                        {"c", FieldKind::categorical, {}},
                        {"x", FieldKind::numeric, {1, 2}}});
    CHECK(error_probabilities(schema, 0.5, 0.125) == std::vector<double>{0.5, 0.125, 0.5});
  }
}

TEST_CASE("agreement_counts") {
  SUBCASE("no links") {
    const auto c = fixtures::corpus_222();
    const auto set = c.comparisons();
    const auto counts = agreement_counts(*set, MatchingVectors(set->layout()));
    CHECK(counts.matched == std::vector<std::int64_t>(8, 0));
    CHECK(counts.unmatched == set->level_totals());
    // two pairs from file 2, four from file 3
    CHECK(counts.unmatched[0] + counts.unmatched[1] + counts.unmatched[2] + counts.unmatched[3] == 12);
  }
  SUBCASE("single linked pair") {
    const auto set = single_pair(0);
    const auto z = MatchingVectors::from_external({{1}}, set->layout());
    const auto counts = agreement_counts(*set, z);
    CHECK(counts.matched == std::vector<std::int64_t>{1, 0});
    CHECK(counts.unmatched == std::vector<std::int64_t>{0, 0});
  }
  SUBCASE("brute force over the match set") {
    const auto c = fixtures::corpus_222();
    const auto set = c.comparisons();
    for (const auto& t : oracle::valid_configurations(c.sizes())) {
      const auto z = fixtures::to_matching(c.sizes(), t);
      std::vector<std::int64_t> expect(8, 0);
      for (auto [a, b] : match_set(z))
        for (int f = 0; f < 3; ++f) ++expect[set->block_offset(f) + c.code(a, b, f)];
      const auto counts = agreement_counts(*set, z);
      CHECK(counts.matched == expect);
      for (std::size_t i = 0; i < 8; ++i) CHECK(counts.matched[i] + counts.unmatched[i] == set->level_totals()[i]);
      const auto post = full_conditional_mu(counts, c.hypers().dirichlet);
      for (std::size_t i = 0; i < 8; ++i) {
        CHECK(post.a[i] - c.hypers().dirichlet.a[i] == doctest::Approx(double(counts.matched[i])));
        CHECK(post.b[i] - c.hypers().dirichlet.b[i] == doctest::Approx(double(counts.unmatched[i])));
      }
    }
  }
  SUBCASE("missing blocks are a structural error") {
    auto set = std::make_shared<ComparisonSet>(FileLayout({1, 1, 1}), std::vector<int>{1});
    CHECK_THROWS_AS(agreement_counts(*set, MatchingVectors(set->layout())), StructuralError);
  }
}

TEST_CASE("log_likelihood") {
  IndicatorLayout layout({1});
  MUParams mu{layout, {0.9, 0.1}, {0.2, 0.8}};
  const auto set = single_pair(0);
  CHECK(log_likelihood(*set, mu, ZVectors{{1}}) == doctest::Approx(std::log(0.9)));
  CHECK(log_likelihood(*set, mu, ZVectors{{2}}) == doctest::Approx(std::log(0.2)));

  auto set3 = fixtures::corpus_222().comparisons();
  const auto mu3 = MUParams::uniform(IndicatorLayout(fixtures::kLevels));
  CHECK(log_likelihood(*set3, mu3, ZVectors{{1, 4}, {1, 6}}) == kNegInf);
  CHECK(std::isfinite(log_likelihood(*set3, mu3, ZVectors{{1, 4}, {3, 6}})));

  MUParams zero{layout, {1.0, 0.0}, {0.0, 1.0}};
  CHECK(log_likelihood(*set, zero, ZVectors{{2}}) == kNegInf);
}

TEST_CASE("log_z_prior") {
  const ZPriorHyper flat;
  SUBCASE("one record each side: linked and unlinked both 1/2") {
    CHECK(std::exp(log_z_prior(std::vector<std::int64_t>{1}, 1, flat)) == doctest::Approx(0.5));
    CHECK(std::exp(log_z_prior(std::vector<std::int64_t>{2}, 1, flat)) == doctest::Approx(0.5));
  }
  SUBCASE("zero links leave only the Beta ratio") {
    const ZPriorHyper h{2.0, 3.0};
    const double expect = std::lgamma(2.0) + std::lgamma(3.0 + 4) - std::lgamma(5.0 + 4) -
                          (std::lgamma(2.0) + std::lgamma(3.0) - std::lgamma(5.0));
    CHECK(log_z_prior(0, 7, 4, h) == doctest::Approx(expect));
  }
  SUBCASE("seven matchings at (2, 2) sum to one") {
    const auto all = all_matchings(2, 2);
    CHECK(all.size() == 7);
    double s = 0;
    for (const auto& v : all) s += std::exp(log_z_prior(v, 2, flat));
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("normalizes for every size up to (3, 3)") {
    // With fewer earlier records than new ones the Beta-binomial puts mass on
    // link counts that cannot occur, so only N >= n sums to one.
    for (const ZPriorHyper h : {ZPriorHyper{1, 1}, ZPriorHyper{0.5, 2.5}, ZPriorHyper{3, 0.7}})
      for (int N = 1; N <= 3; ++N)
        for (int n = 1; n <= N; ++n) {
          double s = 0;
          for (const auto& v : all_matchings(N, n)) s += std::exp(log_z_prior(v, N, h));
          CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
  }
  SUBCASE("shared target gives -inf") {
    CHECK(log_z_prior(std::vector<std::int64_t>{1, 1}, 2, flat) == kNegInf);
  }
}

TEST_CASE("constrained prior") {
  const ZPriorHyper flat;
  SUBCASE("two files: same as the marginal prior") {
    const MatchingVectors prev(FileLayout({3}));
    for (const auto& v : all_matchings(3, 2))
      CHECK(experimental::log_z_prior_constrained(v, prev, flat) == doctest::Approx(log_z_prior(v, 3, flat)));
  }
  SUBCASE("candidate set of five, two links: R = 5/3") {
    // files (3, 3) with x21 -> x11; the extra link x22 -> x13 shrinks the
    // candidate set from 5 to 4.
    FileLayout layout({3, 3});
    const auto without = MatchingVectors::from_external({{1, 5, 6}}, layout);
    const auto with = MatchingVectors::from_external({{1, 3, 6}}, layout);
    REQUIRE(candidate_set(without).size() == 5);
    REQUIRE(candidate_set(with).size() == 4);
    const std::vector<std::int64_t> v{2, 4, 9};
    const double log_r = experimental::log_z_prior_constrained(v, with, flat) -
                         experimental::log_z_prior_constrained(v, without, flat);
    CHECK(std::exp(log_r) == doctest::Approx(5.0 / 3.0));
  }
  SUBCASE("target outside the candidate set") {
    const auto prev = MatchingVectors::from_external({{1}}, FileLayout({1, 1}));
    CHECK(experimental::log_z_prior_constrained(std::vector<std::int64_t>{1}, prev, flat) == kNegInf);
  }
}

TEST_CASE("full_conditional_mu") {
  DirichletHyper h{{1, 1}, {1, 1}};
  const auto same = full_conditional_mu({{0, 0}, {0, 0}}, h);
  CHECK(same.a == h.a);
  CHECK(same.b == h.b);
  const auto one = full_conditional_mu({{1, 0}, {0, 0}}, h);
  CHECK(one.a == std::vector<double>{2, 1});
  CHECK(one.b == std::vector<double>{1, 1});
  CHECK_THROWS_AS(full_conditional_mu({{1}, {0, 0}}, h), StructuralError);
}

TEST_CASE("log_posterior") {
  SUBCASE("no links, flat hypers, m = u") {
    const auto set = fixtures::corpus_222().comparisons();
    IndicatorLayout layout(fixtures::kLevels);
    Hypers h{DirichletHyper::flat(layout), {}};
    const auto mu = MUParams::uniform(layout);
    const MatchingVectors z(set->layout());
    double expect = log_z_prior(0, 2, 2, h.z) + log_z_prior(0, 4, 2, h.z);
    const auto totals = set->level_totals();
    for (std::size_t i = 0; i < totals.size(); ++i) expect += double(totals[i]) * std::log(mu.u[i]);
    CHECK(log_posterior(*set, mu, z, h) == doctest::Approx(expect));
  }
  SUBCASE("m, u integrate to the enumeration marginal") {
    // p(Z, data) = p(m, u, Z, data) / p(m, u | Z, data) for any m, u.
    const auto c = fixtures::corpus_222();
    const auto set = c.comparisons();
    const auto h = c.hypers();
    const auto truth = oracle::enumerate(c.oracle_case());
    IndicatorLayout layout(fixtures::kLevels);
    std::mt19937_64 gen(17);
    for (const auto& [targets, prob] : truth.states) {
      const auto z = fixtures::to_matching(c.sizes(), targets);
      const auto mu = random_mu(layout, gen);
      const auto post = full_conditional_mu(agreement_counts(*set, z), h.dirichlet);
      const double joint = log_posterior(*set, mu, z, h) + log_dirichlet_normalizer(h.dirichlet.a, layout) +
                           log_dirichlet_normalizer(h.dirichlet.b, layout);
      const double marginal = joint - log_dirichlet_density(mu.m, post.a, layout) -
                              log_dirichlet_density(mu.u, post.b, layout);
      CHECK(marginal == doctest::Approx(std::log(prob) + truth.log_evidence).epsilon(1e-10));
    }
  }
  SUBCASE("tiny probabilities give -inf") {
    const auto set = single_pair(0);
    IndicatorLayout layout({1});
    MUParams mu{layout, {1.0, 1e-320}, {0.5, 0.5}};
    CHECK(log_posterior(*set, mu, MatchingVectors(set->layout()), {DirichletHyper::flat(layout), {}}) == kNegInf);
  }
}

TEST_CASE("z_component_full_conditional") {
  const auto c = fixtures::corpus_22();
  const auto set = c.comparisons();
  const auto h = c.hypers();
  IndicatorLayout layout(fixtures::kLevels);
  std::mt19937_64 gen(23);

  SUBCASE("matches renormalized log_posterior on (2, 2)") {
    for (int rep = 0; rep < 20; ++rep) {
      const auto mu = random_mu(layout, gen);
      for (const auto& t : oracle::valid_configurations(c.sizes())) {
        const auto z = fixtures::to_matching(c.sizes(), t);
        for (RecordId r = 2; r < 4; ++r) {
          const auto p = z_component_full_conditional(r, *set, mu, z, h.z);
          REQUIRE(p.size() == 3);
          // brute force: set component r to each option with everything else fixed
          std::vector<double> lw(3, kNegInf);
          for (int opt = 0; opt < 3; ++opt) {
            auto tt = t;
            tt[r] = opt < 2 ? opt : -1;
            if (opt < 2 && ((r == 2 && tt[3] == opt) || (r == 3 && tt[2] == opt))) continue;
            lw[opt] = log_posterior(*set, mu, fixtures::to_matching(c.sizes(), tt), h);
          }
          double mx = std::max({lw[0], lw[1], lw[2]}), s = 0;
          for (double& x : lw) s += (x = std::exp(x - mx));
          for (int opt = 0; opt < 3; ++opt) CHECK(p[opt] == doctest::Approx(lw[opt] / s).epsilon(1e-9));
        }
      }
    }
  }
  SUBCASE("m = u leaves the prior alone") {
    const auto mu = MUParams::uniform(layout);
    const MatchingVectors z(set->layout());
    const auto p = z_component_full_conditional(2, *set, mu, z, h.z);
    const double linked = std::exp(log_z_prior(1, 2, 2, h.z)), self = std::exp(log_z_prior(0, 2, 2, h.z));
    CHECK(p[0] == doctest::Approx(linked / (2 * linked + self)));
    CHECK(p[1] == doctest::Approx(p[0]));
    CHECK(p[2] == doctest::Approx(self / (2 * linked + self)));
  }
  SUBCASE("a target linked by another record has probability zero") {
    const auto mu = random_mu(layout, gen);
    const auto z = MatchingVectors::from_external({{3, 1}}, set->layout());
    const auto p = z_component_full_conditional(2, *set, mu, z, h.z);
    CHECK(p[0] == 0.0);
    CHECK(p[1] > 0.0);
  }
}

TEST_CASE("link_gain equals the likelihood change") {
  const auto c = fixtures::corpus_222();
  const auto set = c.comparisons();
  IndicatorLayout layout(fixtures::kLevels);
  std::mt19937_64 gen(29);
  const auto mu = random_mu(layout, gen);
  const PairScorer score(*set, mu);
  for (const auto& t : oracle::valid_configurations(c.sizes())) {
    const auto z = fixtures::to_matching(c.sizes(), t);
    const double base = log_likelihood(*set, mu, z);
    for (RecordId r = 2; r < 6; ++r) {
      if (z.is_linked(r)) continue;
      for (RecordId p = 0; p < set->layout().offset(set->layout().file_of(r)); ++p) {
        if (!z.is_free(p)) continue;
        auto z2 = z;
        z2.link(r, p);
        CHECK(log_likelihood(*set, mu, z2) - base == doctest::Approx(link_gain(z, score, r, p)).epsilon(1e-9));
      }
    }
  }
}
