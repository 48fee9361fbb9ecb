#include "fixtures.hpp"
#include "oracle.hpp"

#include "streamlink/errors.hpp"
#include "streamlink/evaluation/metrics.hpp"
#include "streamlink/model/posterior.hpp"
#include "streamlink/samplers/chain_state.hpp"
#include "streamlink/samplers/gibbs.hpp"
#include "streamlink/samplers/kernels.hpp"
#include "streamlink/samplers/pprb.hpp"
#include "streamlink/samplers/smcmc.hpp"
#include "streamlink/synthgen/generator.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

using namespace streamlink;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// 3 files of 12 records from the generator: big enough for every move kind.
struct SmallCorpus {
  Corpus corpus;
  std::shared_ptr<ComparisonSet> set;
  Hypers hypers;
};

SmallCorpus small_corpus(int files = 3, int records = 12, double overlap = 0.5, std::uint64_t seed = 3,
                         int max_errors = 2) {
  GenConfig g;
  g.max_errors = max_errors;
  g.files = files;
  g.records = records;
  g.overlap = overlap;
  g.seed = seed;
  SmallCorpus out;
  out.corpus = generate_corpus(g);
  out.set = std::make_shared<ComparisonSet>(build_comparison_set(out.corpus.files, out.corpus.schema));
  IndicatorLayout layout(out.corpus.schema.level_counts());
  out.hypers.dirichlet = DirichletHyper::flat(layout);
  out.hypers.dirichlet.a = informative_m_prior(layout, error_probabilities(out.corpus.schema, 0.5, 0.125), 12);
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_CASE("rng") {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.bits() == b.bits());
  Rng s1 = Rng::stream(5, 1, 3), s2 = Rng::stream(5, 1, 3), s3 = Rng::stream(5, 2, 3), s4 = Rng::stream(5, 1, 4);
  const auto x = s1.bits();
  CHECK(x == s2.bits());
  CHECK(x != s3.bits());
  CHECK(x != s4.bits());
  for (int i = 0; i < 1000; ++i) CHECK(a.below(7) < 7);
  const std::vector<double> w{kNegInf, 0.0, kNegInf};
  for (int i = 0; i < 100; ++i) CHECK(a.categorical_log(w) == 1);
  // gamma mean and variance for a small shape
  double m = 0, v = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const double g = a.gamma(0.5);
    m += g;
    v += g * g;
  }
  m /= n;
  v = v / n - m * m;
  CHECK(m == doctest::Approx(0.5).epsilon(0.03));
  CHECK(v == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("barker weight at equal density is one half") {
  CHECK(std::exp(log_barker(0.0)) == doctest::Approx(0.5));
  // locally balanced: g(t) = t g(1/t)
  for (double lt : {-3.0, -0.5, 0.7, 4.0})
    CHECK(log_barker(lt) == doctest::Approx(lt + log_barker(-lt)));
}

TEST_CASE("apply then revert restores the state bit for bit") {
  auto c = small_corpus();
  Rng rng(1);
  int kinds[6] = {};
  auto exercise = [&](ChainState& state) {
    for (int i = 0; i < 3000; ++i) {
      const int file = 1 + static_cast<int>(rng.below(2));
      const auto mv = lb_propose(state, file, c.hypers.z, 0, rng);
      ++kinds[static_cast<int>(mv.kind)];
      const auto z0 = state.z();
      const auto m0 = state.matched();
      const double lp0 = state.log_posterior(c.hypers);
      apply_move(state, mv);
      // the cached delta matches the move
      CHECK(state.log_posterior(c.hypers) - lp0 == doctest::Approx(mv.log_delta).epsilon(1e-9));
      revert_move(state, mv);
      CHECK(state.z() == z0);
      CHECK(state.matched() == m0);
      CHECK(same_bits(state.log_posterior(c.hypers), lp0));
      if (rng.uniform() < 0.5) apply_move(state, mv);
    }
  };
  auto fitted = initial_state(c.set, c.hypers, rng);
  for (int i = 0; i < 30; ++i) gibbs_iteration(fitted, c.hypers, ZKernel::component, 0, 1, rng);
  exercise(fitted);
  // With m = u every swap is neutral, so double swaps get real weight.
  const IndicatorLayout layout(c.set->levels());
  ChainState neutral(c.set, MatchingVectors(c.set->layout()), MUParams::uniform(layout));
  exercise(neutral);
  for (int k = 1; k <= 5; ++k) {
    INFO("move kind " << k);
    CHECK(kinds[k] > 0);
  }
}

TEST_CASE("cached log posterior tracks a full recompute over 1000 accepted moves") {
  auto c = small_corpus();
  Rng rng(2);
  auto state = initial_state(c.set, c.hypers, rng);
  const IndicatorLayout layout(c.set->levels());
  const auto flat = DirichletHyper::flat(layout);
  int accepted = 0, attempts = 0;
  while (accepted < 1000 && attempts < 200000) {
    ++attempts;
    const int file = 1 + static_cast<int>(rng.below(2));
    if (lb_step(state, file, c.hypers.z, 6, rng)) {
      ++accepted;
      // Redraw mu from the flat prior: a weak signal keeps the chain moving
      // instead of settling on one sharp mode.
      if (accepted % 100 == 0) {
        MUParams mu = MUParams::uniform(layout);
        rng.dirichlet(flat.a, layout, mu.m);
        rng.dirichlet(flat.b, layout, mu.u);
        state.set_mu(std::move(mu));
      }
    }
  }
  INFO("attempts " << attempts);
  REQUIRE(accepted == 1000);
  const double full = log_posterior(*c.set, state.mu(), state.z(), c.hypers);
  CHECK(state.log_posterior(c.hypers) == doctest::Approx(full).epsilon(1e-6));
  CHECK(state.matched() == agreement_counts(*c.set, state.z()).matched);
}

TEST_CASE("locally balanced normalizers") {
  auto c = small_corpus();
  Rng rng(4);
  auto state = initial_state(c.set, c.hypers, rng);
  for (int i = 0; i < 20; ++i) gibbs_iteration(state, c.hypers, ZKernel::component, 0, 1, rng);
  for (int i = 0; i < 200; ++i) {
    const int file = 1 + static_cast<int>(rng.below(2));
    const auto mv = lb_propose(state, file, c.hypers.z, 0, rng);
    REQUIRE(mv.kind != MoveProposal::Kind::none);
    // a block covering every record is the unblocked neighborhood
    Rng other(99);
    CHECK(lb_propose(state, file, c.hypers.z, 1000, other).log_zx == doctest::Approx(mv.log_zx).epsilon(1e-12));
    // Z_g(y) is the forward normalizer seen from y
    apply_move(state, mv);
    Rng again(5);
    CHECK(lb_propose(state, file, c.hypers.z, 0, again).log_zx == doctest::Approx(mv.log_zy).epsilon(1e-9));
    if (rng.uniform() < 0.5) revert_move(state, mv);
  }
}

TEST_CASE("gibbs configuration and degenerate priors") {
  auto c = small_corpus();
  Rng rng(6);
  GibbsConfig bad;
  bad.iterations = 10;
  bad.burn_in = 10;
  auto state = initial_state(c.set, c.hypers, rng);
  CHECK_THROWS_AS(gibbs_sample(state, c.hypers, bad, rng), ConfigError);

  SUBCASE("link-free prior keeps the chain near zero links") {
    Hypers h = c.hypers;
    h.dirichlet = DirichletHyper::flat(IndicatorLayout(c.corpus.schema.level_counts()));
    h.z = {1e-6, 1e6};
    const auto pool = gibbs_componentwise(c.set, h, 300, 100, rng);
    double links = 0;
    for (std::size_t s = 0; s < pool.size(); ++s) links += pool.z(s).total_links();
    CHECK(links / double(pool.size()) < 0.05);
  }
  SUBCASE("locally balanced sampler accepts moves") {
    ChainStats stats;
    const auto pool = gibbs_lb(c.set, c.hypers, 300, 100, 4, rng, &stats);
    CHECK(pool.size() == 200);
    CHECK(stats.lb_accept_rate() > 0.0);
  }
}

TEST_CASE("two-file fit of identical single records favours the link") {
  fixtures::TinyCorpus tc{{{{3, 1, 1}}, {{3, 1, 1}}}};
  const auto truth = oracle::enumerate(tc.oracle_case());
  const double p = truth.co_cluster.at({0, 1});
  CHECK(p > 0.5);
  Rng rng(8);
  const auto pool = two_file_fit(tc.comparisons(), tc.hypers(), 22000, 2000, rng);
  std::vector<double> ind;
  for (std::size_t s = 0; s < pool.size(); ++s) ind.push_back(pool.z(s).is_linked(1) ? 1.0 : 0.0);
  const auto est = oracle::batch_estimate(ind);
  CHECK(std::fabs(est.mean - p) < 3 * est.se);
}

TEST_CASE("pprb acceptance") {
  // heavily corrupted duplicates and a flat m prior keep the old posterior
  // spread over several linkages
  auto c = small_corpus(3, 12, 0.5, 5, 8);
  auto old = std::make_shared<ComparisonSet>(FileLayout({12, 12}), c.set->levels());
  old->set(1, std::make_shared<ComparisonMatrix>(c.set->block(1)));
  c.hypers.dirichlet = DirichletHyper::flat(IndicatorLayout(c.set->levels()));
  Rng rng(10);
  const auto pool = gibbs_componentwise(old, c.hypers, 400, 100, rng);
  REQUIRE(distinct_z_count(pool, 1) > 1);
  auto gamma = std::make_shared<ComparisonMatrix>(c.set->block(2));
  PprbSampler sampler(pool, gamma, c.hypers, rng);

  SUBCASE("proposing the current draw gives log alpha = 0") {
    CHECK(sampler.log_acceptance(sampler.current()) == 0.0);
    // a different draw holding identical old links and counts also gives 0
    for (std::size_t s = 0; s < pool.size(); ++s) {
      const auto a = pool.targets(s), b = pool.targets(sampler.current());
      if (s != sampler.current() && std::equal(a.begin(), a.end(), b.begin())) {
        CHECK(sampler.log_acceptance(s) == doctest::Approx(0.0).epsilon(1e-12));
        break;
      }
    }
  }
  SUBCASE("a draw whose old links collide with new links is rejected") {
    // pick an old record that some pool draw targets but the current draw
    // leaves free, and link an unlinked new record to it
    auto& state = sampler.state();
    const auto& layout = state.z().layout();
    RecordId victim = -1;
    for (std::size_t s = 0; s < pool.size() && victim < 0; ++s) {
      const auto t = pool.targets(s);
      for (RecordId q = 0; q < static_cast<RecordId>(t.size()); ++q)
        if (t[q] != q && state.z().is_free(t[q])) {
          victim = t[q];
          break;
        }
    }
    REQUIRE(victim >= 0);
    for (RecordId r = layout.offset(2); r < layout.total(); ++r)
      if (!state.z().is_linked(r)) {
        state.link(r, victim);
        break;
      }
    REQUIRE_FALSE(state.z().is_free(victim));
    int conflicts = 0;
    for (std::size_t s = 0; s < pool.size(); ++s) {
      const auto t = pool.targets(s);
      bool clash = false;
      for (RecordId r = layout.offset(2); r < layout.total(); ++r)
        if (state.z().is_linked(r)) {
          const RecordId p = state.z().target(r);
          for (RecordId q = 0; q < static_cast<RecordId>(t.size()); ++q)
            if (t[q] == p && q != p) clash = true;
        }
      if (clash) {
        ++conflicts;
        CHECK(sampler.log_acceptance(s) == kNegInf);
      }
    }
    CHECK(conflicts > 0);
  }
  SUBCASE("empty pool is a configuration error") {
    SamplePool empty(FileLayout({12, 12}), IndicatorLayout(c.set->levels()), "", StoreKind::pool);
    CHECK_THROWS_AS(PprbSampler(empty, gamma, c.hypers, rng), ConfigError);
  }
  SUBCASE("distinct Z(1) never grows") {
    PprbConfig cfg;
    cfg.iterations = 600;
    cfg.burn_in = 100;
    const auto out = pprb_within_gibbs_update(pool, gamma, c.hypers, cfg, rng);
    CHECK(out.size() == 500);
    CHECK(distinct_z_count(out, 1) <= distinct_z_count(pool, 1));
  }
}

TEST_CASE("pprb acceptance ratio equals the posterior ratio over old draws") {
  // Swapping in old links from draw s* with m, u and Z(k-1) fixed: the log
  // ratio of the (m, u)-full-conditional-weighted target must equal
  // log_acceptance. Checked against full recomputation.
  auto c = small_corpus(3, 10, 0.5, 12);
  auto old = std::make_shared<ComparisonSet>(FileLayout({10, 10}), c.set->levels());
  old->set(1, std::make_shared<ComparisonMatrix>(c.set->block(1)));
  Rng rng(13);
  const auto pool = gibbs_componentwise(old, c.hypers, 300, 100, rng);
  auto gamma = std::make_shared<ComparisonMatrix>(c.set->block(2));
  PprbSampler sampler(pool, gamma, c.hypers, rng);
  for (int i = 0; i < 30; ++i) {
    sampler.step_mu(rng);
    sampler.step_z(rng, 0, 3);
  }
  const auto& layout = c.set->layout();
  const IndicatorLayout ind(c.set->levels());
  const auto& mu = sampler.state().mu();
  const auto cur = sampler.current();
  auto full_log = [&](std::size_t s) {
    // log p(Gamma_new | Z_old(s), Z_new, m, u) + log p(m, u | Z_old(s), Gamma_old)
    std::vector<RecordId> targets(sampler.state().z().targets().begin(), sampler.state().z().targets().end());
    const auto o = pool.targets(s);
    std::copy(o.begin(), o.end(), targets.begin());
    const auto z = MatchingVectors::from_targets(layout, targets);
    const auto all = agreement_counts(*c.set, z);
    const auto m_old = pool.matched(s);
    std::vector<std::int64_t> m_new(all.matched.size()), u_new(all.matched.size());
    const auto totals_new = c.set->block(2).level_totals();
    for (std::size_t i = 0; i < m_new.size(); ++i) {
      m_new[i] = all.matched[i] - m_old[i];
      u_new[i] = totals_new[i] - m_new[i];
    }
    double lp = log_multinomial_kernel(m_new, mu.m) + log_multinomial_kernel(u_new, mu.u);
    DirichletHyper post = c.hypers.dirichlet;
    for (std::size_t i = 0; i < m_old.size(); ++i) {
      post.a[i] += double(m_old[i]);
      post.b[i] += double(pool.totals()[i] - m_old[i]);
    }
    return lp + log_dirichlet_density(mu.m, post.a, ind) + log_dirichlet_density(mu.u, post.b, ind);
  };
  int checked = 0;
  for (std::size_t s = 0; s < pool.size(); ++s) {
    const double la = sampler.log_acceptance(s);
    if (la == kNegInf) continue;
    CHECK(la == doctest::Approx(full_log(s) - full_log(cur)).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("smcmc") {
  auto c = small_corpus(3, 10, 0.5, 7);
  auto old = std::make_shared<ComparisonSet>(FileLayout({10, 10}), c.set->levels());
  old->set(1, std::make_shared<ComparisonMatrix>(c.set->block(1)));
  Rng rng(14);
  const auto pool = gibbs_componentwise(old, c.hypers, 700, 100, rng);

  SUBCASE("output does not depend on the worker count") {
    for (auto kernel : {SmcmcKernel::component, SmcmcKernel::lb, SmcmcKernel::mixed}) {
      SmcmcConfig cfg;
      cfg.kernel = kernel;
      cfg.ensemble_size = 40;
      cfg.jump_iterations = 3;
      cfg.transition_iterations = 5;
      cfg.block_size = 4;
      cfg.seed = 77;
      cfg.workers = 1;
      const auto one = smcmc_update(pool, c.set, c.hypers, cfg);
      cfg.workers = 4;
      const auto four = smcmc_update(pool, c.set, c.hypers, cfg);
      CHECK(one.ensemble == four.ensemble);
      CHECK(one.ensemble.size() == 40);
      CHECK(one.ensemble.kind() == StoreKind::ensemble);
      CHECK(one.member_seconds.size() == 40);
    }
  }
  SUBCASE("identical members with one seed give identical output") {
    SamplePool same(pool.layout(), pool.indicators(), "", StoreKind::ensemble);
    same.set_totals(pool.totals());
    for (int i = 0; i < 4; ++i) same.append(pool.m(0), pool.u(0), pool.targets(0), pool.matched(0));
    SmcmcConfig cfg;
    cfg.seed = 3;
    const auto a = smcmc_update(same, c.set, c.hypers, cfg);
    const auto b = smcmc_update(same, c.set, c.hypers, cfg);
    CHECK(a.ensemble == b.ensemble);
  }
  SUBCASE("jump-only ensembles are flagged") {
    SmcmcConfig cfg;
    cfg.ensemble_size = 5;
    cfg.transition_iterations = 0;
    CHECK(smcmc_update(pool, c.set, c.hypers, cfg).jump_only);
  }
  SUBCASE("members are uncorrelated") {
    SmcmcConfig cfg;
    cfg.ensemble_size = 400;
    cfg.workers = 4;
    const auto out = smcmc_update(pool, c.set, c.hypers, cfg);
    // lag-1 autocorrelation across members for the first m component
    std::vector<double> x;
    for (std::size_t s = 0; s < out.ensemble.size(); ++s) x.push_back(out.ensemble.m(s)[0]);
    double mean = 0;
    for (double v : x) mean += v;
    mean /= double(x.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      den += (x[i] - mean) * (x[i] - mean);
      if (i) num += (x[i] - mean) * (x[i - 1] - mean);
    }
    // |rho| below 3 / sqrt(400)
    CHECK(std::fabs(num / den) < 0.15);
  }
  SUBCASE("layout mismatch is structural") {
    SmcmcConfig cfg;
    CHECK_THROWS_AS(smcmc_update(pool, old, c.hypers, cfg), StructuralError);
  }
}

TEST_CASE("sample pool round trip") {
  auto c = small_corpus();
  Rng rng(15);
  auto pool = gibbs_componentwise(c.set, c.hypers, 50, 10, rng);
  pool.set_schema_hash(c.corpus.schema.hash());
  const auto path = std::filesystem::temp_directory_path() / "streamlink_pool_roundtrip.bin";
  save_pool(path, pool);
  CHECK(load_pool(path) == pool);
  std::filesystem::remove(path);
  for (std::size_t s = 0; s < pool.size(); ++s)
    CHECK(std::vector<std::int64_t>(pool.matched(s).begin(), pool.matched(s).end()) ==
          agreement_counts(*c.set, pool.z(s)).matched);
}

TEST_CASE("every recorded state was checked") {
  // all sampler runs in this binary record through check_valid
  CHECK(validity_checks() > 0);
}
