#include "fixtures.hpp"

#include <algorithm>
#include <cstdlib>

namespace fixtures {

using namespace streamlink;

std::vector<int> TinyCorpus::sizes() const {
  std::vector<int> s;
  for (const auto& f : files) s.push_back(static_cast<int>(f.size()));
  return s;
}

std::vector<Features> TinyCorpus::flat() const {
  std::vector<Features> out;
  for (const auto& f : files) out.insert(out.end(), f.begin(), f.end());
  return out;
}

int TinyCorpus::code(int earlier, int later, int f) const {
  const auto all = flat();
  const int d = std::abs(all[earlier][f] - all[later][f]);
  return f == 0 ? std::min(d, 3) : (d != 0);
}

std::shared_ptr<const ComparisonMatrix> TinyCorpus::matrix(int later_file) const {
  auto s = sizes();
  s.resize(static_cast<std::size_t>(later_file) + 1);
  int previous = 0;
  for (int t = 0; t < later_file; ++t) previous += s[t];
  std::vector<std::uint8_t> codes;
  for (int e = 0; e < previous; ++e)
    for (int j = 0; j < s[later_file]; ++j)
      for (int f = 0; f < 3; ++f) codes.push_back(static_cast<std::uint8_t>(code(e, previous + j, f)));
  return std::make_shared<ComparisonMatrix>(s, kLevels, "tiny", std::move(codes));
}

std::shared_ptr<ComparisonSet> TinyCorpus::comparisons(int count) const {
  auto s = sizes();
  if (count > 0) s.resize(static_cast<std::size_t>(count));
  auto set = std::make_shared<ComparisonSet>(FileLayout(s), kLevels);
  for (int t = 1; t < static_cast<int>(s.size()); ++t) set->set(t, matrix(t));
  return set;
}

Hypers TinyCorpus::hypers() const {
  IndicatorLayout layout(kLevels);
  Hypers h;
  h.dirichlet = DirichletHyper::flat(layout);
  h.dirichlet.a = {6, 2, 2, 2, 10.5, 1.5, 10.5, 1.5};
  return h;
}

oracle::Case TinyCorpus::oracle_case(int count) const {
  oracle::Case c;
  c.sizes = sizes();
  if (count > 0) c.sizes.resize(static_cast<std::size_t>(count));
  c.levels = kLevels;
  c.code = [this](int e, int l, int f) { return code(e, l, f); };
  c.a = {{6, 2, 2, 2}, {10.5, 1.5}, {10.5, 1.5}};
  c.b = {{1, 1, 1, 1}, {1, 1}, {1, 1}};
  return c;
}

TinyCorpus corpus_22() { return {{{{{0, 0, 0}, {5, 1, 1}}}, {{{1, 0, 0}, {5, 0, 1}}}}}; }

TinyCorpus corpus_222() {
  return {{{{{0, 0, 0}, {4, 1, 1}}}, {{{1, 0, 0}, {4, 1, 0}}}, {{{1, 0, 1}, {9, 1, 1}}}}};
}

std::vector<int> random_targets(const std::vector<int>& sizes, std::mt19937_64& gen, double link_prob) {
  int total = 0;
  for (int s : sizes) total += s;
  std::vector<int> t(static_cast<std::size_t>(total), -1);
  std::vector<char> taken(t.size(), 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int offset = sizes[0];
  for (std::size_t f = 1; f < sizes.size(); ++f) {
    for (int j = 0; j < sizes[f]; ++j) {
      if (u(gen) >= link_prob) continue;
      const int p = std::uniform_int_distribution<int>(0, offset - 1)(gen);
      if (taken[p]) continue;
      taken[p] = 1;
      t[offset + j] = p;
    }
    offset += sizes[f];
  }
  return t;
}

ZVectors to_external(const std::vector<int>& sizes, const std::vector<int>& targets) {
  ZVectors z;
  int offset = sizes[0];
  for (std::size_t f = 1; f < sizes.size(); ++f) {
    std::vector<std::int64_t> v;
    for (int j = 0; j < sizes[f]; ++j) {
      const int r = offset + j;
      v.push_back(targets[r] >= 0 ? targets[r] + 1 : r + 1);
    }
    z.push_back(std::move(v));
    offset += sizes[f];
  }
  return z;
}

MatchingVectors to_matching(const std::vector<int>& sizes, const std::vector<int>& targets) {
  return MatchingVectors::from_external(to_external(sizes, targets), FileLayout(sizes));
}

} // namespace fixtures
