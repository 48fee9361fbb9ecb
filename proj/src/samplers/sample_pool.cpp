#include "streamlink/samplers/sample_pool.hpp"

#include "streamlink/errors.hpp"
#include "streamlink/util/binary_io.hpp"

#include <fstream>

namespace streamlink {

namespace {

constexpr char kMagic[5] = "SLSP";
constexpr std::uint32_t kVersion = 1;

} // namespace

const char* to_string(StoreKind kind) { return kind == StoreKind::pool ? "pool" : "ensemble"; }

StoreKind parse_store_kind(const std::string& name) {
  if (name == "pool") return StoreKind::pool;
  if (name == "ensemble") return StoreKind::ensemble;
  throw StructuralError("unknown sample store kind '" + name + "'");
}

SamplePool::SamplePool(FileLayout layout, IndicatorLayout indicators, std::string schema_hash, StoreKind kind)
    : layout_(std::move(layout)), indicators_(std::move(indicators)), schema_hash_(std::move(schema_hash)),
      kind_(kind), totals_(P(), 0) {}

void SamplePool::set_totals(std::vector<std::int64_t> totals) {
  if (totals.size() != P()) throw StructuralError("level totals have the wrong length");
  totals_ = std::move(totals);
}

void SamplePool::append(const MUParams& mu, const MatchingVectors& z, std::span<const std::int64_t> matched) {
  if (!(z.layout() == layout_)) throw StructuralError("draw covers different files than the pool");
  append(mu.m, mu.u, z.targets(), matched);
}

void SamplePool::append(std::span<const double> m, std::span<const double> u,
                        std::span<const RecordId> targets, std::span<const std::int64_t> matched) {
  if (m.size() != P() || u.size() != P() || matched.size() != P() || targets.size() != N())
    throw StructuralError("draw shape does not match the pool");
  m_.insert(m_.end(), m.begin(), m.end());
  u_.insert(u_.end(), u.begin(), u.end());
  targets_.insert(targets_.end(), targets.begin(), targets.end());
  matched_.insert(matched_.end(), matched.begin(), matched.end());
  ++count_;
}

MUParams SamplePool::mu(std::size_t s) const {
  MUParams out{indicators_, {}, {}};
  const auto ms = m(s), us = u(s);
  out.m.assign(ms.begin(), ms.end());
  out.u.assign(us.begin(), us.end());
  return out;
}

MatchingVectors SamplePool::z(std::size_t s) const { return MatchingVectors::from_targets(layout_, targets(s)); }

bool operator==(const SamplePool& a, const SamplePool& b) {
  return a.layout_ == b.layout_ && a.indicators_ == b.indicators_ && a.schema_hash_ == b.schema_hash_ &&
         a.kind_ == b.kind_ && a.count_ == b.count_ && a.iterations == b.iterations &&
         a.burn_in == b.burn_in && a.m_ == b.m_ && a.u_ == b.u_ && a.targets_ == b.targets_ &&
         a.matched_ == b.matched_ && a.totals_ == b.totals_;
}

void save_pool(const std::filesystem::path& path, const SamplePool& pool) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StructuralError("cannot write " + path.string());
  bin::put_magic(out, kMagic, kVersion);
  bin::put_string(out, to_string(pool.kind()));
  bin::put_string(out, pool.schema_hash());
  bin::put<std::uint32_t>(out, static_cast<std::uint32_t>(pool.layout().file_count()));
  for (int n : pool.layout().sizes()) bin::put<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  const auto& levels = pool.indicators().levels();
  bin::put<std::uint32_t>(out, static_cast<std::uint32_t>(levels.size()));
  for (int l : levels) bin::put<std::uint32_t>(out, static_cast<std::uint32_t>(l));
  bin::put<std::int32_t>(out, pool.iterations);
  bin::put<std::int32_t>(out, pool.burn_in);
  for (auto t : pool.totals()) bin::put<std::int64_t>(out, t);
  bin::put<std::uint64_t>(out, pool.size());
  for (std::size_t s = 0; s < pool.size(); ++s) {
    for (double x : pool.m(s)) bin::put<double>(out, x);
    for (double x : pool.u(s)) bin::put<double>(out, x);
    for (RecordId r : pool.targets(s)) bin::put<std::int32_t>(out, r);
    for (auto c : pool.matched(s)) bin::put<std::int64_t>(out, c);
  }
  if (!out) throw StructuralError("failed writing " + path.string());
}

SamplePool load_pool(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot open sample store " + path.string());
  if (bin::expect_magic(in, kMagic) != kVersion)
    throw StructuralError(path.string() + ": unsupported sample store version");
  const auto kind = parse_store_kind(bin::get_string(in, 64));
  auto hash = bin::get_string(in, 1024);
  const auto k = bin::get<std::uint32_t>(in);
  if (k < 1 || k > 100000) throw StructuralError(path.string() + ": implausible file count");
  std::vector<int> sizes(k);
  for (auto& n : sizes) n = static_cast<int>(bin::get<std::uint32_t>(in));
  const auto F = bin::get<std::uint32_t>(in);
  if (F < 1 || F > 4096) throw StructuralError(path.string() + ": implausible field count");
  std::vector<int> levels(F);
  for (auto& l : levels) l = static_cast<int>(bin::get<std::uint32_t>(in));
  SamplePool pool(FileLayout(sizes), IndicatorLayout(levels), std::move(hash), kind);
  pool.iterations = bin::get<std::int32_t>(in);
  pool.burn_in = bin::get<std::int32_t>(in);
  const auto P = static_cast<std::size_t>(pool.indicators().length());
  const auto N = static_cast<std::size_t>(pool.layout().total());
  std::vector<std::int64_t> totals(P);
  for (auto& t : totals) t = bin::get<std::int64_t>(in);
  pool.set_totals(std::move(totals));
  const auto S = bin::get<std::uint64_t>(in);
  std::vector<double> m(P), u(P);
  std::vector<RecordId> targets(N);
  std::vector<std::int64_t> matched(P);
  for (std::uint64_t s = 0; s < S; ++s) {
    for (auto& x : m) x = bin::get<double>(in);
    for (auto& x : u) x = bin::get<double>(in);
    for (auto& r : targets) r = bin::get<std::int32_t>(in);
    for (auto& c : matched) c = bin::get<std::int64_t>(in);
    // Rebuilding the vectors validates every stored link.
    (void)MatchingVectors::from_targets(pool.layout(), targets);
    pool.append(m, u, targets, matched);
  }
  return pool;
}

} // namespace streamlink
