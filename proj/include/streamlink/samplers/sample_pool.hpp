#pragma once

#include "streamlink/linkage/layout.hpp"
#include "streamlink/linkage/matching.hpp"
#include "streamlink/model/params.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace streamlink {

/// `pool`: successive draws of one chain. `ensemble`: independent members.
enum class StoreKind { pool, ensemble };

const char* to_string(StoreKind kind);
StoreKind parse_store_kind(const std::string& name);

/// Stored posterior draws of (m, u, Z) over files 1..k. Each draw also keeps
/// its matched level tallies over every comparison seen so far, which is all a
/// later PPRB update needs from the old data.
class SamplePool {
public:
  SamplePool() = default;
  SamplePool(FileLayout layout, IndicatorLayout indicators, std::string schema_hash, StoreKind kind);

  const FileLayout& layout() const noexcept { return layout_; }
  const IndicatorLayout& indicators() const noexcept { return indicators_; }
  const std::string& schema_hash() const noexcept { return schema_hash_; }
  void set_schema_hash(std::string hash) { schema_hash_ = std::move(hash); }
  StoreKind kind() const noexcept { return kind_; }
  /// Number of files assimilated.
  int stage() const noexcept { return layout_.file_count(); }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  int iterations = 0;
  int burn_in = 0;

  /// Level totals over every comparison of files 1..k.
  const std::vector<std::int64_t>& totals() const noexcept { return totals_; }
  void set_totals(std::vector<std::int64_t> totals);

  void append(const MUParams& mu, const MatchingVectors& z, std::span<const std::int64_t> matched);
  void append(std::span<const double> m, std::span<const double> u, std::span<const RecordId> targets,
              std::span<const std::int64_t> matched);

  std::span<const double> m(std::size_t s) const { return slice(m_, s, P()); }
  std::span<const double> u(std::size_t s) const { return slice(u_, s, P()); }
  std::span<const RecordId> targets(std::size_t s) const { return slice(targets_, s, N()); }
  std::span<const std::int64_t> matched(std::size_t s) const { return slice(matched_, s, P()); }

  MUParams mu(std::size_t s) const;
  MatchingVectors z(std::size_t s) const;

  friend bool operator==(const SamplePool& a, const SamplePool& b);

private:
  std::size_t P() const { return static_cast<std::size_t>(indicators_.length()); }
  std::size_t N() const { return static_cast<std::size_t>(layout_.total()); }
  template <typename T>
  static std::span<const T> slice(const std::vector<T>& v, std::size_t s, std::size_t width) {
    return {v.data() + s * width, width};
  }

  FileLayout layout_;
  IndicatorLayout indicators_;
  std::string schema_hash_;
  StoreKind kind_ = StoreKind::pool;
  std::size_t count_ = 0;
  std::vector<double> m_, u_;
  std::vector<RecordId> targets_;
  std::vector<std::int64_t> matched_;
  std::vector<std::int64_t> totals_;
};

void save_pool(const std::filesystem::path& path, const SamplePool& pool);
SamplePool load_pool(const std::filesystem::path& path);

} // namespace streamlink
