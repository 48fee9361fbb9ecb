#include "streamlink/linkage/matching.hpp"

#include "streamlink/errors.hpp"

#include <algorithm>
#include <string>

namespace streamlink {

void check_structure(const ZVectors& z, const FileLayout& layout) {
  const int k = layout.file_count();
  if (k < 1) throw StructuralError("layout has no files");
  if (static_cast<int>(z.size()) != k - 1)
    throw StructuralError("expected " + std::to_string(k - 1) + " matching vectors, got " +
                          std::to_string(z.size()));
  for (int t = 1; t < k; ++t) {
    const auto& vec = z[t - 1];
    if (static_cast<int>(vec.size()) != layout.size(t))
      throw StructuralError("matching vector " + std::to_string(t) + " has length " +
                            std::to_string(vec.size()) + ", expected " +
                            std::to_string(layout.size(t)));
    const std::int64_t earlier = layout.offset(t);
    for (std::size_t j = 0; j < vec.size(); ++j) {
      const std::int64_t v = vec[j];
      const std::int64_t self = earlier + static_cast<std::int64_t>(j) + 1;
      if (!((v >= 1 && v <= earlier) || v == self))
        throw StructuralError("matching vector " + std::to_string(t) + " component " +
                              std::to_string(j + 1) + " = " + std::to_string(v) +
                              " outside its legal range");
    }
  }
}

bool validate_links(const ZVectors& z, const FileLayout& layout) {
  check_structure(z, layout);
  std::vector<char> hit(static_cast<std::size_t>(layout.total()), 0);
  for (int t = 1; t < layout.file_count(); ++t) {
    const std::int64_t earlier = layout.offset(t);
    for (std::int64_t v : z[t - 1]) {
      if (v > earlier) continue;
      if (hit[v - 1]) return false;
      hit[v - 1] = 1;
    }
  }
  return true;
}

int link_count(std::span<const std::int64_t> z_vector, std::int64_t threshold) {
  return static_cast<int>(
      std::count_if(z_vector.begin(), z_vector.end(), [&](std::int64_t v) { return v <= threshold; }));
}

MatchingVectors::MatchingVectors(FileLayout layout)
    : layout_(std::move(layout)),
      target_(static_cast<std::size_t>(layout_.total())),
      source_(static_cast<std::size_t>(layout_.total()), -1),
      link_counts_(static_cast<std::size_t>(layout_.file_count()), 0) {
  for (RecordId r = 0; r < layout_.total(); ++r) target_[r] = r;
}

MatchingVectors MatchingVectors::from_external(const ZVectors& z, const FileLayout& layout) {
  if (!validate_links(z, layout))
    throw StructuralError("matching vectors violate link validity");
  MatchingVectors out(layout);
  for (int t = 1; t < layout.file_count(); ++t) {
    const std::int64_t earlier = layout.offset(t);
    for (std::size_t j = 0; j < z[t - 1].size(); ++j) {
      const std::int64_t v = z[t - 1][j];
      if (v <= earlier)
        out.link(layout.offset(t) + static_cast<RecordId>(j), static_cast<RecordId>(v - 1));
    }
  }
  return out;
}

MatchingVectors MatchingVectors::from_targets(const FileLayout& layout,
                                              std::span<const RecordId> targets) {
  if (static_cast<RecordId>(targets.size()) != layout.total())
    throw StructuralError("target array length does not match the layout");
  MatchingVectors out(layout);
  for (RecordId r = 0; r < layout.total(); ++r) {
    if (targets[r] == r) continue;
    if (targets[r] < 0 || targets[r] >= layout.offset(layout.file_of(r)))
      throw StructuralError("stored link target outside the earlier files");
    out.link(r, targets[r]);
  }
  return out;
}

ZVectors MatchingVectors::to_external() const {
  ZVectors z;
  for (int t = 1; t < layout_.file_count(); ++t) {
    std::vector<std::int64_t> vec(static_cast<std::size_t>(layout_.size(t)));
    for (int j = 0; j < layout_.size(t); ++j)
      vec[j] = static_cast<std::int64_t>(target_[layout_.offset(t) + j]) + 1;
    z.push_back(std::move(vec));
  }
  return z;
}

void MatchingVectors::link(RecordId from, RecordId to) {
  const int file = layout_.file_of(from);
  if (is_linked(from)) throw StructuralError("record already sends a link");
  if (to < 0 || to >= layout_.offset(file)) throw StructuralError("link target not in an earlier file");
  if (!is_free(to)) throw StructuralError("link target already receives a link");
  target_[from] = to;
  source_[to] = from;
  ++link_counts_[file];
  ++total_links_;
}

void MatchingVectors::unlink(RecordId from) {
  if (!is_linked(from)) return;
  source_[target_[from]] = -1;
  target_[from] = from;
  --link_counts_[layout_.file_of(from)];
  --total_links_;
}

std::vector<RecordId> MatchingVectors::ancestors(RecordId p) const {
  std::vector<RecordId> out{p};
  while (target_[p] != p) {
    p = target_[p];
    out.push_back(p);
  }
  return out;
}

std::vector<RecordId> MatchingVectors::descendants(RecordId r) const {
  std::vector<RecordId> out{r};
  while (source_[r] >= 0) {
    r = source_[r];
    out.push_back(r);
  }
  return out;
}

MatchingVectors MatchingVectors::extended(int new_file_size) const {
  MatchingVectors out(layout_.extended(new_file_size));
  for (RecordId r = 0; r < layout_.total(); ++r)
    if (is_linked(r)) out.link(r, target_[r]);
  return out;
}

MatchingVectors MatchingVectors::truncated(int files) const {
  MatchingVectors out(layout_.prefix(files));
  for (RecordId r = 0; r < out.layout().total(); ++r)
    if (is_linked(r)) out.link(r, target_[r]);
  return out;
}

Cluster trace_cluster(RecordId start, const MatchingVectors& z) {
  auto down = z.ancestors(start);
  auto up = z.descendants(start);
  Cluster c;
  c.members.assign(down.rbegin(), down.rend());
  c.members.insert(c.members.end(), up.begin() + 1, up.end());
  return c;
}

Cluster trace_cluster(RecordId start, const ZVectors& z, const FileLayout& layout) {
  return trace_cluster(start, MatchingVectors::from_external(z, layout));
}

std::vector<Cluster> all_clusters(const MatchingVectors& z) {
  std::vector<Cluster> out;
  const RecordId n = z.layout().total();
  for (RecordId r = 0; r < n; ++r) {
    if (z.is_linked(r)) continue; // only chain bottoms start a cluster
    Cluster c;
    c.members = z.descendants(r);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<RecordPair> match_set(const MatchingVectors& z) {
  std::vector<RecordPair> pairs;
  for (const auto& c : all_clusters(z))
    for (std::size_t a = 0; a < c.members.size(); ++a)
      for (std::size_t b = a + 1; b < c.members.size(); ++b)
        pairs.emplace_back(c.members[a], c.members[b]);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::vector<RecordPair> match_set(const ZVectors& z, const FileLayout& layout) {
  return match_set(MatchingVectors::from_external(z, layout));
}

std::vector<RecordId> candidate_set(const MatchingVectors& z_prev) {
  std::vector<RecordId> out;
  for (RecordId r = 0; r < z_prev.layout().total(); ++r)
    if (z_prev.is_free(r)) out.push_back(r);
  return out;
}

std::vector<RecordId> candidate_set(const ZVectors& z_prev, const FileLayout& layout) {
  return candidate_set(MatchingVectors::from_external(z_prev, layout));
}

} // namespace streamlink
