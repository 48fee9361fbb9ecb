#pragma once

#include "streamlink/linkage/layout.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace streamlink {

/// Matching vectors in their external form: entry `t - 1` is Z^{(t-1)} for
/// the 1-based file t = 2..k. Components are 1-based global indices; a record
/// that links nowhere holds its own global index (the N + j sentinel).
using ZVectors = std::vector<std::vector<std::int64_t>>;

/// Throws StructuralError unless every vector has the right length and every
/// component lies in its legal range.
void check_structure(const ZVectors& z, const FileLayout& layout);

/// Link validity: true iff no record is the target of two or more links.
/// Structural problems throw instead of returning false.
bool validate_links(const ZVectors& z, const FileLayout& layout);

/// Number of components of one vector that are real links (<= threshold).
int link_count(std::span<const std::int64_t> z_vector, std::int64_t threshold);

/// A chain of records, one per file at most, ordered by file.
struct Cluster {
  std::vector<RecordId> members;
  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Unordered record pair stored with the earlier-file record first.
using RecordPair = std::pair<RecordId, RecordId>;

/// Valid matching vectors over a file layout, with a reverse link index so
/// clusters trace in time proportional to their size. Internally every record
/// (file 1 included) has a target; a record targets itself when unlinked.
class MatchingVectors {
public:
  MatchingVectors() = default;
  /// All records unlinked.
  explicit MatchingVectors(FileLayout layout);

  /// Throws StructuralError for malformed or invalid input.
  static MatchingVectors from_external(const ZVectors& z, const FileLayout& layout);
  /// From the internal target array (self = unlinked); throws when invalid.
  static MatchingVectors from_targets(const FileLayout& layout, std::span<const RecordId> targets);
  ZVectors to_external() const;

  const FileLayout& layout() const noexcept { return layout_; }

  RecordId target(RecordId r) const { return target_[r]; }
  /// Later record linking into `p`, or -1.
  RecordId source(RecordId p) const { return source_[p]; }
  bool is_linked(RecordId r) const { return target_[r] != r; }
  bool is_free(RecordId p) const { return source_[p] < 0; }

  /// Links sent by records of `file` (0-based, file >= 1), i.e. n_{t.}.
  int link_count(int file) const { return link_counts_.at(file); }
  int total_links() const noexcept { return total_links_; }

  /// Requires `from` unlinked, `to` free and in an earlier file.
  void link(RecordId from, RecordId to);
  void unlink(RecordId from);

  /// `p` followed by the records reached by following targets downward.
  std::vector<RecordId> ancestors(RecordId p) const;
  /// `r` followed by the records reached by following sources upward.
  std::vector<RecordId> descendants(RecordId r) const;

  std::span<const RecordId> targets() const noexcept { return target_; }

  /// Same links plus an appended, fully unlinked file.
  MatchingVectors extended(int new_file_size) const;
  /// Links restricted to the first `files` files.
  MatchingVectors truncated(int files) const;

  friend bool operator==(const MatchingVectors& a, const MatchingVectors& b) {
    return a.layout_ == b.layout_ && a.target_ == b.target_;
  }

private:
  FileLayout layout_;
  std::vector<RecordId> target_;
  std::vector<RecordId> source_;
  std::vector<int> link_counts_;
  int total_links_ = 0;
};

/// Maximal chain containing `start`.
Cluster trace_cluster(RecordId start, const MatchingVectors& z);
/// Validating overload on the external form; throws StructuralError if invalid.
Cluster trace_cluster(RecordId start, const ZVectors& z, const FileLayout& layout);

/// Every cluster, each listed once, ordered by its earliest member.
std::vector<Cluster> all_clusters(const MatchingVectors& z);

/// All cross-file pairs in a common cluster, sorted.
std::vector<RecordPair> match_set(const MatchingVectors& z);
std::vector<RecordPair> match_set(const ZVectors& z, const FileLayout& layout);

/// Records in files 1..k-1 receiving no link (global ids, ascending).
std::vector<RecordId> candidate_set(const MatchingVectors& z_prev);
std::vector<RecordId> candidate_set(const ZVectors& z_prev, const FileLayout& layout);

} // namespace streamlink
