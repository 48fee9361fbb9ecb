#pragma once

#include "streamlink/linkage/layout.hpp"
#include "streamlink/linkage/matching.hpp"
#include "streamlink/samplers/sample_pool.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace streamlink {

/// Entity id of every record, indexed by global id.
class GroundTruth {
public:
  GroundTruth() = default;
  /// Throws StructuralError if an entity repeats within a file.
  GroundTruth(FileLayout layout, std::vector<std::int64_t> entities);

  const FileLayout& layout() const noexcept { return layout_; }
  std::int64_t entity(RecordId r) const { return entity_.at(r); }
  std::span<const std::int64_t> entities() const noexcept { return entity_; }

  /// Cross-file coreferent pairs, earlier record first, sorted.
  std::vector<RecordPair> true_pairs() const;
  /// Matching vectors linking each record to its entity's previous
  /// appearance.
  MatchingVectors oracle_links() const;

private:
  FileLayout layout_;
  std::vector<std::int64_t> entity_;
};

/// CSV with columns file,row,entity_id (file and row 1-based).
GroundTruth read_truth_csv(const std::filesystem::path& path, const FileLayout& layout);
void write_truth_csv(const std::filesystem::path& path, const GroundTruth& truth);

struct LinkageScore {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

/// Pairwise scores of the match set against the truth. With no predicted
/// pairs precision is 1, with no true pairs recall is 1, and F1 is 0 when
/// either is 0.
LinkageScore precision_recall_f1(const MatchingVectors& z, const GroundTruth& truth);
LinkageScore score_from_counts(std::int64_t predicted, std::int64_t correct, std::int64_t actual);

/// Clusters in z: records minus links.
std::int64_t entity_count(const MatchingVectors& z);

/// Geyer initial monotone sequence estimate. A constant series gives 1.
/// Throws ConfigError for fewer than 10 values.
double effective_sample_size(std::span<const double> series);

/// ESS of each m component followed by each u component over the draws.
std::vector<double> mu_component_ess(const SamplePool& pool);
double median_mu_ess(const SamplePool& pool);
double median(std::vector<double> values);

/// Distinct values of Z^{(vector)} across the draws; `vector` is 1-based,
/// Z^{(1)} holding the links of the second file.
std::size_t distinct_z_count(const SamplePool& pool, int vector);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
};
Summary summarize(std::span<const double> values);

/// Per-draw metrics of a pool.
struct MetricSeries {
  std::vector<double> precision, recall, f1, entities;

  std::size_t size() const noexcept { return f1.size(); }
};

MetricSeries evaluate_pool(const SamplePool& pool, const GroundTruth& truth);
void write_metrics_csv(const std::filesystem::path& path, const MetricSeries& series);
/// JSON object with mean and sd of each metric plus the draw count.
std::string metrics_summary_json(const MetricSeries& series);

struct DegeneracyReport {
  double median_ess = 0.0;
  std::vector<double> component_ess;
  /// distinct_z_count for Z^{(1)}, Z^{(2)}, ...
  std::vector<std::size_t> distinct;
  /// Set when some vector takes fewer than `threshold` times the pool size
  /// distinct values.
  bool degenerate = false;
  double threshold = 0.0;
};

DegeneracyReport diagnose_pool(const SamplePool& pool, double threshold = 0.05);
std::string diagnostics_json(const DegeneracyReport& report, const SamplePool& pool);

} // namespace streamlink
