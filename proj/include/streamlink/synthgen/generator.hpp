#pragma once

#include "streamlink/evaluation/metrics.hpp"
#include "streamlink/linkage/records.hpp"
#include "streamlink/linkage/schema.hpp"
#include "streamlink/samplers/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace streamlink {

struct GenConfig {
  int files = 4;
  int records = 200;
  /// Fraction of each later file's records that duplicate earlier entities.
  double overlap = 0.3;
  /// Each duplicate gets a uniform number of errors in 1..max_errors.
  int max_errors = 2;
  FieldSchema schema = FieldSchema::default_simulation();
  /// Value domain per categorical field; missing fields get twelve values.
  std::map<std::string, std::vector<std::string>> domains = default_domains();
  /// Relative chance of a text field (versus a categorical or numeric field)
  /// receiving a given error.
  double text_weight = 3.0;
  double other_weight = 1.0;
  std::uint64_t seed = 1;
  bool allow_zero_overlap = false;

  static std::map<std::string, std::vector<std::string>> default_domains();
  /// Throws ConfigError.
  void validate() const;
};

struct Corpus {
  FieldSchema schema;
  std::vector<RecordFile> files;
  GroundTruth truth;

  FileLayout layout() const;
};

/// Fresh entities for file 1; later files take round(overlap * records)
/// duplicates of distinct earlier entities, corrupted by inject_errors, and
/// fresh entities for the rest. Rows are shuffled. Deterministic in the seed.
Corpus generate_corpus(const GenConfig& config);

/// Corrupts `values` in place: a uniform count in 1..max_errors of distinct
/// fields, weighted toward text. Text gets one random character insertion,
/// deletion, substitution or transposition; other fields are redrawn until
/// they change.
void inject_errors(std::vector<FieldValue>& values, const GenConfig& config, Rng& rng);

/// Writes file_<t>.csv for every file and truth.csv; returns the paths in
/// that order.
std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& dir, const Corpus& corpus);

} // namespace streamlink
