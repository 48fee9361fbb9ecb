#pragma once

#include "streamlink/app/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace streamlink::app {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfig = 2,
  kStructural = 3,
  kLineage = 4,
};

/// A stage directory holds samples.bin, the comparison matrices built for
/// it and manifest.json.
inline constexpr const char* kManifestName = "manifest.json";
inline constexpr const char* kSamplesName = "samples.bin";

/// Writes `manifest` with a stage_id over its canonical dump.
void write_manifest(const std::filesystem::path& dir, nlohmann::json manifest);
/// Reads and checks the stage_id; throws LineageError on tampering.
nlohmann::json read_manifest(const std::filesystem::path& dir);

struct SimulateOptions {
  std::filesystem::path out;
};
/// Writes file_<t>.csv, truth.csv and simulate.json into `out`.
void cmd_simulate(const RunConfig& config, const SimulateOptions& opts, std::ostream& log);

struct CompareOptions {
  std::vector<std::filesystem::path> files;
  std::filesystem::path out;
  bool csv = false;
};
/// Comparisons of the last file against the earlier ones.
void cmd_compare(const RunConfig& config, const CompareOptions& opts, std::ostream& log);

struct FitOptions {
  std::vector<std::filesystem::path> files;
  std::filesystem::path out;
};
/// Gibbs fit of two or more files; writes a stage directory.
void cmd_fit(const RunConfig& config, const FitOptions& opts, std::ostream& log);

struct UpdateOptions {
  std::filesystem::path file;
  std::filesystem::path prior;
  std::string method = "pprb";
  std::filesystem::path out;
  /// stage_id the prior stage must carry, when given.
  std::optional<std::string> expect_lineage;
};
/// Streaming update of a prior stage with one new file.
void cmd_update(const RunConfig& config, const UpdateOptions& opts, std::ostream& log);

struct EvaluateOptions {
  std::filesystem::path store;
  std::filesystem::path truth;
  std::filesystem::path out;
};
void cmd_evaluate(const RunConfig& config, const EvaluateOptions& opts, std::ostream& log);

struct DiagnoseOptions {
  std::filesystem::path store;
  std::optional<std::filesystem::path> out;
};
void cmd_diagnose(const RunConfig& config, const DiagnoseOptions& opts, std::ostream& log);

/// Parses argv, dispatches, and maps errors onto exit codes.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace streamlink::app
