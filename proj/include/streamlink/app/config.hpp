#pragma once

#include "streamlink/linkage/schema.hpp"
#include "streamlink/model/params.hpp"
#include "streamlink/samplers/gibbs.hpp"
#include "streamlink/samplers/pprb.hpp"
#include "streamlink/samplers/smcmc.hpp"
#include "streamlink/synthgen/generator.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace streamlink::app {

/// Prior on m: flat, weak (s = 12), strong (s = 120) or explicit vectors.
struct PriorSpec {
  std::string m = "weak";
  double p_text = 0.5;
  double p_categorical = 0.125;
  /// Overrides the strength implied by `m` when set.
  std::optional<double> s;
  /// Explicit a and b; b defaults to ones.
  std::vector<double> a, b;
  double alpha_pi = 1.0;
  double beta_pi = 1.0;

  Hypers hypers(const FieldSchema& schema) const;
};

/// Everything a command reads from the JSON config. Block sizes left unset
/// scale with the newest file.
struct RunConfig {
  FieldSchema schema = FieldSchema::default_simulation();
  PriorSpec prior;
  GibbsConfig gibbs;
  std::optional<int> gibbs_block;
  PprbConfig pprb;
  std::optional<int> pprb_block;
  SmcmcConfig smcmc;
  std::optional<int> smcmc_block;
  GenConfig simulate;
  double degeneracy_threshold = 0.05;
  std::uint64_t seed = 1;
  int workers = 1;

  /// Throws ConfigError on unknown keys or bad values.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);
  /// Canonical JSON of the resolved values.
  nlohmann::json to_json() const;
  void validate() const;
};

int resolve_block(const std::optional<int>& configured, int new_file_size);

} // namespace streamlink::app
