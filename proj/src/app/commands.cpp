#include "streamlink/app/commands.hpp"

#include "streamlink/compare/comparison_matrix.hpp"
#include "streamlink/errors.hpp"
#include "streamlink/evaluation/metrics.hpp"
#include "streamlink/util/digest.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>

namespace streamlink::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string canonical_path(const fs::path& p) { return fs::absolute(p).lexically_normal().string(); }

json file_entry(int index, const fs::path& p) {
  return {{"index", index}, {"path", canonical_path(p)}, {"sha256", sha256_file(p)}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot write " + path.string());
  out << text << '\n';
}

fs::path samples_path(const fs::path& store) {
  return fs::is_directory(store) ? store / kSamplesName : store;
}

// Timings stay out of manifests so reruns reproduce them byte for byte.
json stats_json(const ChainStats& s) {
  return {{"lb_proposed", s.lb_proposed},     {"lb_accepted", s.lb_accepted},
          {"lb_null", s.lb_null},             {"pprb_proposed", s.pprb_proposed},
          {"pprb_accepted", s.pprb_accepted}};
}

json samples_entry(const fs::path& dir, const SamplePool& pool) {
  return {{"path", kSamplesName},
          {"sha256", sha256_file(dir / kSamplesName)},
          {"kind", to_string(pool.kind())},
          {"draws", pool.size()},
          {"iterations", pool.iterations},
          {"burn_in", pool.burn_in},
          {"file_sizes", std::vector<int>(pool.layout().sizes().begin(), pool.layout().sizes().end())}};
}

json save_gamma(const fs::path& dir, int index, const ComparisonMatrix& m) {
  const std::string name = "gamma_" + std::to_string(index) + ".bin";
  save_comparison_matrix(dir / name, m);
  return {{"file", index}, {"path", name}, {"sha256", sha256_file(dir / name)}};
}

std::vector<RecordFile> read_files(const std::vector<fs::path>& paths, const FieldSchema& schema) {
  std::vector<RecordFile> files;
  for (std::size_t i = 0; i < paths.size(); ++i)
    files.push_back(read_record_file(paths[i], schema, static_cast<int>(i) + 1));
  return files;
}

} // namespace

void write_manifest(const fs::path& dir, json manifest) {
  manifest.erase("stage_id");
  manifest["stage_id"] = sha256_hex(manifest.dump());
  write_text(dir / kManifestName, manifest.dump(2));
}

json read_manifest(const fs::path& dir) {
  const auto path = dir / kManifestName;
  std::ifstream in(path);
  if (!in) throw LineageError("no stage manifest at " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception&) {
    throw LineageError("stage manifest " + path.string() + " is not valid JSON");
  }
  if (!j.contains("stage_id")) throw LineageError("stage manifest lacks a stage_id");
  const auto id = j["stage_id"].get<std::string>();
  json body = j;
  body.erase("stage_id");
  if (sha256_hex(body.dump()) != id) throw LineageError("stage manifest " + path.string() + " was modified");
  return j;
}

void cmd_simulate(const RunConfig& config, const SimulateOptions& opts, std::ostream& log) {
  GenConfig gen = config.simulate;
  gen.schema = config.schema;
  gen.seed = config.seed;
  const Corpus corpus = generate_corpus(gen);
  const auto paths = write_corpus(opts.out, corpus);
  json files = json::array();
  for (std::size_t i = 0; i + 1 < paths.size(); ++i) files.push_back(file_entry(static_cast<int>(i) + 1, paths[i]));
  json manifest = {{"format", "streamlink-corpus/1"},
                   {"files", files},
                   {"truth", {{"path", canonical_path(paths.back())}, {"sha256", sha256_file(paths.back())}}},
                   {"schema_hash", config.schema.hash()},
                   {"config", config.to_json()}};
  write_text(opts.out / "simulate.json", manifest.dump(2));
  log << "wrote " << corpus.files.size() << " files of " << gen.records << " records to " << opts.out.string()
      << '\n';
}

void cmd_compare(const RunConfig& config, const CompareOptions& opts, std::ostream& log) {
  if (opts.files.size() < 2) throw ConfigError("compare needs at least two files");
  const auto files = read_files(opts.files, config.schema);
  const auto m = build_comparison_matrix(files.back(), std::span(files).first(files.size() - 1), config.schema);
  fs::create_directories(opts.out);
  const int index = static_cast<int>(files.size());
  const auto entry = save_gamma(opts.out, index, m);
  if (opts.csv)
    export_comparison_csv(opts.out / ("gamma_" + std::to_string(index) + ".csv"), m, config.schema);
  log << "compared file " << index << " against " << m.previous_records() << " earlier records: " << m.rows()
      << " pairs -> " << (opts.out / entry["path"].get<std::string>()).string() << '\n';
}

void cmd_fit(const RunConfig& config, const FitOptions& opts, std::ostream& log) {
  if (opts.files.size() < 2) throw ConfigError("fit needs at least two files");
  const auto files = read_files(opts.files, config.schema);
  auto set = std::make_shared<const ComparisonSet>(build_comparison_set(files, config.schema));
  const Hypers hypers = config.prior.hypers(config.schema);
  GibbsConfig gibbs = config.gibbs;
  gibbs.block_size = gibbs.kernel == ZKernel::lb ? resolve_block(config.gibbs_block, files.back().size()) : 0;

  Rng rng(config.seed);
  ChainStats stats;
  ChainState state = initial_state(set, hypers, rng);
  SamplePool pool = gibbs_sample(state, hypers, gibbs, rng, &stats);
  pool.set_schema_hash(config.schema.hash());

  fs::create_directories(opts.out);
  json gammas = json::array();
  for (int t = 1; t < set->layout().file_count(); ++t) gammas.push_back(save_gamma(opts.out, t + 1, set->block(t)));
  save_pool(opts.out / kSamplesName, pool);
  json fjson = json::array();
  for (std::size_t i = 0; i < opts.files.size(); ++i) fjson.push_back(file_entry(static_cast<int>(i) + 1, opts.files[i]));
  write_manifest(opts.out, {{"format", "streamlink-stage/1"},
                            {"stage", pool.stage()},
                            {"lineage", nullptr},
                            {"method", std::string("gibbs-") + to_string(gibbs.kernel)},
                            {"files", fjson},
                            {"gamma", gammas},
                            {"samples", samples_entry(opts.out, pool)},
                            {"schema_hash", config.schema.hash()},
                            {"config", config.to_json()},
                            {"seed", config.seed},
                            {"stats", stats_json(stats)}});
  log << "fit " << files.size() << " files: " << pool.size() << " draws after " << pool.burn_in
      << " burn-in, " << stats.burn_seconds + stats.sample_seconds << " s\n";
}

void cmd_update(const RunConfig& config, const UpdateOptions& opts, std::ostream& log) {
  const std::string method = opts.method;
  const bool pprb = method == "pprb";
  SmcmcKernel kernel = SmcmcKernel::component;
  if (method == "smcmc-comp") kernel = SmcmcKernel::component;
  else if (method == "smcmc-lb") kernel = SmcmcKernel::lb;
  else if (method == "smcmc-mixed") kernel = SmcmcKernel::mixed;
  else if (!pprb) throw ConfigError("unknown update method: " + method);

  const json prior = read_manifest(opts.prior);
  const auto prior_id = prior.at("stage_id").get<std::string>();
  if (opts.expect_lineage && *opts.expect_lineage != prior_id)
    throw LineageError("prior stage is " + prior_id + ", expected " + *opts.expect_lineage);
  if (prior.at("schema_hash").get<std::string>() != config.schema.hash())
    throw StructuralError("the configured schema differs from the prior stage's schema");
  const auto samples = opts.prior / prior.at("samples").at("path").get<std::string>();
  if (!fs::exists(samples) || sha256_file(samples) != prior.at("samples").at("sha256").get<std::string>())
    throw LineageError("sample store " + samples.string() + " does not match its manifest");
  const SamplePool pool = load_pool(samples);
  if (pool.schema_hash() != config.schema.hash() || pool.stage() != prior.at("stage").get<int>())
    throw LineageError("sample store does not belong to the prior stage");

  std::vector<fs::path> paths;
  json fjson = json::array();
  for (const auto& f : prior.at("files")) {
    const fs::path p = f.at("path").get<std::string>();
    if (!fs::exists(p) || sha256_file(p) != f.at("sha256").get<std::string>())
      throw LineageError("file " + p.string() + " changed since the prior stage");
    paths.push_back(p);
    fjson.push_back(f);
  }
  paths.push_back(opts.file);
  const int index = static_cast<int>(paths.size());
  fjson.push_back(file_entry(index, opts.file));
  const auto files = read_files(paths, config.schema);
  if (!std::equal(pool.layout().sizes().begin(), pool.layout().sizes().end(), files.begin(), files.end() - 1,
                  [](int n, const RecordFile& f) { return n == f.size(); }))
    throw LineageError("prior files no longer match the sample store's layout");

  const Hypers hypers = config.prior.hypers(config.schema);
  const int new_size = files.back().size();
  SamplePool out;
  json stats;
  std::shared_ptr<const ComparisonMatrix> gamma;
  if (pprb) {
    gamma = std::make_shared<const ComparisonMatrix>(
        build_comparison_matrix(files.back(), std::span(files).first(files.size() - 1), config.schema));
    PprbConfig pc = config.pprb;
    pc.block_size = resolve_block(config.pprb_block, new_size);
    Rng rng = Rng::stream(config.seed, 0, static_cast<std::uint64_t>(index));
    ChainStats cs;
    out = pprb_within_gibbs_update(pool, gamma, hypers, pc, rng, &cs);
    stats = stats_json(cs);
    log << "pprb acceptance " << cs.pprb_accept_rate() << ", " << cs.burn_seconds + cs.sample_seconds << " s\n";
  } else {
    auto set = std::make_shared<const ComparisonSet>(build_comparison_set(files, config.schema));
    gamma = std::shared_ptr<const ComparisonMatrix>(set, &set->block(index - 1));
    SmcmcConfig sc = config.smcmc;
    sc.kernel = kernel;
    sc.block_size = kernel == SmcmcKernel::component ? 0 : resolve_block(config.smcmc_block, new_size);
    sc.workers = config.workers;
    sc.seed = config.seed;
    auto result = smcmc_update(pool, set, hypers, sc);
    out = std::move(result.ensemble);
    stats = stats_json(result.stats);
    const double longest =
        result.member_seconds.empty() ? 0.0 : *std::max_element(result.member_seconds.begin(), result.member_seconds.end());
    stats["jump_only"] = result.jump_only;
    if (result.jump_only) log << "warning: no transition iterations; the ensemble is biased\n";
    log << "smcmc " << to_string(kernel) << " over " << out.size() << " members, longest member " << longest
        << " s\n";
  }
  out.set_schema_hash(config.schema.hash());

  fs::create_directories(opts.out);
  json gammas = json::array({save_gamma(opts.out, index, *gamma)});
  save_pool(opts.out / kSamplesName, out);
  write_manifest(opts.out, {{"format", "streamlink-stage/1"},
                            {"stage", out.stage()},
                            {"lineage", prior_id},
                            {"method", method},
                            {"files", fjson},
                            {"gamma", gammas},
                            {"samples", samples_entry(opts.out, out)},
                            {"schema_hash", config.schema.hash()},
                            {"config", config.to_json()},
                            {"seed", config.seed},
                            {"stats", stats}});
  log << "stage " << out.stage() << " written to " << opts.out.string() << '\n';
}

void cmd_evaluate(const RunConfig&, const EvaluateOptions& opts, std::ostream& log) {
  const SamplePool pool = load_pool(samples_path(opts.store));
  if (!fs::exists(opts.truth)) throw IngestionError("truth file " + opts.truth.string() + " not found");
  const GroundTruth truth = read_truth_csv(opts.truth, pool.layout());
  const MetricSeries series = evaluate_pool(pool, truth);
  fs::create_directories(opts.out);
  write_metrics_csv(opts.out / "metrics.csv", series);
  const std::string summary = metrics_summary_json(series);
  write_text(opts.out / "summary.json", summary);
  log << summary << '\n';
}

void cmd_diagnose(const RunConfig& config, const DiagnoseOptions& opts, std::ostream& log) {
  const SamplePool pool = load_pool(samples_path(opts.store));
  const DegeneracyReport report = diagnose_pool(pool, config.degeneracy_threshold);
  const std::string text = diagnostics_json(report, pool);
  if (opts.out) {
    fs::create_directories(*opts.out);
    write_text(*opts.out / "diagnostics.json", text);
  }
  log << text << '\n';
  if (report.degenerate) log << "warning: the pool looks degenerate\n";
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streaming Bayesian record linkage"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  app.add_option("--config", config_path, "JSON config (default: $STREAMLINK_CONFIG)");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--workers", workers, "Worker threads (default: $STREAMLINK_WORKERS)");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic corpus");
  simulate->add_option("--out", sim.out, "Output directory")->required();

  CompareOptions cmp;
  auto* compare = app.add_subcommand("compare", "Compare the last file against the earlier ones");
  compare->add_option("files", cmp.files, "Record files in stream order")->required();
  compare->add_option("--out", cmp.out, "Output directory")->required();
  compare->add_flag("--csv", cmp.csv, "Also export the comparisons as CSV");

  FitOptions fit;
  auto* fitc = app.add_subcommand("fit", "Gibbs fit of the first files");
  fitc->add_option("files", fit.files, "Record files in stream order")->required();
  fitc->add_option("--out", fit.out, "Stage directory")->required();

  UpdateOptions upd;
  std::string lineage;
  auto* update = app.add_subcommand("update", "Assimilate one new file");
  update->add_option("file", upd.file, "New record file")->required();
  update->add_option("--prior", upd.prior, "Prior stage directory")->required();
  update->add_option("--method", upd.method, "pprb | smcmc-comp | smcmc-lb | smcmc-mixed");
  update->add_option("--out", upd.out, "Stage directory")->required();
  update->add_option("--lineage", lineage, "Required stage_id of the prior stage");

  EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score a sample store against the truth");
  evaluate->add_option("--store", ev.store, "Stage directory or samples file")->required();
  evaluate->add_option("--truth", ev.truth, "Truth CSV")->required();
  evaluate->add_option("--out", ev.out, "Output directory")->required();

  DiagnoseOptions dg;
  std::string dg_out;
  auto* diagnose = app.add_subcommand("diagnose", "ESS and degeneracy report");
  diagnose->add_option("--store", dg.store, "Stage directory or samples file")->required();
  diagnose->add_option("--out", dg_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (config_path.empty())
      if (const char* env = std::getenv("STREAMLINK_CONFIG")) config_path = env;
    RunConfig config = config_path.empty() ? RunConfig::from_json(json::object()) : RunConfig::load(config_path);
    if (!workers)
      if (const char* env = std::getenv("STREAMLINK_WORKERS")) {
        try {
          workers = std::stoi(env);
        } catch (const std::exception&) {
          throw ConfigError("STREAMLINK_WORKERS must be an integer");
        }
      }
    if (seed) config.seed = *seed;
    if (workers) config.workers = *workers;
    config.validate();

    if (simulate->parsed()) cmd_simulate(config, sim, out);
    else if (compare->parsed()) cmd_compare(config, cmp, out);
    else if (fitc->parsed()) cmd_fit(config, fit, out);
    else if (update->parsed()) {
      if (!lineage.empty()) upd.expect_lineage = lineage;
      cmd_update(config, upd, out);
    } else if (evaluate->parsed()) cmd_evaluate(config, ev, out);
    else if (diagnose->parsed()) {
      if (!dg_out.empty()) dg.out = dg_out;
      cmd_diagnose(config, dg, out);
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const LineageError& e) {
    err << "lineage error: " << e.what() << '\n';
    return kLineage;
  } catch (const StructuralError& e) {
    err << "data error: " << e.what() << '\n';
    return kStructural;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

} // namespace streamlink::app
