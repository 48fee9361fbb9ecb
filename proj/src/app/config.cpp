#include "streamlink/app/config.hpp"

#include "streamlink/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace streamlink::app {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, std::optional<T>& out, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  T v{};
  read(obj, key, v, where);
  out = v;
}

FieldSchema parse_schema(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "default") return FieldSchema::default_simulation();
    throw ConfigError("schema must be \"default\" or an object");
  }
  check_keys(j, {"fields"}, "schema");
  std::vector<FieldSpec> fields;
  for (const auto& f : j.at("fields")) {
    check_keys(f, {"name", "kind", "thresholds"}, "schema field");
    FieldSpec spec;
    read(f, "name", spec.name, "schema field");
    std::string kind = "categorical";
    read(f, "kind", kind, "schema field");
    spec.kind = parse_field_kind(kind);
    read(f, "thresholds", spec.thresholds, "schema field");
    fields.push_back(std::move(spec));
  }
  return FieldSchema(std::move(fields));
}

json schema_json(const FieldSchema& schema) {
  json fields = json::array();
  for (const auto& f : schema.fields())
    fields.push_back({{"name", f.name}, {"kind", to_string(f.kind)}, {"thresholds", f.thresholds}});
  return {{"fields", fields}};
}

json block_json(const std::optional<int>& b) { return b ? json(*b) : json(nullptr); }

} // namespace

Hypers PriorSpec::hypers(const FieldSchema& schema) const {
  IndicatorLayout layout(schema.level_counts());
  Hypers h;
  h.dirichlet = DirichletHyper::flat(layout);
  h.z.alpha_pi = alpha_pi;
  h.z.beta_pi = beta_pi;
  if (m == "explicit") {
    h.dirichlet.a = a;
    if (!b.empty()) h.dirichlet.b = b;
  } else if (m != "flat") {
    const double strength = s ? *s : (m == "strong" ? 120.0 : 12.0);
    h.dirichlet.a = informative_m_prior(layout, error_probabilities(schema, p_text, p_categorical), strength);
  }
  h.dirichlet.validate(layout);
  h.z.validate();
  return h;
}

int resolve_block(const std::optional<int>& configured, int new_file_size) {
  return configured ? *configured : scaled_block_size(new_file_size);
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  check_keys(j, {"schema", "prior", "gibbs", "pprb", "smcmc", "simulate", "diagnose", "seed", "workers"},
             "config");
  if (j.contains("schema")) c.schema = parse_schema(j.at("schema"));
  if (j.contains("prior")) {
    const auto& p = j.at("prior");
    check_keys(p, {"m", "p_text", "p_categorical", "s", "a", "b", "alpha_pi", "beta_pi"}, "prior");
    read(p, "m", c.prior.m, "prior");
    read(p, "p_text", c.prior.p_text, "prior");
    read(p, "p_categorical", c.prior.p_categorical, "prior");
    read_opt(p, "s", c.prior.s, "prior");
    read(p, "a", c.prior.a, "prior");
    read(p, "b", c.prior.b, "prior");
    read(p, "alpha_pi", c.prior.alpha_pi, "prior");
    read(p, "beta_pi", c.prior.beta_pi, "prior");
  }
  if (j.contains("gibbs")) {
    const auto& g = j.at("gibbs");
    check_keys(g, {"iterations", "burn_in", "kernel", "block_size", "lb_moves"}, "gibbs");
    read(g, "iterations", c.gibbs.iterations, "gibbs");
    read(g, "burn_in", c.gibbs.burn_in, "gibbs");
    std::string kernel = to_string(c.gibbs.kernel);
    read(g, "kernel", kernel, "gibbs");
    if (kernel != "component" && kernel != "lb") throw ConfigError("gibbs kernel must be component or lb");
    c.gibbs.kernel = kernel == "lb" ? ZKernel::lb : ZKernel::component;
    read_opt(g, "block_size", c.gibbs_block, "gibbs");
    read(g, "lb_moves", c.gibbs.lb_moves, "gibbs");
  }
  if (j.contains("pprb")) {
    const auto& p = j.at("pprb");
    check_keys(p, {"iterations", "burn_in", "block_size", "lb_moves"}, "pprb");
    read(p, "iterations", c.pprb.iterations, "pprb");
    read(p, "burn_in", c.pprb.burn_in, "pprb");
    read_opt(p, "block_size", c.pprb_block, "pprb");
    read(p, "lb_moves", c.pprb.lb_moves, "pprb");
  }
  if (j.contains("smcmc")) {
    const auto& s = j.at("smcmc");
    check_keys(s, {"kernel", "jump_iterations", "transition_iterations", "block_size", "lb_moves", "ensemble_size"},
               "smcmc");
    std::string kernel = to_string(c.smcmc.kernel);
    read(s, "kernel", kernel, "smcmc");
    c.smcmc.kernel = parse_smcmc_kernel(kernel);
    read(s, "jump_iterations", c.smcmc.jump_iterations, "smcmc");
    read(s, "transition_iterations", c.smcmc.transition_iterations, "smcmc");
    read_opt(s, "block_size", c.smcmc_block, "smcmc");
    read(s, "lb_moves", c.smcmc.lb_moves, "smcmc");
    read(s, "ensemble_size", c.smcmc.ensemble_size, "smcmc");
  }
  if (j.contains("simulate")) {
    const auto& s = j.at("simulate");
    check_keys(s, {"files", "records", "overlap", "max_errors", "text_weight", "other_weight", "allow_zero_overlap",
                   "domains"},
               "simulate");
    read(s, "files", c.simulate.files, "simulate");
    read(s, "records", c.simulate.records, "simulate");
    read(s, "overlap", c.simulate.overlap, "simulate");
    read(s, "max_errors", c.simulate.max_errors, "simulate");
    read(s, "text_weight", c.simulate.text_weight, "simulate");
    read(s, "other_weight", c.simulate.other_weight, "simulate");
    read(s, "allow_zero_overlap", c.simulate.allow_zero_overlap, "simulate");
    if (s.contains("domains")) {
      std::map<std::string, std::vector<std::string>> d;
      read(s, "domains", d, "simulate");
      for (auto& [k, v] : d) c.simulate.domains[k] = std::move(v);
    }
  }
  if (j.contains("diagnose")) {
    const auto& d = j.at("diagnose");
    check_keys(d, {"degeneracy_threshold"}, "diagnose");
    read(d, "degeneracy_threshold", c.degeneracy_threshold, "diagnose");
  }
  read(j, "seed", c.seed, "config");
  read(j, "workers", c.workers, "config");
  c.simulate.schema = c.schema;
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void RunConfig::validate() const {
  if (prior.m != "flat" && prior.m != "weak" && prior.m != "strong" && prior.m != "explicit")
    throw ConfigError("prior.m must be flat, weak, strong or explicit");
  prior.hypers(schema);
  if (!(prior.p_text > 0.0 && prior.p_text < 1.0) || !(prior.p_categorical > 0.0 && prior.p_categorical < 1.0))
    throw ConfigError("prior error probabilities must lie in (0, 1)");
  if (prior.s && !(*prior.s > 0.0)) throw ConfigError("prior.s must be positive");
  gibbs.validate();
  pprb.validate();
  smcmc.validate();
  for (const auto* b : {&gibbs_block, &pprb_block, &smcmc_block})
    if (*b && **b < 0) throw ConfigError("block_size must be non-negative");
  simulate.validate();
  if (!(degeneracy_threshold >= 0.0 && degeneracy_threshold <= 1.0))
    throw ConfigError("degeneracy_threshold must lie in [0, 1]");
  if (workers < 1) throw ConfigError("workers must be at least 1");
}

json RunConfig::to_json() const {
  json j;
  j["schema"] = schema_json(schema);
  json p = {{"m", prior.m},
            {"p_text", prior.p_text},
            {"p_categorical", prior.p_categorical},
            {"alpha_pi", prior.alpha_pi},
            {"beta_pi", prior.beta_pi}};
  p["s"] = prior.s ? json(*prior.s) : json(nullptr);
  if (!prior.a.empty()) p["a"] = prior.a;
  if (!prior.b.empty()) p["b"] = prior.b;
  j["prior"] = p;
  j["gibbs"] = {{"iterations", gibbs.iterations},
                {"burn_in", gibbs.burn_in},
                {"kernel", to_string(gibbs.kernel)},
                {"block_size", block_json(gibbs_block)},
                {"lb_moves", gibbs.lb_moves}};
  j["pprb"] = {{"iterations", pprb.iterations},
               {"burn_in", pprb.burn_in},
               {"block_size", block_json(pprb_block)},
               {"lb_moves", pprb.lb_moves}};
  j["smcmc"] = {{"kernel", to_string(smcmc.kernel)},
                {"jump_iterations", smcmc.jump_iterations},
                {"transition_iterations", smcmc.transition_iterations},
                {"block_size", block_json(smcmc_block)},
                {"lb_moves", smcmc.lb_moves},
                {"ensemble_size", smcmc.ensemble_size}};
  j["simulate"] = {{"files", simulate.files},
                   {"records", simulate.records},
                   {"overlap", simulate.overlap},
                   {"max_errors", simulate.max_errors},
                   {"text_weight", simulate.text_weight},
                   {"other_weight", simulate.other_weight},
                   {"allow_zero_overlap", simulate.allow_zero_overlap},
                   {"domains", simulate.domains}};
  j["diagnose"] = {{"degeneracy_threshold", degeneracy_threshold}};
  j["seed"] = seed;
  j["workers"] = workers;
  return j;
}

} // namespace streamlink::app
