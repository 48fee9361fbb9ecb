#include "streamlink/synthgen/generator.hpp"

#include "streamlink/errors.hpp"

#include <cmath>
#include <limits>

namespace streamlink {

namespace {

constexpr const char* kSyllables[] = {"an", "ber", "cal", "da",  "el",  "fen", "gor", "ha",  "is",  "jo",
                                      "ka", "lin", "mar", "nor", "ol",  "pe",  "quin", "ra", "sten", "tu",
                                      "ul", "ven", "wil", "xa",  "yor", "zel"};

std::string fresh_text(Rng& rng) {
  const int parts = 2 + static_cast<int>(rng.below(2));
  std::string s;
  for (int i = 0; i < parts; ++i) s += kSyllables[rng.below(std::size(kSyllables))];
  s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

const std::vector<std::string>& domain_of(const GenConfig& config, const FieldSpec& f) {
  static const std::vector<std::string> fallback = numbered("c", 12);
  auto it = config.domains.find(f.name);
  return it == config.domains.end() ? fallback : it->second;
}

double numeric_span(const FieldSpec& f) { return f.thresholds.empty() ? 100.0 : 4.0 * f.thresholds.back(); }

FieldValue fresh_value(const GenConfig& config, const FieldSpec& f, Rng& rng) {
  switch (f.kind) {
  case FieldKind::text: return fresh_text(rng);
  case FieldKind::categorical: {
    const auto& d = domain_of(config, f);
    return d[rng.below(d.size())];
  }
  case FieldKind::numeric: return std::floor(rng.uniform() * numeric_span(f));
  }
  return std::string();
}

std::string edit_text(const std::string& s, Rng& rng) {
  for (;;) {
    std::string t = s;
    const auto letter = static_cast<char>('a' + rng.below(26));
    switch (rng.below(4)) {
    case 0: t.insert(t.begin() + static_cast<std::ptrdiff_t>(rng.below(t.size() + 1)), letter); break;
    case 1:
      if (t.size() < 2) continue;
      t.erase(rng.below(t.size()), 1);
      break;
    case 2:
      if (t.empty()) continue;
      t[rng.below(t.size())] = letter;
      break;
    default:
      if (t.size() < 2) continue;
      {
        const auto i = rng.below(t.size() - 1);
        std::swap(t[i], t[i + 1]);
      }
    }
    if (t != s) return t;
  }
}

} // namespace

std::map<std::string, std::vector<std::string>> GenConfig::default_domains() {
  return {
      {"occupation", {"teacher", "farmer", "nurse", "clerk", "engineer", "driver", "cook", "miner",
                      "lawyer", "baker", "tailor", "carpenter", "mechanic", "painter", "doctor",
                      "student", "retired", "merchant", "soldier", "weaver"}},
      {"age_band", {"0-9", "10-19", "20-29", "30-39", "40-49", "50-59", "60-69", "70-79", "80+"}},
  };
}

void GenConfig::validate() const {
  if (files < 1) throw ConfigError("simulate needs at least one file");
  if (records < 1) throw ConfigError("simulate needs at least one record per file");
  if (!(overlap > 0.0 && overlap <= 1.0) && !(allow_zero_overlap && overlap == 0.0))
    throw ConfigError("overlap must lie in (0, 1]");
  if (max_errors < 0 || max_errors > schema.field_count())
    throw ConfigError("max_errors must lie in [0, field count]");
  if (!(text_weight > 0.0) || !(other_weight > 0.0)) throw ConfigError("error weights must be positive");
  for (const auto& f : schema.fields())
    if (f.kind == FieldKind::categorical && domain_of(*this, f).size() < 2)
      throw ConfigError("field '" + f.name + "' needs at least two categories");
}

FileLayout Corpus::layout() const {
  std::vector<int> sizes;
  for (const auto& f : files) sizes.push_back(f.size());
  return FileLayout(sizes);
}

void inject_errors(std::vector<FieldValue>& values, const GenConfig& config, Rng& rng) {
  if (config.max_errors <= 0) return;
  const auto& schema = config.schema;
  int count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(config.max_errors)));
  std::vector<double> weight;
  for (const auto& f : schema.fields())
    weight.push_back(f.kind == FieldKind::text ? config.text_weight : config.other_weight);
  std::vector<double> logw(weight.size());
  for (; count > 0; --count) {
    for (std::size_t i = 0; i < weight.size(); ++i)
      logw[i] = weight[i] > 0.0 ? std::log(weight[i]) : -std::numeric_limits<double>::infinity();
    const auto f = rng.categorical_log(logw);
    weight[f] = 0.0;
    const auto& spec = schema.field(static_cast<int>(f));
    if (spec.kind == FieldKind::text) {
      values[f] = edit_text(std::get<std::string>(values[f]), rng);
    } else {
      FieldValue v;
      do v = fresh_value(config, spec, rng);
      while (v == values[f]);
      values[f] = std::move(v);
    }
  }
}

Corpus generate_corpus(const GenConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const auto& schema = config.schema;
  const int n = config.records;
  const int dup = static_cast<int>(std::lround(config.overlap * n));

  std::vector<std::vector<FieldValue>> entities;
  auto fresh_entity = [&] {
    std::vector<FieldValue> v;
    for (const auto& f : schema.fields()) v.push_back(fresh_value(config, f, rng));
    entities.push_back(std::move(v));
    return static_cast<std::int64_t>(entities.size() - 1);
  };

  Corpus corpus;
  corpus.schema = schema;
  std::vector<std::int64_t> truth;
  for (int t = 0; t < config.files; ++t) {
    std::vector<std::pair<std::int64_t, std::vector<FieldValue>>> rows;
    const int d = t == 0 ? 0 : dup;
    if (d > static_cast<int>(entities.size()))
      throw ConfigError("overlap needs " + std::to_string(d) + " earlier entities for file " +
                        std::to_string(t + 1) + " but only " + std::to_string(entities.size()) + " exist");
    std::vector<std::int64_t> pick(entities.size());
    for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = static_cast<std::int64_t>(i);
    for (int i = 0; i < d; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng.below(pick.size() - static_cast<std::size_t>(i));
      std::swap(pick[static_cast<std::size_t>(i)], pick[j]);
      auto values = entities[pick[static_cast<std::size_t>(i)]];
      inject_errors(values, config, rng);
      rows.emplace_back(pick[static_cast<std::size_t>(i)], std::move(values));
    }
    for (int i = d; i < n; ++i) {
      const auto e = fresh_entity();
      rows.emplace_back(e, entities[e]);
    }
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.below(i)]);

    RecordFile file;
    file.index = t + 1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      file.records.push_back({t + 1, static_cast<int>(i) + 1, std::move(rows[i].second)});
      truth.push_back(rows[i].first + 1);
    }
    corpus.files.push_back(std::move(file));
  }
  corpus.truth = GroundTruth(corpus.layout(), std::move(truth));
  return corpus;
}

std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& dir, const Corpus& corpus) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const auto& f : corpus.files) {
    out.push_back(dir / ("file_" + std::to_string(f.index) + ".csv"));
    write_record_file(out.back(), f, corpus.schema);
  }
  out.push_back(dir / "truth.csv");
  write_truth_csv(out.back(), corpus.truth);
  return out;
}

} // namespace streamlink
