#include "streamlink/evaluation/metrics.hpp"

#include "streamlink/errors.hpp"
#include "streamlink/linkage/records.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

namespace streamlink {

GroundTruth::GroundTruth(FileLayout layout, std::vector<std::int64_t> entities)
    : layout_(std::move(layout)), entity_(std::move(entities)) {
  if (entity_.size() != static_cast<std::size_t>(layout_.total()))
    throw StructuralError("truth covers " + std::to_string(entity_.size()) + " records, expected " +
                          std::to_string(layout_.total()));
  for (int f = 0; f < layout_.file_count(); ++f) {
    std::set<std::int64_t> seen;
    for (RecordId r = layout_.offset(f); r < layout_.offset(f) + layout_.size(f); ++r)
      if (!seen.insert(entity_[r]).second)
        throw StructuralError("entity " + std::to_string(entity_[r]) + " appears twice in file " +
                              std::to_string(f + 1));
  }
}

std::vector<RecordPair> GroundTruth::true_pairs() const {
  std::unordered_map<std::int64_t, std::vector<RecordId>> by_entity;
  for (RecordId r = 0; r < layout_.total(); ++r) by_entity[entity_[r]].push_back(r);
  std::vector<RecordPair> out;
  for (const auto& [e, rs] : by_entity)
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = i + 1; j < rs.size(); ++j) out.emplace_back(rs[i], rs[j]);
  std::sort(out.begin(), out.end());
  return out;
}

MatchingVectors GroundTruth::oracle_links() const {
  MatchingVectors z(layout_);
  std::unordered_map<std::int64_t, RecordId> last;
  for (RecordId r = 0; r < layout_.total(); ++r) {
    auto it = last.find(entity_[r]);
    if (it != last.end()) {
      z.link(r, it->second);
      it->second = r;
    } else {
      last.emplace(entity_[r], r);
    }
  }
  return z;
}

GroundTruth read_truth_csv(const std::filesystem::path& path, const FileLayout& layout) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open truth file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const auto rows = csv::parse(buf.str());
  if (rows.empty()) throw IngestionError("empty truth file " + path.string());
  const auto& header = rows.front();
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw IngestionError("truth file lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto cf = column("file"), cr = column("row"), ce = column("entity_id");
  std::vector<std::int64_t> entity(static_cast<std::size_t>(layout.total()));
  std::vector<char> seen(entity.size(), 0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() < header.size()) throw IngestionError("short row in truth file");
    int file = 0, rec = 0;
    std::int64_t e = 0;
    try {
      file = std::stoi(row[cf]);
      rec = std::stoi(row[cr]);
      e = std::stoll(row[ce]);
    } catch (const std::exception&) {
      throw IngestionError("malformed truth row " + std::to_string(i + 1));
    }
    if (file < 1 || file > layout.file_count() || rec < 1 || rec > layout.size(file - 1))
      throw StructuralError("truth row " + std::to_string(i + 1) + " names an unknown record");
    const auto g = static_cast<std::size_t>(layout.global({file - 1, rec - 1}));
    if (seen[g]) throw StructuralError("truth lists a record twice");
    seen[g] = 1;
    entity[g] = e;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw StructuralError("truth does not cover every record");
  return GroundTruth(layout, std::move(entity));
}

void write_truth_csv(const std::filesystem::path& path, const GroundTruth& truth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot write " + path.string());
  out << "file,row,entity_id\n";
  const auto& layout = truth.layout();
  for (RecordId r = 0; r < layout.total(); ++r) {
    const auto ref = layout.locate(r);
    out << ref.file + 1 << ',' << ref.row + 1 << ',' << truth.entity(r) << '\n';
  }
}

LinkageScore score_from_counts(std::int64_t predicted, std::int64_t correct, std::int64_t actual) {
  LinkageScore s;
  s.precision = predicted == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(predicted);
  s.recall = actual == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(actual);
  s.f1 = (s.precision == 0.0 || s.recall == 0.0) ? 0.0 : 2.0 / (1.0 / s.precision + 1.0 / s.recall);
  return s;
}

namespace {

std::int64_t true_pair_count(const GroundTruth& truth) {
  std::unordered_map<std::int64_t, std::int64_t> size;
  for (auto e : truth.entities()) ++size[e];
  std::int64_t n = 0;
  for (const auto& [e, c] : size) n += c * (c - 1) / 2;
  return n;
}

LinkageScore score_with(const MatchingVectors& z, const GroundTruth& truth, std::int64_t actual) {
  std::int64_t predicted = 0, correct = 0;
  for (const auto& c : all_clusters(z)) {
    const auto& m = c.members;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        ++predicted;
        if (truth.entity(m[i]) == truth.entity(m[j])) ++correct;
      }
  }
  return score_from_counts(predicted, correct, actual);
}

} // namespace

LinkageScore precision_recall_f1(const MatchingVectors& z, const GroundTruth& truth) {
  if (!(z.layout() == truth.layout())) throw StructuralError("truth and links cover different records");
  return score_with(z, truth, true_pair_count(truth));
}

std::int64_t entity_count(const MatchingVectors& z) { return z.layout().total() - z.total_links(); }

double effective_sample_size(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 10) throw ConfigError("ESS needs at least 10 values");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  auto acov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - mean) * (x[i + lag] - mean);
    return s / static_cast<double>(n);
  };
  const double g0 = acov(0);
  if (!(g0 > 1e-300 * (1.0 + mean * mean))) return 1.0;

  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double pair = (m == 0 ? g0 : acov(2 * m)) + acov(2 * m + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev);
    prev = pair;
    sum += pair;
  }
  const double var = -g0 + 2.0 * sum;
  if (!(var > 0.0)) return static_cast<double>(n);
  return static_cast<double>(n) * g0 / var;
}

std::vector<double> mu_component_ess(const SamplePool& pool) {
  const auto P = static_cast<std::size_t>(pool.indicators().length());
  std::vector<double> out;
  out.reserve(2 * P);
  std::vector<double> series(pool.size());
  for (int which = 0; which < 2; ++which)
    for (std::size_t i = 0; i < P; ++i) {
      for (std::size_t s = 0; s < pool.size(); ++s) series[s] = which == 0 ? pool.m(s)[i] : pool.u(s)[i];
      out.push_back(effective_sample_size(series));
    }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double median_mu_ess(const SamplePool& pool) { return median(mu_component_ess(pool)); }

std::size_t distinct_z_count(const SamplePool& pool, int vector) {
  const auto& layout = pool.layout();
  if (vector < 1 || vector >= layout.file_count())
    throw ConfigError("no matching vector Z^(" + std::to_string(vector) + ")");
  const auto first = static_cast<std::size_t>(layout.offset(vector));
  const auto len = static_cast<std::size_t>(layout.size(vector));
  std::set<std::vector<RecordId>> seen;
  for (std::size_t s = 0; s < pool.size(); ++s) {
    const auto t = pool.targets(s).subspan(first, len);
    seen.emplace(t.begin(), t.end());
  }
  return seen.size();
}

Summary summarize(std::span<const double> v) {
  Summary s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

MetricSeries evaluate_pool(const SamplePool& pool, const GroundTruth& truth) {
  if (!(pool.layout() == truth.layout())) throw StructuralError("truth and pool cover different records");
  const auto actual = true_pair_count(truth);
  MetricSeries out;
  for (std::size_t s = 0; s < pool.size(); ++s) {
    const auto z = pool.z(s);
    const auto sc = score_with(z, truth, actual);
    out.precision.push_back(sc.precision);
    out.recall.push_back(sc.recall);
    out.f1.push_back(sc.f1);
    out.entities.push_back(static_cast<double>(entity_count(z)));
  }
  return out;
}

void write_metrics_csv(const std::filesystem::path& path, const MetricSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestionError("cannot write " + path.string());
  out.precision(17);
  out << "draw,precision,recall,f1,entities\n";
  for (std::size_t s = 0; s < series.size(); ++s)
    out << s + 1 << ',' << series.precision[s] << ',' << series.recall[s] << ',' << series.f1[s] << ','
        << series.entities[s] << '\n';
}

std::string metrics_summary_json(const MetricSeries& series) {
  nlohmann::json j;
  j["draws"] = series.size();
  auto put = [&](const char* name, const std::vector<double>& v) {
    const auto s = summarize(v);
    j[name] = {{"mean", s.mean}, {"sd", s.sd}};
  };
  put("precision", series.precision);
  put("recall", series.recall);
  put("f1", series.f1);
  put("entities", series.entities);
  return j.dump(2);
}

DegeneracyReport diagnose_pool(const SamplePool& pool, double threshold) {
  if (pool.empty()) throw ConfigError("cannot diagnose an empty pool");
  DegeneracyReport r;
  r.threshold = threshold;
  if (pool.size() >= 10) {
    r.component_ess = mu_component_ess(pool);
    r.median_ess = median(r.component_ess);
  }
  const double floor = std::max(2.0, threshold * static_cast<double>(pool.size()));
  for (int v = 1; v < pool.layout().file_count(); ++v) {
    r.distinct.push_back(distinct_z_count(pool, v));
    if (static_cast<double>(r.distinct.back()) < floor) r.degenerate = true;
  }
  return r;
}

std::string diagnostics_json(const DegeneracyReport& report, const SamplePool& pool) {
  nlohmann::json j;
  j["draws"] = pool.size();
  j["kind"] = to_string(pool.kind());
  j["stage"] = pool.stage();
  j["median_ess"] = report.median_ess;
  j["component_ess"] = report.component_ess;
  j["distinct_z"] = report.distinct;
  j["degenerate"] = report.degenerate;
  j["degeneracy_threshold"] = report.threshold;
  return j.dump(2);
}

} // namespace streamlink
