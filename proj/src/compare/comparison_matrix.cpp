#include "streamlink/compare/comparison_matrix.hpp"

#include "streamlink/compare/comparators.hpp"
#include "streamlink/errors.hpp"
#include "streamlink/util/binary_io.hpp"

#include <fstream>
#include <numeric>

namespace streamlink {

namespace {

constexpr char kMagic[5] = "SLCM";
constexpr std::uint32_t kVersion = 1;

} // namespace

ComparisonMatrix::ComparisonMatrix(std::vector<int> file_sizes, std::vector<int> levels,
                                   std::string schema_hash, std::vector<std::uint8_t> codes)
    : file_sizes_(std::move(file_sizes)), levels_(std::move(levels)),
      schema_hash_(std::move(schema_hash)), codes_(std::move(codes)) {
  if (file_sizes_.size() < 2) throw StructuralError("comparison matrix needs at least two files");
  if (levels_.empty()) throw StructuralError("comparison matrix needs at least one field");
  for (int n : file_sizes_)
    if (n < 1) throw StructuralError("comparison matrix over an empty file");
  previous_ = std::accumulate(file_sizes_.begin(), file_sizes_.end() - 1, 0);
  if (codes_.size() != rows() * levels_.size())
    throw StructuralError("comparison matrix has " + std::to_string(codes_.size()) +
                          " level codes, expected " + std::to_string(rows() * levels_.size()));

  std::vector<int> offsets{0};
  std::uint64_t space = 1;
  for (int l : levels_) {
    if (l < 1 || l > 254) throw StructuralError("field level count out of range");
    offsets.push_back(offsets.back() + l + 1);
    space *= static_cast<std::uint64_t>(l + 1);
  }
  totals_.assign(static_cast<std::size_t>(offsets.back()), 0);
  const bool tabulate = space <= kMaxPatternSpace;
  if (tabulate) {
    pattern_space_ = static_cast<std::uint32_t>(space);
    patterns_.resize(rows());
  }
  const std::size_t F = levels_.size();
  for (std::size_t r = 0; r < rows(); ++r) {
    std::uint32_t key = 0;
    for (std::size_t f = 0; f < F; ++f) {
      const std::uint8_t c = codes_[r * F + f];
      if (c > levels_[f]) throw StructuralError("level code exceeds the field's level count");
      ++totals_[offsets[f] + c];
      key = key * static_cast<std::uint32_t>(levels_[f] + 1) + c;
    }
    if (tabulate) patterns_[r] = key;
  }
}

std::vector<std::uint8_t> ComparisonMatrix::indicators(std::size_t index) const {
  std::vector<std::uint8_t> out;
  for (std::size_t f = 0; f < levels_.size(); ++f) {
    const std::size_t start = out.size();
    out.resize(start + levels_[f] + 1, 0);
    out[start + level(index, static_cast<int>(f))] = 1;
  }
  return out;
}

ComparisonMatrix build_comparison_matrix(const RecordFile& new_file,
                                         std::span<const RecordFile> previous,
                                         const FieldSchema& schema) {
  if (previous.empty()) throw IngestionError("no earlier files to compare against");
  const int F = schema.field_count();
  auto check = [&](const RecordFile& file) {
    if (file.records.empty()) throw IngestionError("file " + std::to_string(file.index) + " is empty");
    for (const auto& rec : file.records)
      if (static_cast<int>(rec.values.size()) != F)
        throw IngestionError("record " + std::to_string(rec.row) + " of file " +
                             std::to_string(file.index) + " does not match the schema");
  };
  check(new_file);
  std::vector<const Record*> earlier;
  std::vector<int> sizes;
  for (const auto& file : previous) {
    check(file);
    sizes.push_back(file.size());
    for (const auto& rec : file.records) earlier.push_back(&rec);
  }
  sizes.push_back(new_file.size());

  const std::size_t n_new = new_file.records.size();
  std::vector<std::uint8_t> codes(earlier.size() * n_new * F);
  for (std::size_t p = 0; p < earlier.size(); ++p)
    for (std::size_t j = 0; j < n_new; ++j)
      for (int f = 0; f < F; ++f)
        codes[(p * n_new + j) * F + f] = static_cast<std::uint8_t>(
            compare_field(schema.field(f), earlier[p]->values[f], new_file.records[j].values[f]));
  return ComparisonMatrix(std::move(sizes), schema.level_counts(), schema.hash(), std::move(codes));
}

void save_comparison_matrix(const std::filesystem::path& path, const ComparisonMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StructuralError("cannot write " + path.string());
  bin::put_magic(out, kMagic, kVersion);
  bin::put_string(out, m.schema_hash());
  bin::put<std::uint32_t>(out, static_cast<std::uint32_t>(m.file_sizes().size()));
  for (int n : m.file_sizes()) bin::put<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  bin::put<std::uint32_t>(out, static_cast<std::uint32_t>(m.levels().size()));
  for (int l : m.levels()) bin::put<std::uint8_t>(out, static_cast<std::uint8_t>(l));
  out.write(reinterpret_cast<const char*>(m.codes().data()),
            static_cast<std::streamsize>(m.codes().size()));
  if (!out) throw StructuralError("failed writing " + path.string());
}

ComparisonMatrix load_comparison_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot open comparison matrix " + path.string());
  if (bin::expect_magic(in, kMagic) != kVersion)
    throw StructuralError(path.string() + ": unsupported comparison matrix version");
  auto hash = bin::get_string(in, 1024);
  const auto k = bin::get<std::uint32_t>(in);
  if (k < 2 || k > 100000) throw StructuralError(path.string() + ": implausible file count");
  std::vector<int> sizes(k);
  for (auto& n : sizes) n = static_cast<int>(bin::get<std::uint32_t>(in));
  const auto F = bin::get<std::uint32_t>(in);
  if (F < 1 || F > 4096) throw StructuralError(path.string() + ": implausible field count");
  std::vector<int> levels(F);
  for (auto& l : levels) l = bin::get<std::uint8_t>(in);
  std::uint64_t rows = 0;
  for (std::uint32_t i = 0; i + 1 < k; ++i) rows += static_cast<std::uint64_t>(sizes[i]);
  rows *= static_cast<std::uint64_t>(sizes.back());
  std::vector<std::uint8_t> codes(rows * F);
  if (!in.read(reinterpret_cast<char*>(codes.data()), static_cast<std::streamsize>(codes.size())))
    throw StructuralError(path.string() + ": truncated level codes");
  return ComparisonMatrix(std::move(sizes), std::move(levels), std::move(hash), std::move(codes));
}

void export_comparison_csv(const std::filesystem::path& path, const ComparisonMatrix& m,
                           const FieldSchema& schema) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StructuralError("cannot write " + path.string());
  std::vector<std::string> header{"earlier_global", "new_row"};
  for (const auto& f : schema.fields()) header.push_back(f.name);
  out << csv::join(header) << '\n';
  for (int p = 0; p < m.previous_records(); ++p)
    for (int j = 0; j < m.new_records(); ++j) {
      const auto idx = m.row_index(p, j);
      out << (p + 1) << ',' << (j + 1);
      for (int f = 0; f < m.field_count(); ++f) out << ',' << static_cast<int>(m.level(idx, f));
      out << '\n';
    }
}

ComparisonSet::ComparisonSet(FileLayout layout, std::vector<int> levels)
    : layout_(std::move(layout)), levels_(std::move(levels)),
      blocks_(static_cast<std::size_t>(layout_.file_count())) {
  for (int l : levels_) block_offsets_.push_back(block_offsets_.back() + l + 1);
}

void ComparisonSet::set(int file, std::shared_ptr<const ComparisonMatrix> m) {
  if (file < 1 || file >= layout_.file_count()) throw StructuralError("comparison block index out of range");
  if (!m) throw StructuralError("null comparison matrix");
  const auto expect = layout_.prefix(file + 1);
  if (!std::equal(expect.sizes().begin(), expect.sizes().end(), m->file_sizes().begin(),
                  m->file_sizes().end()))
    throw StructuralError("comparison matrix for file " + std::to_string(file + 1) +
                          " was built over different file sizes");
  if (m->levels() != levels_) throw StructuralError("comparison matrix uses different field levels");
  blocks_[file] = std::move(m);
}

bool ComparisonSet::complete() const {
  for (int t = 1; t < layout_.file_count(); ++t)
    if (!present(t)) return false;
  return true;
}

const ComparisonMatrix& ComparisonSet::block(int file) const {
  if (!present(file)) throw StructuralError("comparison block " + std::to_string(file + 1) + " missing");
  return *blocks_[file];
}

std::vector<std::int64_t> ComparisonSet::level_totals() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(indicator_length()), 0);
  for (int t = 1; t < layout_.file_count(); ++t) {
    if (!present(t)) continue;
    const auto& totals = blocks_[t]->level_totals();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += totals[i];
  }
  return out;
}

ComparisonSet ComparisonSet::extended(std::shared_ptr<const ComparisonMatrix> m) const {
  ComparisonSet out(layout_.extended(m->new_records()), levels_);
  for (int t = 1; t < layout_.file_count(); ++t) out.blocks_[t] = blocks_[t];
  out.set(layout_.file_count(), std::move(m));
  return out;
}

ComparisonSet build_comparison_set(std::span<const RecordFile> files, const FieldSchema& schema) {
  std::vector<int> sizes;
  for (const auto& f : files) sizes.push_back(f.size());
  ComparisonSet set(FileLayout(sizes), schema.level_counts());
  for (std::size_t t = 1; t < files.size(); ++t)
    set.set(static_cast<int>(t), std::make_shared<const ComparisonMatrix>(
                                     build_comparison_matrix(files[t], files.subspan(0, t), schema)));
  return set;
}

} // namespace streamlink
