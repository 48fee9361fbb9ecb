#pragma once

#include "streamlink/linkage/schema.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace streamlink {

/// Block structure of a P-length vector: field f occupies
/// [offset(f), offset(f) + levels[f] + 1).
class IndicatorLayout {
public:
  IndicatorLayout() = default;
  explicit IndicatorLayout(std::vector<int> levels);

  const std::vector<int>& levels() const noexcept { return levels_; }
  int field_count() const noexcept { return static_cast<int>(levels_.size()); }
  int length() const noexcept { return offsets_.back(); }
  int offset(int field) const { return offsets_[field]; }
  int block_size(int field) const { return levels_[field] + 1; }

  friend bool operator==(const IndicatorLayout& a, const IndicatorLayout& b) {
    return a.levels_ == b.levels_;
  }

private:
  std::vector<int> levels_;
  std::vector<int> offsets_{0};
};

/// Concatenated per-field probability vectors m = [m_1 ... m_F] and u.
struct MUParams {
  IndicatorLayout layout;
  std::vector<double> m;
  std::vector<double> u;

  /// Every block uniform.
  static MUParams uniform(const IndicatorLayout& layout);

  /// Throws StructuralError unless every block is a simplex to within `tol`.
  void validate(double tol = 1e-12) const;
};

/// Dirichlet parameters a (for m) and b (for u), both P-vectors.
struct DirichletHyper {
  std::vector<double> a;
  std::vector<double> b;

  /// a = b = 1.
  static DirichletHyper flat(const IndicatorLayout& layout);
  /// Throws ConfigError unless shapes match and every entry is positive.
  void validate(const IndicatorLayout& layout) const;
};

/// Beta(alpha_pi, beta_pi) on the link propensity, which is integrated out.
struct ZPriorHyper {
  double alpha_pi = 1.0;
  double beta_pi = 1.0;

  void validate() const;
};

struct Hypers {
  DirichletHyper dirichlet;
  ZPriorHyper z;
};

/// Level tallies over coreferent pairs (matched) and the rest (unmatched).
struct AgreementCounts {
  std::vector<std::int64_t> matched;
  std::vector<std::int64_t> unmatched;

  friend bool operator==(const AgreementCounts&, const AgreementCounts&) = default;
};

/// a_f = s * [1 - p_f, p_f / L_f, ..., p_f / L_f] for each field.
std::vector<double> informative_m_prior(const IndicatorLayout& layout, std::span<const double> p,
                                        double s);

/// Per-field error probability by kind: text and numeric fields take
/// `p_text`, categorical ones `p_categorical`.
std::vector<double> error_probabilities(const FieldSchema& schema, double p_text,
                                        double p_categorical);

} // namespace streamlink
