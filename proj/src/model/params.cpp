#include "streamlink/model/params.hpp"

#include "streamlink/errors.hpp"

#include <cmath>

namespace streamlink {

IndicatorLayout::IndicatorLayout(std::vector<int> levels) : levels_(std::move(levels)) {
  for (int l : levels_) {
    if (l < 1) throw ConfigError("every field needs at least one disagreement level");
    offsets_.push_back(offsets_.back() + l + 1);
  }
}

MUParams MUParams::uniform(const IndicatorLayout& layout) {
  MUParams out{layout, std::vector<double>(layout.length()), std::vector<double>(layout.length())};
  for (int f = 0; f < layout.field_count(); ++f)
    for (int l = 0; l < layout.block_size(f); ++l) {
      out.m[layout.offset(f) + l] = 1.0 / layout.block_size(f);
      out.u[layout.offset(f) + l] = 1.0 / layout.block_size(f);
    }
  return out;
}

void MUParams::validate(double tol) const {
  const auto P = static_cast<std::size_t>(layout.length());
  if (m.size() != P || u.size() != P) throw StructuralError("m/u length does not match the field layout");
  for (const auto* v : {&m, &u})
    for (int f = 0; f < layout.field_count(); ++f) {
      double sum = 0.0;
      for (int l = 0; l < layout.block_size(f); ++l) {
        const double x = (*v)[layout.offset(f) + l];
        if (!(x >= 0.0)) throw StructuralError("negative or NaN probability in m/u");
        sum += x;
      }
      if (std::fabs(sum - 1.0) > tol) throw StructuralError("m/u block does not sum to one");
    }
}

DirichletHyper DirichletHyper::flat(const IndicatorLayout& layout) {
  return {std::vector<double>(layout.length(), 1.0), std::vector<double>(layout.length(), 1.0)};
}

void DirichletHyper::validate(const IndicatorLayout& layout) const {
  const auto P = static_cast<std::size_t>(layout.length());
  if (a.size() != P || b.size() != P)
    throw ConfigError("Dirichlet hyperparameters need " + std::to_string(P) + " entries each");
  for (double x : a)
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("Dirichlet parameter a must be positive");
  for (double x : b)
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("Dirichlet parameter b must be positive");
}

void ZPriorHyper::validate() const {
  if (!(alpha_pi > 0.0) || !(beta_pi > 0.0) || !std::isfinite(alpha_pi) || !std::isfinite(beta_pi))
    throw ConfigError("alpha_pi and beta_pi must be positive");
}

std::vector<double> informative_m_prior(const IndicatorLayout& layout, std::span<const double> p,
                                        double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("prior strength s must be positive");
  if (static_cast<int>(p.size()) != layout.field_count())
    throw ConfigError("need one error probability per field");
  std::vector<double> a(layout.length());
  for (int f = 0; f < layout.field_count(); ++f) {
    if (!(p[f] > 0.0 && p[f] < 1.0)) throw ConfigError("error probability p must lie in (0, 1)");
    const int L = layout.levels()[f];
    a[layout.offset(f)] = s * (1.0 - p[f]);
    for (int l = 1; l <= L; ++l) a[layout.offset(f) + l] = s * p[f] / L;
  }
  return a;
}

std::vector<double> error_probabilities(const FieldSchema& schema, double p_text,
                                        double p_categorical) {
  std::vector<double> out;
  for (const auto& f : schema.fields())
    out.push_back(f.kind == FieldKind::categorical ? p_categorical : p_text);
  return out;
}

} // namespace streamlink
