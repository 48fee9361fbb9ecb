#include "streamlink/samplers/rng.hpp"

#include "streamlink/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace streamlink {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t master, std::uint64_t member, std::uint64_t stage) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ splitmix64(member + 0x632be59bd9b4e019ull));
  h = splitmix64(h ^ splitmix64(stage + 0x8cb92ba72f3d8dd7ull));
  return Rng(h);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = engine_();
  while (x >= limit);
  return x % n;
}

double Rng::normal() {
  // Marsaglia polar method, no cached second variate.
  double x, y, s;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    s = x * x + y * y;
  } while (s >= 1.0 || s == 0.0);
  return x * std::sqrt(-2.0 * std::log(s) / s);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
  if (shape < 1.0) {
    double u;
    do u = uniform();
    while (u == 0.0);
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia and Tsang.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

void Rng::dirichlet(std::span<const double> alpha, const IndicatorLayout& layout, std::span<double> out) {
  for (int f = 0; f < layout.field_count(); ++f) {
    const int off = layout.offset(f);
    double total = 0.0;
    for (int l = 0; l < layout.block_size(f); ++l) total += (out[off + l] = gamma(alpha[off + l]));
    for (int l = 0; l < layout.block_size(f); ++l) out[off + l] /= total;
  }
}

std::size_t Rng::categorical_log(std::span<const double> log_weights) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(top)) throw StructuralError("categorical draw with no finite weight");
  double total = 0.0;
  for (double w : log_weights) total += std::exp(w - top);
  const double target = uniform() * total;
  double run = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    if (log_weights[i] == -std::numeric_limits<double>::infinity()) continue;
    run += std::exp(log_weights[i] - top);
    last = i;
    if (target < run) return i;
  }
  return last;
}

} // namespace streamlink
