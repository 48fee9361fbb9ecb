#pragma once

#include "streamlink/model/params.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace streamlink {

/// Random source with platform-independent variates: the engine is the
/// standard mt19937_64 and every derived draw is computed here rather than by
/// the library distributions, whose algorithms are implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 1) : engine_(seed) {}

  /// Independent stream for (master seed, member, stage).
  static Rng stream(std::uint64_t master, std::uint64_t member, std::uint64_t stage);

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();
  double gamma(double shape);

  /// Blockwise Dirichlet draw into `out`.
  void dirichlet(std::span<const double> alpha, const IndicatorLayout& layout, std::span<double> out);

  /// Index drawn by inverse CDF from unnormalized log weights (-inf allowed).
  std::size_t categorical_log(std::span<const double> log_weights);

private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace streamlink
