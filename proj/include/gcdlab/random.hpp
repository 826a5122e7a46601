#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gcdlab {

/// Seedable 64-bit generator with portable derived distributions.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Its state is initialised through std::seed_seq from the four
/// 32-bit halves of (seed, shard), also fully specified by the standard.
/// Integer and real variates are derived here (Lemire's multiply-shift
/// rejection and 53-bit mantissa fill) rather than through the
/// implementation-defined std:: distributions, so a stream is reproducible
/// on any conforming toolchain.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/seed_seq(seed,shard)";

  explicit Rng(std::uint64_t seed, std::uint64_t shard = 0);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [lo, hi], inclusive.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gcdlab
