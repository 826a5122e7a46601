#pragma once

// Deterministic generators for every operand and outcome distribution used
// in the GCD experiments, plus the rational-arithmetic task generators.

#include <cstdint>
#include <iterator>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gcdlab/random.hpp"

namespace gcdlab::sampling {

enum class OperandDist { uniform, log_uniform };

/// Law of the gcd in the stream. `natural` leaves it to the operands
/// (6/(pi^2 k^2) under uniform operands); the others draw k first.
enum class OutcomeDist { natural, mix_uniform, log_uniform, inv_sqrt, inv_power_1_5, uniform };

/// How e^x is turned into an integer by the log-uniform operand sampler.
enum class LogRounding { floor, nearest };

std::string_view to_string(OperandDist d);
std::string_view to_string(OutcomeDist d);
std::string_view to_string(LogRounding r);
OperandDist parse_operand_dist(std::string_view s);
OutcomeDist parse_outcome_dist(std::string_view s);
LogRounding parse_log_rounding(std::string_view s);

struct SamplerConfig {
  std::uint64_t M = 1'000'000;
  std::uint64_t kmax = 100;
  OperandDist operand_dist = OperandDist::uniform;
  OutcomeDist outcome_dist = OutcomeDist::natural;
  double mix_rho = 0.05;
  LogRounding log_rounding = LogRounding::floor;
  std::uint64_t seed = 0;
  std::uint64_t shard_id = 0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Ordered key=value pairs; round-trips through config_from_header().
std::vector<std::pair<std::string, std::string>> config_to_header(const SamplerConfig& cfg);
SamplerConfig config_from_header(const std::map<std::string, std::string>& kv);

struct ExamplePair {
  std::uint64_t a = 1;
  std::uint64_t b = 1;
  std::uint64_t g = 1;
  friend bool operator==(const ExamplePair&, const ExamplePair&) = default;
};

ExamplePair sample_uniform_pair(std::uint64_t M, Rng& rng);

/// Draws x uniformly on [0, ln M] and rounds e^x, clamped to [1, M].
std::uint64_t sample_log_uniform_int(std::uint64_t M, Rng& rng,
                                     LogRounding rounding = LogRounding::floor);

struct CoprimeDraw {
  std::uint64_t a = 1;
  std::uint64_t b = 1;
  std::uint64_t rejections = 0;
};

/// Rejection-samples a pair with gcd 1, components drawn from `operands`
/// on [1, limit].
CoprimeDraw sample_coprime_pair(std::uint64_t limit, Rng& rng,
                                OperandDist operands = OperandDist::uniform,
                                LogRounding rounding = LogRounding::floor);

/// Discrete law on [1, kmax] with P(k) proportional to k^-power.
class OutcomeLaw {
 public:
  OutcomeLaw(OutcomeDist dist, std::uint64_t kmax);

  double pmf(std::uint64_t k) const;
  std::uint64_t sample(Rng& rng) const;
  double power() const { return power_; }
  std::uint64_t kmax() const { return static_cast<std::uint64_t>(cdf_.size()); }

 private:
  double power_;
  double norm_;
  std::vector<double> cdf_;
};

/// Exponent of the k^-power law for the outcome-controlled distributions.
double outcome_power(OutcomeDist dist);

std::uint64_t sample_outcome_k(OutcomeDist dist, std::uint64_t kmax, Rng& rng);

/// (k a, k b) with (a, b) coprime on [1, floor(M / k)].
ExamplePair sample_pair_with_outcome(std::uint64_t k, std::uint64_t M, Rng& rng,
                                     OperandDist operands = OperandDist::uniform,
                                     LogRounding rounding = LogRounding::floor);

/// Endless stream of examples for one (seed, shard).
class TrainingStream {
 public:
  explicit TrainingStream(SamplerConfig cfg);

  ExamplePair next();
  std::vector<ExamplePair> take(std::size_t n);
  const SamplerConfig& config() const { return cfg_; }

  class iterator {
   public:
    using value_type = ExamplePair;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(TrainingStream* s) : stream_(s), current_(s->next()) {}
    const ExamplePair& operator*() const { return current_; }
    iterator& operator++() {
      current_ = stream_->next();
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator&, std::default_sentinel_t) { return false; }

   private:
    TrainingStream* stream_ = nullptr;
    ExamplePair current_;
  };

  iterator begin() { return iterator(this); }
  std::default_sentinel_t end() const { return {}; }

 private:
  ExamplePair natural();
  ExamplePair with_outcome(std::uint64_t k);

  SamplerConfig cfg_;
  Rng rng_;
  OutcomeLaw law_;
};

// Rational arithmetic tasks.

enum class RationalTask { compare, int_div, simplify, add, multiply };

std::string_view to_string(RationalTask t);
RationalTask parse_rational_task(std::string_view s);

struct RationalExample {
  RationalTask task;
  std::vector<std::uint64_t> input;
  /// compare: {1} if a/b < c/d else {0}; int_div: {p}; others: {num, den}.
  std::vector<std::uint64_t> target;
};

RationalExample make_compare(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);
RationalExample make_int_div(std::uint64_t m, std::uint64_t n, std::uint64_t p);
RationalExample make_simplify(std::uint64_t m, std::uint64_t n, std::uint64_t p);
RationalExample make_add(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);
RationalExample make_multiply(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

/// Samples one example; all draws are uniform on [1, M]. int_div redraws
/// (m, n) until m < n, so M must be at least 2.
RationalExample gen_rational_task(RationalTask task, std::uint64_t M, Rng& rng);

}  // namespace gcdlab::sampling
