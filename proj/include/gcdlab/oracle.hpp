#pragma once

// Rule-based stand-in for a trained model. A model is summarised by the set D
// of values it predicts correctly; for a pair with gcd k it outputs
// f(k) = max{d in D : d | k}.

#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gcdlab/number_theory.hpp"

namespace gcdlab::oracle {

using number_theory::ExponentCaps;

enum class Provenance { base_divisor, grokked, unspecified };

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view s);

/// Prime powers acquired on top of the divisors of the base, e.g. {2, 3, 4, 9}.
class GrokSpec {
 public:
  GrokSpec() = default;
  /// Throws std::invalid_argument if an entry is not a prime power.
  explicit GrokSpec(std::vector<std::uint64_t> prime_powers);

  const std::vector<std::uint64_t>& prime_powers() const { return prime_powers_; }
  /// Largest exponent listed for each prime.
  ExponentCaps caps() const;
  bool empty() const { return prime_powers_.empty(); }

 private:
  std::vector<std::uint64_t> prime_powers_;
};

class RuleSet {
 public:
  static constexpr std::uint64_t kNoCap = std::numeric_limits<std::uint64_t>::max();

  /// Elements must be distinct, contain 1 and not exceed `cap`. Order is free.
  RuleSet(std::vector<std::uint64_t> elements, std::uint64_t cap = 100,
          std::vector<Provenance> provenance = {});

  const std::vector<std::uint64_t>& elements() const { return elements_; }
  Provenance provenance(std::uint64_t d) const;
  std::uint64_t cap() const { return cap_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(std::uint64_t d) const;

  /// Elements no larger than `limit`.
  std::vector<std::uint64_t> restricted(std::uint64_t limit) const;

  friend bool operator==(const RuleSet& x, const RuleSet& y) {
    return x.elements_ == y.elements_ && x.cap_ == y.cap_;
  }

 private:
  std::vector<std::uint64_t> elements_;
  std::vector<Provenance> provenance_;
  std::uint64_t cap_;
};

/// Products (up to `cap`) of p^e for every prime p of `base` with
/// e <= caps[p], times products of the grokked prime powers. Primes of the
/// base missing from `caps` are bounded by `cap` alone; with cap == kNoCap
/// every exponent must be given.
RuleSet build_rule_set(std::uint64_t base, const ExponentCaps& caps, const GrokSpec& grok = {},
                       std::uint64_t cap = 100);

std::uint64_t predict_f(std::uint64_t k, const RuleSet& rules);

/// sum_k P(gcd = k) [f(k) = k] under the asymptotic law, i.e.
/// (6/pi^2) sum_{d in D} d^-2.
double exact_accuracy(const RuleSet& rules);

/// Single-prime accuracy (6/pi^2) p^2/(p^2 - 1).
double prime_accuracy(std::uint64_t p);

/// Closed form 1 - (pi^2/6)^(m-1) prod_i (1 - A(p_i)) over the m distinct
/// primes of `base`. Equals prime_accuracy(p) for prime powers.
double theoretical_accuracy_base(std::uint64_t base);

/// Probability mass of gcds whose primes all divide `base`:
/// (6/pi^2) prod_i p_i^2/(p_i^2 - 1). This is the limit of exact_accuracy()
/// over all products of primes of the base; it agrees with
/// theoretical_accuracy_base() only when the base is a prime power.
double smooth_accuracy_base(std::uint64_t base);

struct Misprediction {
  std::uint64_t k;
  std::uint64_t predicted;
  friend bool operator==(const Misprediction&, const Misprediction&) = default;
};

std::vector<Misprediction> incorrect_gcds(const RuleSet& rules, std::uint64_t cap = 100);

/// One integer per line with a provenance column; "# cap=N" header.
void write_rule_set(std::ostream& os, const RuleSet& rules);
RuleSet read_rule_set(std::istream& is);

// Rule sets of trained models, as observed.

struct Preset {
  std::string name;
  std::uint64_t base;
  ExponentCaps caps;
  std::vector<std::uint64_t> grok;
  /// Correct-GCD count reported alongside the experiment.
  std::size_t reported_correct;
  std::string description;
};

std::span<const Preset> presets();
const Preset& find_preset(std::string_view name);
/// Natural-outcome preset for a base, if the base experiments covered it.
const Preset* base_preset(std::uint64_t base);
RuleSet build_rule_set(const Preset& p, std::uint64_t cap = 100);

}  // namespace gcdlab::oracle
