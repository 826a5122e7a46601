#include <algorithm>
#include <stdexcept>

#include "gcdlab/oracle.hpp"

namespace gcdlab::oracle {
namespace {

// Caps list the learned powers of the primes of the base; `grok` lists
// prime powers picked up beyond them. Where a reported count disagrees
// with the product closure of the listed sets, the listed sets win
// and the count is kept in `reported_correct` for comparison.
const std::vector<Preset>& table() {
  static const std::vector<Preset> kPresets = {
      // Uniform operands, natural outcomes.
      {"uniform-operands/2", 2, {{2, 6}}, {}, 7, "powers of 2 up to 64"},
      {"uniform-operands/3", 3, {{3, 4}}, {}, 5, "powers of 3 up to 81"},
      {"uniform-operands/4", 4, {{2, 6}}, {}, 7, "powers of 2 up to 64"},
      {"uniform-operands/5", 5, {{5, 2}}, {}, 3, "1, 5, 25"},
      {"uniform-operands/6", 6, {{2, 5}, {3, 4}}, {}, 19, "3-smooth except 64"},
      {"uniform-operands/7", 7, {{7, 2}}, {}, 3, "1, 7, 49"},
      {"uniform-operands/10", 10, {{2, 4}, {5, 2}}, {}, 13, "{1,2,4,8,16} x {1,5,25}"},
      {"uniform-operands/11", 11, {{11, 1}}, {}, 2, "1, 11"},
      {"uniform-operands/12", 12, {{2, 6}, {3, 3}}, {}, 19, "3-smooth except 81"},
      {"uniform-operands/15", 15, {{3, 3}, {5, 2}}, {}, 9, "{1,3,9,27} x {1,5,25}"},
      {"uniform-operands/30", 30, {{2, 3}, {3, 3}, {5, 2}}, {}, 27,
       "{1,2,4,8} x {1,3,9,27} x {1,5,25}"},
      {"uniform-operands/31", 31, {{31, 1}}, {}, 2, "1, 31"},
      {"uniform-operands/60", 60, {{2, 4}, {3, 2}, {5, 2}}, {}, 28, "divisors of 60^2"},
      {"uniform-operands/100", 100, {{2, 4}, {5, 2}}, {}, 13, "{1,2,4,8,16} x {1,5,25}"},
      {"uniform-operands/210", 210, {{2, 2}, {3, 2}, {5, 2}, {7, 2}}, {}, 32,
       "divisors of 210^2"},
      {"uniform-operands/211", 211, {{211, 1}}, {}, 1, "1"},
      {"uniform-operands/420", 420, {{2, 4}, {3, 2}, {5, 2}, {7, 1}}, {}, 38,
       "{1..16} x {1,3,9} x {1,5,25} x {1,7}"},
      {"uniform-operands/997", 997, {{997, 1}}, {}, 1, "1"},
      {"uniform-operands/1000", 1000, {{2, 5}, {5, 2}}, {}, 14, "{1..32} x {1,5,25}"},
      {"uniform-operands/1024", 1024, {{2, 6}}, {}, 7, "powers of 2 up to 64"},

      // Large bases, natural outcomes, after grokking.
      {"grokked/625", 625, {{5, 2}}, {2}, 6, ""},
      {"grokked/2017", 2017, {}, {2, 3}, 4, ""},
      {"grokked/2021", 2021, {{43, 1}, {47, 1}}, {2, 3}, 10, ""},
      {"grokked/2023", 2023, {{7, 1}, {17, 1}}, {3, 2, 4}, 16, ""},
      {"grokked/2025", 2025, {{3, 4}, {5, 2}}, {2, 4, 8}, 28, ""},
      {"grokked/2187", 2187, {{3, 4}}, {2, 4, 5}, 20, ""},
      {"grokked/2197", 2197, {{13, 1}}, {2, 3, 4}, 11, ""},
      {"grokked/2209", 2209, {{47, 1}}, {2, 3, 9}, 8, ""},
      {"grokked/2401", 2401, {{7, 2}}, {2, 3}, 10, ""},
      {"grokked/2401b", 2401, {{7, 2}}, {3, 2, 4}, 14, "second run"},
      {"grokked/2744", 2744, {{2, 5}, {7, 2}}, {3, 5}, 30, ""},
      {"grokked/3125", 3125, {{5, 2}}, {2, 3, 4}, 16, ""},
      {"grokked/3375", 3375, {{3, 3}, {5, 2}}, {2, 4}, 23, ""},
      {"grokked/4000", 4000, {{2, 5}, {5, 2}}, {3}, 24, ""},
      {"grokked/4913", 4913, {{17, 1}}, {2, 3, 4, 5}, 17, ""},
      {"grokked/5000", 5000, {{2, 5}, {5, 2}}, {3, 9}, 28, ""},
      {"grokked/10000", 10000, {{2, 4}, {5, 2}}, {3}, 22, ""},

      // Uniform operands, log-uniform outcomes.
      {"log-outcomes/6", 6, {{2, 6}, {3, 4}}, {}, 20, "learns 64"},
      {"log-outcomes/10", 10, {{2, 5}, {5, 2}}, {}, 14, "learns 32"},
      {"log-outcomes/12", 12, {{2, 6}, {3, 4}}, {}, 20, "learns 81"},
      {"log-outcomes/15", 15, {{3, 4}, {5, 2}}, {}, 10, "learns 81"},
      {"log-outcomes/30", 30, {{2, 4}, {3, 2}, {5, 2}}, {29, 31}, 36, "learns 16, 29, 31"},
      {"log-outcomes/60", 60, {{2, 6}, {3, 3}, {5, 2}}, {}, 33, "learns 27, 32, 64"},
      {"log-outcomes/100", 100, {{2, 6}, {5, 2}}, {}, 15, "learns 32, 64"},
      {"log-outcomes/211", 211, {}, {4, 3, 5, 7}, 18, "learns 2, 3, 4, 5, 7"},
      {"log-outcomes/420", 420, {{2, 4}, {3, 2}, {5, 2}, {7, 2}}, {13}, 47, "learns 13, 49"},
      {"log-outcomes/625", 625, {{5, 2}}, {4}, 9, "learns 4"},
      {"log-outcomes/1000", 1000, {{2, 6}, {5, 2}}, {9}, 31, "learns 9, 32, 64"},
      {"log-outcomes/2017", 2017, {}, {2, 9}, 6, "learns 9"},
      {"log-outcomes/2401", 2401, {{7, 2}}, {3, 4, 5}, 16, "learns 5"},
      {"log-outcomes/4000", 4000, {{2, 6}, {5, 2}}, {9}, 31, "learns 9, 64"},
      {"log-outcomes/5000", 5000, {{2, 6}, {5, 2}}, {9}, 30, "learns 64"},
      {"log-outcomes/10000", 10000, {{2, 5}, {5, 2}}, {7, 9}, 40, "learns 7, 9, 32"},
      {"log-outcomes/10000b", 10000, {{2, 6}, {5, 2}}, {7, 27, 13}, 62,
       "learns 7, 9, 13, 27, 32, 64"},

      // Log-uniform operands: every prime up to 23, 27 values under 100 missed.
      {"log-operands/2401", 2401, {{7, 1}}, {64, 27, 25, 11, 13, 17, 19, 23}, 73,
       "primes 29..97 and 49, 81 not learned"},
  };
  return kPresets;
}

}  // namespace

std::span<const Preset> presets() { return table(); }

const Preset& find_preset(std::string_view name) {
  for (const auto& p : table()) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

const Preset* base_preset(std::uint64_t base) {
  const auto name = "uniform-operands/" + std::to_string(base);
  for (const auto& p : table()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

RuleSet build_rule_set(const Preset& p, std::uint64_t cap) {
  return build_rule_set(p.base, p.caps, GrokSpec(p.grok), cap);
}

}  // namespace gcdlab::oracle
