#pragma once

// Fixture loaders and small reference implementations used as independent
// oracles by the tests. Nothing here calls into the library under test
// except for the record type.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcdlab/analyzer.hpp"

namespace support {

using gcdlab::analyzer::PredictionRecord;

inline std::string data_path(const std::string& name) {
  return std::string(GCDLAB_TEST_DATA) + "/" + name;
}

// Rows of a whitespace-separated table, '#' lines skipped.
inline std::vector<std::vector<double>> read_table(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::vector<double> row;
    double v = 0;
    while (fields >> v) row.push_back(v);
    rows.push_back(row);
  }
  return rows;
}

struct Share {
  std::uint64_t pred;
  double percent;
};

// Expands per-gcd prediction shares into `per_k` records. Shares are
// converted to counts by rounding; the rest goes to `filler` (malformed
// when empty).
inline void expand(std::vector<PredictionRecord>& out, std::uint64_t k,
                   const std::vector<Share>& shares, std::int64_t epoch,
                   std::optional<std::uint64_t> filler = std::nullopt, std::uint64_t per_k = 1000) {
  std::uint64_t used = 0;
  std::uint64_t i = 1;
  const auto push = [&](std::optional<std::uint64_t> pred, std::uint64_t n) {
    for (std::uint64_t j = 0; j < n; ++j, ++i) out.push_back({k * i, k * (i + 1), k, pred, epoch});
  };
  for (const auto& s : shares) {
    const auto n = static_cast<std::uint64_t>(std::llround(s.percent / 100.0 * per_k));
    push(s.pred, n);
    used += n;
  }
  if (used > per_k) throw std::runtime_error("fixture shares exceed 100%");
  push(filler, per_k - used);
}

/// Per-gcd prediction table for one base, as records.
inline std::vector<PredictionRecord> detailed_records(std::uint64_t base) {
  std::vector<PredictionRecord> out;
  for (const auto& row : read_table("detailed_predictions.tsv")) {
    if (static_cast<std::uint64_t>(row[0]) != base) continue;
    expand(out, static_cast<std::uint64_t>(row[1]),
           {{static_cast<std::uint64_t>(row[2]), row[3]}}, 0);
  }
  return out;
}

/// Base-10 uniform-outcome epochs. At epoch 267 the predictions for gcds of
/// class 1 not going to 19 go to 11.
inline std::vector<PredictionRecord> uniform10_records() {
  std::vector<PredictionRecord> out;
  for (const auto& row : read_table("uniform_outcomes_base10.tsv")) {
    const auto epoch = static_cast<std::int64_t>(row[0]);
    const auto k = static_cast<std::uint64_t>(row[1]);
    const auto pred = static_cast<std::uint64_t>(row[2]);
    std::optional<std::uint64_t> filler;
    if (epoch == 267 && pred == 19) filler = 11;
    expand(out, k, {{pred, row[3]}}, epoch, filler);
  }
  return out;
}

/// Base-1000 uniform-outcome epoch with spread predictions.
inline std::vector<PredictionRecord> uniform1000_records() {
  std::map<std::uint64_t, std::vector<Share>> shares;
  for (const auto& row : read_table("uniform_outcomes_base1000_epoch400.tsv")) {
    shares[static_cast<std::uint64_t>(row[0])].push_back(
        {static_cast<std::uint64_t>(row[1]), row[2]});
  }
  std::vector<PredictionRecord> out;
  for (const auto& [k, s] : shares) expand(out, k, s, 400);
  return out;
}

// Reference arithmetic -------------------------------------------------------

inline std::uint64_t ref_gcd(std::uint64_t a, std::uint64_t b) {
  // Binary gcd, unlike the library's Euclid.
  if (a == 0) return b;
  if (b == 0) return a;
  unsigned shift = 0;
  while (((a | b) & 1) == 0) {
    a >>= 1;
    b >>= 1;
    ++shift;
  }
  while ((a & 1) == 0) a >>= 1;
  while (b != 0) {
    while ((b & 1) == 0) b >>= 1;
    if (a > b) std::swap(a, b);
    b -= a;
  }
  return a << shift;
}

// prime -> exponent, by trial division.
inline std::map<std::uint64_t, unsigned> ref_factor(std::uint64_t n) {
  std::map<std::uint64_t, unsigned> f;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++f[p];
      n /= p;
    }
  }
  if (n > 1) ++f[n];
  return f;
}

/// Elements of [1, cap] whose every prime power p^e satisfies either
/// p | base and e <= base_caps[p] (unbounded when absent), or p^e divides
/// some listed grokked prime power.
inline std::vector<std::uint64_t> ref_rule_set(std::uint64_t base,
                                               const std::map<std::uint64_t, unsigned>& base_caps,
                                               const std::vector<std::uint64_t>& grok,
                                               std::uint64_t cap = 100) {
  std::map<std::uint64_t, unsigned> grok_caps;
  for (auto q : grok) {
    const auto f = ref_factor(q);
    auto& e = grok_caps[f.begin()->first];
    e = std::max(e, f.begin()->second);
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    bool ok = true;
    for (const auto& [p, e] : ref_factor(k)) {
      unsigned allowed = 0;
      if (base % p == 0) {
        auto it = base_caps.find(p);
        allowed = it == base_caps.end() ? 64u : it->second;
      }
      if (auto it = grok_caps.find(p); it != grok_caps.end()) allowed = std::max(allowed, it->second);
      if (e > allowed) ok = false;
    }
    if (ok) out.push_back(k);
  }
  return out;
}

/// Largest element of `set` dividing k.
inline std::uint64_t ref_f(std::uint64_t k, const std::vector<std::uint64_t>& set) {
  std::uint64_t best = 1;
  for (auto d : set) {
    if (k % d == 0 && d > best) best = d;
  }
  return best;
}

/// Base-B digits of n, most significant first, via string-free repeated
/// division into a reversed buffer.
inline std::vector<std::uint64_t> ref_digits(std::uint64_t n, std::uint64_t base) {
  std::vector<std::uint64_t> rev;
  do {
    rev.push_back(n % base);
    n /= base;
  } while (n);
  return {rev.rbegin(), rev.rend()};
}

}  // namespace support
