#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

namespace gcdlab::number_theory {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime decomposition, primes strictly increasing.
using Factorization = std::vector<PrimePower>;

/// Largest exponent allowed per prime in divisor_products().
using ExponentCaps = std::map<std::uint64_t, unsigned>;

inline constexpr std::uint64_t kFactorizeLimit = 1'000'000'000;

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);

/// Trial division; n must lie in [1, 1e9].
Factorization factorize(std::uint64_t n);

std::vector<std::uint64_t> distinct_primes(std::uint64_t n);

bool is_prime(std::uint64_t n);

/// If n = p^e with p prime and e >= 1, returns {p, e}.
bool as_prime_power(std::uint64_t n, PrimePower& out);

/// All products of p^e (e <= caps[p]) not exceeding `cap`, ascending.
/// Always contains 1.
std::vector<std::uint64_t> divisor_products(const ExponentCaps& caps, std::uint64_t cap);

/// Caps taken from a factorization: every prime of `f` with the given cap.
ExponentCaps caps_for(const Factorization& f, unsigned exponent_cap);

/// Asymptotic probability that two uniform integers have gcd k: 6/(pi^2 k^2).
inline double cesaro_pmf(std::uint64_t k) {
  const double kk = static_cast<double>(k);
  return 6.0 / (std::numbers::pi * std::numbers::pi * kk * kk);
}

/// C = 1 / sum_{i=1..kmax} i^-power.
double harmonic_norm(std::uint64_t kmax, double power);

}  // namespace gcdlab::number_theory
