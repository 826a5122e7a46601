#include "gcdlab/number_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gcdlab::number_theory {

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const auto r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Factorization factorize(std::uint64_t n) {
  if (n < 1 || n > kFactorizeLimit) {
    throw std::out_of_range("factorize: n must lie in [1, 1e9], got " + std::to_string(n));
  }
  Factorization f;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  if (n > 1) f.push_back({n, 1});
  return f;
}

std::vector<std::uint64_t> distinct_primes(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  for (const auto& pp : factorize(n)) primes.push_back(pp.prime);
  return primes;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  const auto f = factorize(n);
  return f.size() == 1 && f.front().exponent == 1;
}

bool as_prime_power(std::uint64_t n, PrimePower& out) {
  if (n < 2) return false;
  const auto f = factorize(n);
  if (f.size() != 1) return false;
  out = f.front();
  return true;
}

std::vector<std::uint64_t> divisor_products(const ExponentCaps& caps, std::uint64_t cap) {
  std::vector<std::uint64_t> values{1};
  if (cap < 1) return {};
  for (const auto& [p, max_e] : caps) {
    if (p < 2) throw std::invalid_argument("divisor_products: prime must be >= 2");
    const auto current = values;
    for (auto v : current) {
      std::uint64_t x = v;
      for (unsigned e = 1; e <= max_e; ++e) {
        if (x > cap / p) break;
        x *= p;
        values.push_back(x);
      }
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

ExponentCaps caps_for(const Factorization& f, unsigned exponent_cap) {
  ExponentCaps caps;
  for (const auto& pp : f) caps[pp.prime] = exponent_cap;
  return caps;
}

double harmonic_norm(std::uint64_t kmax, double power) {
  if (kmax < 1) throw std::invalid_argument("harmonic_norm: kmax must be >= 1");
  // Smallest terms first keeps the rounding error down for large kmax.
  double sum = 0.0;
  for (std::uint64_t i = kmax; i >= 1; --i) sum += std::pow(static_cast<double>(i), -power);
  return 1.0 / sum;
}

}  // namespace gcdlab::number_theory
