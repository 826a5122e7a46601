#include "gcdlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gcdlab::oracle {

namespace nt = number_theory;

namespace {

constexpr std::pair<Provenance, std::string_view> kProvenanceNames[] = {
    {Provenance::base_divisor, "base_divisor"},
    {Provenance::grokked, "grokked"},
    {Provenance::unspecified, "unspecified"},
};

}  // namespace

std::string_view to_string(Provenance p) {
  for (const auto& [v, name] : kProvenanceNames) {
    if (v == p) return name;
  }
  return "?";
}

Provenance parse_provenance(std::string_view s) {
  for (const auto& [v, name] : kProvenanceNames) {
    if (name == s) return v;
  }
  throw std::invalid_argument("unknown provenance '" + std::string(s) + "'");
}

GrokSpec::GrokSpec(std::vector<std::uint64_t> prime_powers) : prime_powers_(std::move(prime_powers)) {
  for (auto q : prime_powers_) {
    nt::PrimePower pp{};
    if (!nt::as_prime_power(q, pp)) {
      throw std::invalid_argument("grokked value " + std::to_string(q) + " is not a prime power");
    }
  }
}

ExponentCaps GrokSpec::caps() const {
  ExponentCaps caps;
  for (auto q : prime_powers_) {
    nt::PrimePower pp{};
    nt::as_prime_power(q, pp);
    auto& e = caps[pp.prime];
    e = std::max(e, pp.exponent);
  }
  return caps;
}

RuleSet::RuleSet(std::vector<std::uint64_t> elements, std::uint64_t cap,
                 std::vector<Provenance> provenance)
    : elements_(std::move(elements)), provenance_(std::move(provenance)), cap_(cap) {
  if (!provenance_.empty() && provenance_.size() != elements_.size()) {
    throw std::invalid_argument("RuleSet: provenance column length mismatch");
  }
  if (provenance_.empty()) provenance_.assign(elements_.size(), Provenance::unspecified);

  std::vector<std::size_t> order(elements_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return elements_[x] < elements_[y]; });
  std::vector<std::uint64_t> sorted;
  std::vector<Provenance> tags;
  for (auto i : order) {
    sorted.push_back(elements_[i]);
    tags.push_back(provenance_[i]);
  }
  elements_ = std::move(sorted);
  provenance_ = std::move(tags);

  if (elements_.empty() || elements_.front() != 1) {
    throw std::invalid_argument("RuleSet must contain 1");
  }
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end()) {
    throw std::invalid_argument("RuleSet elements must be distinct");
  }
  if (elements_.back() > cap_) {
    throw std::invalid_argument("RuleSet element " + std::to_string(elements_.back()) +
                                " exceeds cap " + std::to_string(cap_));
  }
}

Provenance RuleSet::provenance(std::uint64_t d) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), d);
  if (it == elements_.end() || *it != d) {
    throw std::out_of_range("RuleSet: " + std::to_string(d) + " is not an element");
  }
  return provenance_[static_cast<std::size_t>(it - elements_.begin())];
}

bool RuleSet::contains(std::uint64_t d) const {
  return std::binary_search(elements_.begin(), elements_.end(), d);
}

std::vector<std::uint64_t> RuleSet::restricted(std::uint64_t limit) const {
  auto end = std::upper_bound(elements_.begin(), elements_.end(), limit);
  return {elements_.begin(), end};
}

RuleSet build_rule_set(std::uint64_t base, const ExponentCaps& caps, const GrokSpec& grok,
                       std::uint64_t cap) {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  const auto base_primes = nt::distinct_primes(base);
  auto is_base_prime = [&](std::uint64_t p) {
    return std::find(base_primes.begin(), base_primes.end(), p) != base_primes.end();
  };

  ExponentCaps all;
  for (const auto& [p, e] : caps) {
    if (!is_base_prime(p)) {
      throw std::invalid_argument("exponent cap given for " + std::to_string(p) +
                                  ", which does not divide the base");
    }
    all[p] = e;
  }
  for (auto p : base_primes) {
    if (all.contains(p)) continue;
    if (cap == RuleSet::kNoCap) {
      throw std::invalid_argument("uncapped rule set needs an exponent cap for every prime");
    }
    all[p] = 64;  // bounded by `cap` during enumeration
  }
  for (const auto& [p, e] : grok.caps()) {
    auto& slot = all[p];
    slot = std::max(slot, e);
  }

  const auto values = nt::divisor_products(all, cap);
  std::vector<Provenance> tags;
  for (auto v : values) {
    bool grokked = false;
    for (const auto& [p, e] : all) {
      if (v % p == 0 && !is_base_prime(p)) grokked = true;
    }
    tags.push_back(grokked ? Provenance::grokked : Provenance::base_divisor);
  }
  return RuleSet(values, cap, std::move(tags));
}

std::uint64_t predict_f(std::uint64_t k, const RuleSet& rules) {
  if (k < 1) throw std::invalid_argument("predict_f requires k >= 1");
  const auto& el = rules.elements();
  auto it = std::upper_bound(el.begin(), el.end(), k);
  while (it != el.begin()) {
    --it;
    if (k % *it == 0) return *it;
  }
  return 1;
}

double exact_accuracy(const RuleSet& rules) {
  const auto& el = rules.elements();
  double sum = 0.0;
  for (auto it = el.rbegin(); it != el.rend(); ++it) {
    const double d = static_cast<double>(*it);
    sum += 1.0 / (d * d);
  }
  return sum * 6.0 / (std::numbers::pi * std::numbers::pi);
}

double prime_accuracy(std::uint64_t p) {
  const double pp = static_cast<double>(p) * static_cast<double>(p);
  return 6.0 / (std::numbers::pi * std::numbers::pi) * pp / (pp - 1.0);
}

double theoretical_accuracy_base(std::uint64_t base) {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  const auto primes = nt::distinct_primes(base);
  const double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  double miss = std::pow(zeta2, static_cast<double>(primes.size()) - 1.0);
  for (auto p : primes) miss *= 1.0 - prime_accuracy(p);
  return 1.0 - miss;
}

double smooth_accuracy_base(std::uint64_t base) {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  double acc = 6.0 / (std::numbers::pi * std::numbers::pi);
  for (auto p : nt::distinct_primes(base)) {
    const double pp = static_cast<double>(p) * static_cast<double>(p);
    acc *= pp / (pp - 1.0);
  }
  return acc;
}

std::vector<Misprediction> incorrect_gcds(const RuleSet& rules, std::uint64_t cap) {
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  std::vector<Misprediction> out;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    const auto f = predict_f(k, rules);
    if (f != k) out.push_back({k, f});
  }
  return out;
}

void write_rule_set(std::ostream& os, const RuleSet& rules) {
  if (rules.cap() == RuleSet::kNoCap) {
    os << "# cap=none\n";
  } else {
    os << "# cap=" << rules.cap() << '\n';
  }
  for (auto d : rules.elements()) os << d << '\t' << to_string(rules.provenance(d)) << '\n';
}

RuleSet read_rule_set(std::istream& is) {
  std::uint64_t cap = 100;
  std::vector<std::uint64_t> values;
  std::vector<Provenance> tags;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind("# cap=", 0) == 0) {
        const auto v = line.substr(6);
        cap = v == "none" ? RuleSet::kNoCap : std::stoull(v);
      }
      continue;
    }
    std::istringstream fields(line);
    std::uint64_t d = 0;
    std::string tag;
    if (!(fields >> d)) {
      throw std::invalid_argument("rule set line " + std::to_string(lineno) + ": expected integer");
    }
    fields >> tag;
    values.push_back(d);
    tags.push_back(tag.empty() ? Provenance::unspecified : parse_provenance(tag));
  }
  return RuleSet(std::move(values), cap, std::move(tags));
}

}  // namespace gcdlab::oracle
