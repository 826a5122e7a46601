#include "gcdlab/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "gcdlab/number_theory.hpp"

namespace gcdlab::sampling {

using number_theory::gcd;

namespace {

__extension__ typedef unsigned __int128 u128;

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::pair<Enum, std::string_view> (&table)[N],
                std::string_view what) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  throw std::invalid_argument("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

template <typename Enum, std::size_t N>
std::string_view enum_name(Enum e, const std::pair<Enum, std::string_view> (&table)[N]) {
  for (const auto& [value, name] : table) {
    if (value == e) return name;
  }
  return "?";
}

constexpr std::pair<OperandDist, std::string_view> kOperandNames[] = {
    {OperandDist::uniform, "uniform"},
    {OperandDist::log_uniform, "log_uniform"},
};

constexpr std::pair<OutcomeDist, std::string_view> kOutcomeNames[] = {
    {OutcomeDist::natural, "natural"},
    {OutcomeDist::mix_uniform, "mix_uniform"},
    {OutcomeDist::log_uniform, "log_uniform"},
    {OutcomeDist::inv_sqrt, "inv_sqrt"},
    {OutcomeDist::inv_power_1_5, "inv_power_1_5"},
    {OutcomeDist::uniform, "uniform"},
};

constexpr std::pair<LogRounding, std::string_view> kRoundingNames[] = {
    {LogRounding::floor, "floor"},
    {LogRounding::nearest, "nearest"},
};

constexpr std::pair<RationalTask, std::string_view> kTaskNames[] = {
    {RationalTask::compare, "compare"}, {RationalTask::int_div, "int_div"},
    {RationalTask::simplify, "simplify"}, {RationalTask::add, "add"},
    {RationalTask::multiply, "multiply"},
};

std::uint64_t parse_u64(const std::map<std::string, std::string>& kv, const std::string& key,
                        std::uint64_t fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::size_t used = 0;
  const auto v = std::stoull(it->second, &used);
  if (used != it->second.size()) throw std::invalid_argument("bad integer for " + key);
  return v;
}

std::uint64_t draw_operand(std::uint64_t limit, Rng& rng, OperandDist dist, LogRounding rounding) {
  return dist == OperandDist::uniform ? rng.uniform(1, limit)
                                      : sample_log_uniform_int(limit, rng, rounding);
}

}  // namespace

std::string_view to_string(OperandDist d) { return enum_name(d, kOperandNames); }
std::string_view to_string(OutcomeDist d) { return enum_name(d, kOutcomeNames); }
std::string_view to_string(LogRounding r) { return enum_name(r, kRoundingNames); }
std::string_view to_string(RationalTask t) { return enum_name(t, kTaskNames); }

OperandDist parse_operand_dist(std::string_view s) {
  return parse_enum(s, kOperandNames, "operand distribution");
}
OutcomeDist parse_outcome_dist(std::string_view s) {
  return parse_enum(s, kOutcomeNames, "outcome distribution");
}
LogRounding parse_log_rounding(std::string_view s) {
  return parse_enum(s, kRoundingNames, "log rounding");
}
RationalTask parse_rational_task(std::string_view s) {
  return parse_enum(s, kTaskNames, "rational task");
}

void SamplerConfig::validate() const {
  if (kmax < 1) throw std::invalid_argument("kmax must be >= 1");
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  if (outcome_dist != OutcomeDist::natural && M < kmax) {
    throw std::invalid_argument("M must be >= kmax");
  }
  if (!(mix_rho >= 0.0 && mix_rho <= 1.0)) {
    throw std::invalid_argument("mix_rho must lie in [0, 1]");
  }
}

std::vector<std::pair<std::string, std::string>> config_to_header(const SamplerConfig& cfg) {
  // Shortest text that parses back to the same double.
  char buf[32];
  const auto rho = std::string(buf, std::to_chars(buf, buf + sizeof buf, cfg.mix_rho).ptr);
  return {
      {"M", std::to_string(cfg.M)},
      {"kmax", std::to_string(cfg.kmax)},
      {"operand_dist", std::string(to_string(cfg.operand_dist))},
      {"outcome_dist", std::string(to_string(cfg.outcome_dist))},
      {"mix_rho", rho},
      {"log_rounding", std::string(to_string(cfg.log_rounding))},
      {"seed", std::to_string(cfg.seed)},
      {"shard", std::to_string(cfg.shard_id)},
      {"generator", std::string(Rng::kAlgorithm)},
  };
}

SamplerConfig config_from_header(const std::map<std::string, std::string>& kv) {
  SamplerConfig cfg;
  cfg.M = parse_u64(kv, "M", cfg.M);
  cfg.kmax = parse_u64(kv, "kmax", cfg.kmax);
  cfg.seed = parse_u64(kv, "seed", cfg.seed);
  cfg.shard_id = parse_u64(kv, "shard", cfg.shard_id);
  if (auto it = kv.find("operand_dist"); it != kv.end()) {
    cfg.operand_dist = parse_operand_dist(it->second);
  }
  if (auto it = kv.find("outcome_dist"); it != kv.end()) {
    cfg.outcome_dist = parse_outcome_dist(it->second);
  }
  if (auto it = kv.find("log_rounding"); it != kv.end()) {
    cfg.log_rounding = parse_log_rounding(it->second);
  }
  if (auto it = kv.find("mix_rho"); it != kv.end()) cfg.mix_rho = std::stod(it->second);
  if (auto it = kv.find("generator"); it != kv.end() && it->second != Rng::kAlgorithm) {
    throw std::invalid_argument("unsupported generator '" + it->second + "'");
  }
  cfg.validate();
  return cfg;
}

ExamplePair sample_uniform_pair(std::uint64_t M, Rng& rng) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  const auto a = rng.uniform(1, M);
  const auto b = rng.uniform(1, M);
  return {a, b, gcd(a, b)};
}

std::uint64_t sample_log_uniform_int(std::uint64_t M, Rng& rng, LogRounding rounding) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  const double x = rng.unit() * std::log(static_cast<double>(M));
  double v = std::exp(x);
  v = rounding == LogRounding::floor ? std::floor(v) : std::floor(v + 0.5);
  const auto n = static_cast<std::uint64_t>(v);
  return std::clamp<std::uint64_t>(n, 1, M);
}

CoprimeDraw sample_coprime_pair(std::uint64_t limit, Rng& rng, OperandDist operands,
                                LogRounding rounding) {
  if (limit < 1) throw std::invalid_argument("limit must be >= 1");
  CoprimeDraw draw;
  for (;;) {
    draw.a = draw_operand(limit, rng, operands, rounding);
    draw.b = draw_operand(limit, rng, operands, rounding);
    if (gcd(draw.a, draw.b) == 1) return draw;
    ++draw.rejections;
  }
}

double outcome_power(OutcomeDist dist) {
  switch (dist) {
    case OutcomeDist::uniform:
    case OutcomeDist::mix_uniform:
      return 0.0;
    case OutcomeDist::inv_sqrt:
      return 0.5;
    case OutcomeDist::log_uniform:
      return 1.0;
    case OutcomeDist::inv_power_1_5:
      return 1.5;
    case OutcomeDist::natural:
      break;
  }
  throw std::invalid_argument("outcome distribution '" + std::string(to_string(dist)) +
                              "' does not draw k directly");
}

OutcomeLaw::OutcomeLaw(OutcomeDist dist, std::uint64_t kmax) : power_(0.0), norm_(1.0) {
  if (kmax < 1) throw std::invalid_argument("kmax must be >= 1");
  // Natural outcomes never consult the law; mixtures use the uniform branch.
  power_ = dist == OutcomeDist::natural ? 0.0 : outcome_power(dist);
  norm_ = number_theory::harmonic_norm(kmax, power_);
  cdf_.resize(kmax);
  double acc = 0.0;
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    acc += pmf(k);
    cdf_[k - 1] = acc;
  }
  cdf_.back() = 1.0;
}

double OutcomeLaw::pmf(std::uint64_t k) const {
  if (k < 1 || k > cdf_.size()) return 0.0;
  return norm_ * std::pow(static_cast<double>(k), -power_);
}

std::uint64_t OutcomeLaw::sample(Rng& rng) const {
  const double u = rng.unit();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::uint64_t>(it - cdf_.begin()) + 1;
}

std::uint64_t sample_outcome_k(OutcomeDist dist, std::uint64_t kmax, Rng& rng) {
  if (dist == OutcomeDist::natural || dist == OutcomeDist::mix_uniform) {
    throw std::invalid_argument("sample_outcome_k: '" + std::string(to_string(dist)) +
                                "' is not an outcome law");
  }
  return OutcomeLaw(dist, kmax).sample(rng);
}

ExamplePair sample_pair_with_outcome(std::uint64_t k, std::uint64_t M, Rng& rng,
                                     OperandDist operands, LogRounding rounding) {
  if (k < 1 || k > M) throw std::invalid_argument("sample_pair_with_outcome: need 1 <= k <= M");
  const auto draw = sample_coprime_pair(M / k, rng, operands, rounding);
  return {k * draw.a, k * draw.b, k};
}

TrainingStream::TrainingStream(SamplerConfig cfg)
    : cfg_((cfg.validate(), cfg)), rng_(cfg.seed, cfg.shard_id), law_(cfg.outcome_dist, cfg.kmax) {}

ExamplePair TrainingStream::natural() {
  const auto a = draw_operand(cfg_.M, rng_, cfg_.operand_dist, cfg_.log_rounding);
  const auto b = draw_operand(cfg_.M, rng_, cfg_.operand_dist, cfg_.log_rounding);
  return {a, b, gcd(a, b)};
}

ExamplePair TrainingStream::with_outcome(std::uint64_t k) {
  return sample_pair_with_outcome(k, cfg_.M, rng_, cfg_.operand_dist, cfg_.log_rounding);
}

ExamplePair TrainingStream::next() {
  switch (cfg_.outcome_dist) {
    case OutcomeDist::natural:
      return natural();
    case OutcomeDist::mix_uniform:
      if (rng_.bernoulli(cfg_.mix_rho)) return with_outcome(law_.sample(rng_));
      return natural();
    default:
      return with_outcome(law_.sample(rng_));
  }
}

std::vector<ExamplePair> TrainingStream::take(std::size_t n) {
  std::vector<ExamplePair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(next());
  return out;
}

RationalExample make_compare(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  // a/b < c/d  <=>  a d < c b; operands up to 1e6 keep products below 2^64.
  const bool less = static_cast<u128>(a) * d < static_cast<u128>(c) * b;
  return {RationalTask::compare, {a, b, c, d}, {less ? 1u : 0u}};
}

RationalExample make_int_div(std::uint64_t m, std::uint64_t n, std::uint64_t p) {
  if (!(m < n)) throw std::invalid_argument("int_div requires m < n");
  return {RationalTask::int_div, {p * n + m, n}, {p}};
}

RationalExample make_simplify(std::uint64_t m, std::uint64_t n, std::uint64_t p) {
  const auto g = gcd(m, n);
  return {RationalTask::simplify, {p * m / g, p * n / g}, {m / g, n / g}};
}

RationalExample make_add(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  const auto num = a * d + c * b;
  const auto den = b * d;
  const auto g = gcd(num, den);
  return {RationalTask::add, {a, b, c, d}, {num / g, den / g}};
}

RationalExample make_multiply(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t d) {
  const auto num = a * c;
  const auto den = b * d;
  const auto g = gcd(num, den);
  return {RationalTask::multiply, {a, b, c, d}, {num / g, den / g}};
}

RationalExample gen_rational_task(RationalTask task, std::uint64_t M, Rng& rng) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  auto draw = [&] { return rng.uniform(1, M); };
  switch (task) {
    case RationalTask::compare: {
      const auto a = draw(), b = draw(), c = draw(), d = draw();
      return make_compare(a, b, c, d);
    }
    case RationalTask::add: {
      const auto a = draw(), b = draw(), c = draw(), d = draw();
      return make_add(a, b, c, d);
    }
    case RationalTask::multiply: {
      const auto a = draw(), b = draw(), c = draw(), d = draw();
      return make_multiply(a, b, c, d);
    }
    case RationalTask::simplify: {
      const auto m = draw(), n = draw(), p = draw();
      return make_simplify(m, n, p);
    }
    case RationalTask::int_div: {
      if (M < 2) throw std::invalid_argument("int_div requires M >= 2");
      std::uint64_t m = 0, n = 0;
      do {
        m = draw();
        n = draw();
      } while (!(m < n));
      return make_int_div(m, n, draw());
    }
  }
  throw std::invalid_argument("unknown rational task");
}

}  // namespace gcdlab::sampling
