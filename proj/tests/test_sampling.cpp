#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "gcdlab/number_theory.hpp"
#include "gcdlab/sampling.hpp"
#include "support.hpp"

using namespace gcdlab;
using namespace gcdlab::sampling;

namespace {

// Upper 0.999 quantile of chi-square, Wilson-Hilferty approximation.
double chi2_critical(double df) {
  const double z = 3.090232;
  const double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  return df * t * t * t;
}

double chi2(const std::map<std::uint64_t, std::uint64_t>& counts,
            const std::map<std::uint64_t, double>& expected_p, std::uint64_t n) {
  double s = 0.0;
  for (const auto& [k, p] : expected_p) {
    const double e = p * static_cast<double>(n);
    const double o = counts.contains(k) ? static_cast<double>(counts.at(k)) : 0.0;
    s += (o - e) * (o - e) / e;
  }
  return s;
}

// Binomial z-score of a count.
double z_score(std::uint64_t count, std::uint64_t n, double p) {
  const double nn = static_cast<double>(n);
  return (static_cast<double>(count) - nn * p) / std::sqrt(nn * p * (1 - p));
}

}  // namespace

TEST_CASE("Rng is reproducible and shard-separated") {
  Rng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool differs_shard = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs_shard |= x != c.next();
    differs_seed |= x != d.next();
  }
  CHECK(differs_shard);
  CHECK(differs_seed);
  // Seeds that only differ in their upper half must still differ.
  CHECK(Rng(1).next() != Rng(1 + (std::uint64_t{1} << 32)).next());
}

TEST_CASE("Rng seeds mt19937_64 from the 32-bit halves of seed and shard") {
  const std::uint64_t seed = 0x0123456789abcdefULL, shard = 0xfedcba9876543210ULL;
  Rng r(seed, shard);
  std::seed_seq seq{0x89abcdefu, 0x01234567u, 0x76543210u, 0xfedcba98u};
  std::mt19937_64 ref(seq);
  for (int i = 0; i < 10; ++i) CHECK(r.next() == ref());
}

TEST_CASE("Rng::uniform is unbiased over a small range") {
  Rng r(3);
  std::map<std::uint64_t, std::uint64_t> counts;
  std::map<std::uint64_t, double> p;
  const std::uint64_t n = 600000;
  for (std::uint64_t i = 0; i < n; ++i) ++counts[r.uniform(1, 6)];
  for (std::uint64_t k = 1; k <= 6; ++k) p[k] = 1.0 / 6;
  CHECK(counts.size() == 6);
  CHECK(chi2(counts, p, n) < chi2_critical(5));
  CHECK(r.uniform(7, 7) == 7);
  CHECK_THROWS_AS(r.uniform(8, 7), std::invalid_argument);
  const auto full = r.uniform(0, ~std::uint64_t{0});
  (void)full;
  for (int i = 0; i < 1000; ++i) {
    const double u = r.unit();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("uniform pairs follow the Cesaro law") {
  Rng r(5);
  const std::uint64_t n = 400000;
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto e = sample_uniform_pair(1'000'000, r);
    REQUIRE(e.g == support::ref_gcd(e.a, e.b));
    REQUIRE((e.a >= 1 && e.a <= 1'000'000 && e.b >= 1 && e.b <= 1'000'000));
    ++counts[e.g];
  }
  for (std::uint64_t k = 1; k <= 10; ++k) {
    const double p = 6.0 / (std::numbers::pi * std::numbers::pi * k * k);
    CAPTURE(k);
    CHECK(std::abs(z_score(counts[k], n, p)) < 4.0);
  }
}

TEST_CASE("log-uniform operands: each decade equally likely under floor rounding") {
  Rng r(9);
  const std::uint64_t n = 1'000'000;
  std::map<int, std::uint64_t> decade;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto x = sample_log_uniform_int(1'000'000, r);
    REQUIRE((x >= 1 && x <= 1'000'000));
    ++decade[static_cast<int>(std::to_string(x).size())];
  }
  // ln(10^d) / ln(10^6) - ln(10^(d-1)) / ln(10^6) = 1/6 for digit counts 1..6.
  for (int d = 1; d <= 6; ++d) {
    CAPTURE(d);
    CHECK(std::abs(z_score(decade[d], n, 1.0 / 6)) < 4.0);
  }
  CHECK(decade[7] <= 1);  // only 10^6 itself, probability ~0
}

TEST_CASE("log-uniform operands with nearest rounding") {
  // P(x <= 9) = P(e^X < 9.5) = ln 9.5 / ln 10^6.
  const double p10 = std::log(9.5) / std::log(1e6);
  const double p100 = std::log(99.5) / std::log(1e6);
  CHECK(p10 * p10 == doctest::Approx(0.02655).epsilon(1e-3));
  CHECK(p100 * p100 == doctest::Approx(0.11087).epsilon(1e-3));
  Rng r(10);
  const std::uint64_t n = 1'000'000;
  std::uint64_t below10 = 0, below100 = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto x = sample_log_uniform_int(1'000'000, r, LogRounding::nearest);
    below10 += x < 10;
    below100 += x < 100;
  }
  CHECK(std::abs(z_score(below10, n, p10)) < 4.0);
  CHECK(std::abs(z_score(below100, n, p100)) < 4.0);
}

TEST_CASE("coprime rejection sampler") {
  Rng r(12);
  std::uint64_t draws = 0, rejections = 0;
  for (int i = 0; i < 100000; ++i) {
    const auto d = sample_coprime_pair(1000, r);
    REQUIRE(support::ref_gcd(d.a, d.b) == 1);
    REQUIRE((d.a <= 1000 && d.b <= 1000));
    rejections += d.rejections;
    ++draws;
  }
  // Acceptance probability is close to 6/pi^2, so about 0.645 rejections per draw.
  const double per_draw = static_cast<double>(rejections) / static_cast<double>(draws);
  CHECK(per_draw == doctest::Approx(1.0 / 0.6079 - 1.0).epsilon(0.03));
  CHECK(sample_coprime_pair(1, r).a == 1);
}

TEST_CASE("outcome laws are normalised k^-p") {
  const std::pair<OutcomeDist, double> laws[] = {{OutcomeDist::uniform, 0.0},
                                                 {OutcomeDist::inv_sqrt, 0.5},
                                                 {OutcomeDist::log_uniform, 1.0},
                                                 {OutcomeDist::inv_power_1_5, 1.5}};
  for (const auto& [dist, power] : laws) {
    CAPTURE(to_string(dist));
    const OutcomeLaw law(dist, 100);
    CHECK(law.power() == power);
    CHECK(outcome_power(dist) == power);
    double total = 0.0;
    for (std::uint64_t k = 1; k <= 100; ++k) total += law.pmf(k);
    CHECK(total == doctest::Approx(1.0));
    CHECK(law.pmf(10) / law.pmf(1) == doctest::Approx(std::pow(10.0, -power)));
    CHECK(law.pmf(0) == 0.0);
    CHECK(law.pmf(101) == 0.0);

    Rng r(100 + static_cast<std::uint64_t>(power * 10));
    const std::uint64_t n = 200000;
    std::map<std::uint64_t, std::uint64_t> counts;
    std::map<std::uint64_t, double> p;
    for (std::uint64_t i = 0; i < n; ++i) ++counts[law.sample(r)];
    for (std::uint64_t k = 1; k <= 100; ++k) p[k] = law.pmf(k);
    CHECK(counts.rbegin()->first <= 100);
    CHECK(chi2(counts, p, n) < chi2_critical(99));
  }
  CHECK(outcome_power(OutcomeDist::mix_uniform) == 0.0);
  CHECK_THROWS_AS(outcome_power(OutcomeDist::natural), std::invalid_argument);
  Rng r(1);
  CHECK_THROWS_AS(sample_outcome_k(OutcomeDist::natural, 100, r), std::invalid_argument);
  CHECK_THROWS_AS(sample_outcome_k(OutcomeDist::mix_uniform, 100, r), std::invalid_argument);
}

TEST_CASE("pairs with a prescribed gcd") {
  Rng r(13);
  for (std::uint64_t k = 1; k <= 100; ++k) {
    for (int i = 0; i < 200; ++i) {
      const auto e = sample_pair_with_outcome(k, 1'000'000, r);
      REQUIRE(e.g == k);
      REQUIRE(support::ref_gcd(e.a, e.b) == k);
      REQUIRE((e.a <= 1'000'000 && e.b <= 1'000'000));
    }
  }
  const auto e = sample_pair_with_outcome(7, 7, r);
  CHECK((e.a == 7 && e.b == 7));
  CHECK_THROWS_AS(sample_pair_with_outcome(0, 10, r), std::invalid_argument);
  CHECK_THROWS_AS(sample_pair_with_outcome(11, 10, r), std::invalid_argument);
}

TEST_CASE("training stream is deterministic per (seed, shard)") {
  SamplerConfig cfg;
  cfg.seed = 77;
  TrainingStream s1(cfg), s2(cfg);
  const auto x = s1.take(1000);
  CHECK(x == s2.take(1000));

  TrainingStream s3(cfg);
  std::size_t i = 0;
  for (const auto& e : s3) {
    REQUIRE(e == x[i]);
    if (++i == x.size()) break;
  }

  cfg.shard_id = 1;
  TrainingStream other(cfg);
  CHECK(other.take(1000) != x);
}

TEST_CASE("training stream outcome laws") {
  SamplerConfig cfg;
  cfg.seed = 5;
  const std::uint64_t n = 200000;

  SUBCASE("log-uniform outcomes") {
    cfg.outcome_dist = OutcomeDist::log_uniform;
    TrainingStream s(cfg);
    const OutcomeLaw law(OutcomeDist::log_uniform, 100);
    std::map<std::uint64_t, std::uint64_t> counts;
    std::map<std::uint64_t, double> p;
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto e = s.next();
      REQUIRE(support::ref_gcd(e.a, e.b) == e.g);
      ++counts[e.g];
    }
    for (std::uint64_t k = 1; k <= 100; ++k) p[k] = law.pmf(k);
    CHECK(chi2(counts, p, n) < chi2_critical(99));
  }

  SUBCASE("mixture of natural and uniform outcomes") {
    cfg.outcome_dist = OutcomeDist::mix_uniform;
    cfg.mix_rho = 0.05;
    TrainingStream s(cfg);
    std::uint64_t tail = 0;
    for (std::uint64_t i = 0; i < n; ++i) tail += s.next().g > 50;
    // Half of the uniform branch lies above 50; the natural branch puts
    // (6/pi^2) sum_{k>50} k^-2 ~ 0.012 there.
    double natural_tail = 0.0;
    for (std::uint64_t k = 1'000'000; k > 50; --k) natural_tail += number_theory::cesaro_pmf(k);
    const double p = 0.05 * 0.5 + 0.95 * natural_tail;
    CHECK(std::abs(z_score(tail, n, p)) < 4.0);
  }

  SUBCASE("log-uniform operands keep log-uniform components") {
    cfg.operand_dist = OperandDist::log_uniform;
    TrainingStream s(cfg);
    std::uint64_t both_small = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto e = s.next();
      both_small += e.a < 10 && e.b < 10;
    }
    CHECK(std::abs(z_score(both_small, n, 1.0 / 36)) < 4.0);
  }
}

TEST_CASE("sampler config validation and header round trip") {
  SamplerConfig cfg;
  cfg.M = 5000;
  cfg.kmax = 50;
  cfg.operand_dist = OperandDist::log_uniform;
  cfg.outcome_dist = OutcomeDist::mix_uniform;
  cfg.mix_rho = 0.1;
  cfg.log_rounding = LogRounding::nearest;
  cfg.seed = 123456789012345ULL;
  cfg.shard_id = 3;
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : config_to_header(cfg)) kv[k] = v;
  CHECK(kv.at("mix_rho") == "0.1");
  CHECK(kv.at("generator") == Rng::kAlgorithm);
  const auto back = config_from_header(kv);
  CHECK(back.M == cfg.M);
  CHECK(back.kmax == cfg.kmax);
  CHECK(back.operand_dist == cfg.operand_dist);
  CHECK(back.outcome_dist == cfg.outcome_dist);
  CHECK(back.mix_rho == cfg.mix_rho);
  CHECK(back.log_rounding == cfg.log_rounding);
  CHECK(back.seed == cfg.seed);
  CHECK(back.shard_id == cfg.shard_id);

  kv["generator"] = "pcg64";
  CHECK_THROWS_AS(config_from_header(kv), std::invalid_argument);

  SamplerConfig bad;
  bad.mix_rho = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.kmax = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.outcome_dist = OutcomeDist::uniform;
  bad.M = 50;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.outcome_dist = OutcomeDist::natural;
  CHECK_NOTHROW(bad.validate());

  CHECK_THROWS_AS(parse_outcome_dist("zipf"), std::invalid_argument);
  for (auto d : {OutcomeDist::natural, OutcomeDist::mix_uniform, OutcomeDist::log_uniform,
                 OutcomeDist::inv_sqrt, OutcomeDist::inv_power_1_5, OutcomeDist::uniform}) {
    CHECK(parse_outcome_dist(to_string(d)) == d);
  }
}

TEST_CASE("rational task constructors") {
  auto r = make_compare(1, 3, 1, 2);
  CHECK(r.target == std::vector<std::uint64_t>{1});
  CHECK(make_compare(1, 2, 1, 3).target == std::vector<std::uint64_t>{0});
  CHECK(make_compare(2, 4, 1, 2).target == std::vector<std::uint64_t>{0});  // equal

  r = make_int_div(3, 7, 5);  // 38 / 7 = 5
  CHECK(r.input == std::vector<std::uint64_t>{38, 7});
  CHECK(r.target == std::vector<std::uint64_t>{5});
  CHECK_THROWS_AS(make_int_div(7, 7, 1), std::invalid_argument);

  r = make_simplify(4, 6, 5);  // 20/30 -> 2/3
  CHECK(r.input == std::vector<std::uint64_t>{10, 15});
  CHECK(r.target == std::vector<std::uint64_t>{2, 3});

  CHECK(make_add(1, 6, 1, 3).target == std::vector<std::uint64_t>{1, 2});
  CHECK(make_multiply(2, 3, 9, 4).target == std::vector<std::uint64_t>{3, 2});
}

TEST_CASE("generated rational tasks are correct") {
  Rng r(21);
  const std::uint64_t M = 1'000'000;
  std::uint64_t ties = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto c = gen_rational_task(RationalTask::compare, M, r);
    const long double lhs = static_cast<long double>(c.input[0]) / c.input[1];
    const long double rhs = static_cast<long double>(c.input[2]) / c.input[3];
    if (c.input[0] * c.input[3] == c.input[2] * c.input[1]) ++ties;
    else REQUIRE(c.target[0] == (lhs < rhs ? 1u : 0u));

    const auto d = gen_rational_task(RationalTask::int_div, M, r);
    REQUIRE(d.input[0] / d.input[1] == d.target[0]);

    const auto s = gen_rational_task(RationalTask::simplify, M, r);
    REQUIRE(support::ref_gcd(s.target[0], s.target[1]) == 1);
    REQUIRE(s.input[0] * s.target[1] == s.input[1] * s.target[0]);

    const auto a = gen_rational_task(RationalTask::add, M, r);
    REQUIRE(support::ref_gcd(a.target[0], a.target[1]) == 1);
    // a/b + c/d = p/q  <=>  (a d + c b) q = p b d
    const auto& in = a.input;
    REQUIRE(static_cast<unsigned __int128>(in[0] * in[3] + in[2] * in[1]) * a.target[1] ==
            static_cast<unsigned __int128>(a.target[0]) * (in[1] * in[3]));

    const auto m = gen_rational_task(RationalTask::multiply, M, r);
    REQUIRE(support::ref_gcd(m.target[0], m.target[1]) == 1);
    REQUIRE(static_cast<unsigned __int128>(m.input[0] * m.input[2]) * m.target[1] ==
            static_cast<unsigned __int128>(m.target[0]) * (m.input[1] * m.input[3]));
  }
  // Ties need a/b = c/d exactly; with operands up to 10^6 they are rare.
  MESSAGE("compare ties: " << ties << " of " << n);
  CHECK(ties < 10);
}
