#include <doctest.h>

#include <random>

#include "gcdlab/numeral.hpp"
#include "support.hpp"

using namespace gcdlab::numeral;

namespace {

std::vector<Token> tokens(std::initializer_list<long> spec) {
  // -1 stands for the sign token.
  std::vector<Token> out;
  for (auto v : spec) out.push_back(v < 0 ? Token::sign() : Token::digit(static_cast<std::uint64_t>(v)));
  return out;
}

}  // namespace

TEST_CASE("gcd(160, 120) = 40 in four bases") {
  struct Row {
    std::uint64_t base;
    std::vector<Token> input;
    std::vector<Token> output;
  };
  const Row rows[] = {
      {2,
       tokens({-1, 1, 0, 1, 0, 0, 0, 0, 0, -1, 1, 1, 1, 1, 0, 0, 0}),
       tokens({-1, 1, 0, 1, 0, 0, 0})},
      {6, tokens({-1, 4, 2, 4, -1, 3, 2, 0}), tokens({-1, 1, 0, 4})},
      {10, tokens({-1, 1, 6, 0, -1, 1, 2, 0}), tokens({-1, 4, 0})},
      {30, tokens({-1, 5, 10, -1, 4, 0}), tokens({-1, 1, 10})},
  };
  for (const auto& r : rows) {
    CAPTURE(r.base);
    const auto ex = encode_example(160, 120, 40, r.base);
    CHECK(ex.input.tokens == r.input);
    CHECK(ex.output.tokens == r.output);
    CHECK(ex.input.base == r.base);
  }
}

TEST_CASE("encode_int examples") {
  CHECK(encode_int(160, 30).tokens == tokens({-1, 5, 10}));
  CHECK(encode_int(120, 6).tokens == tokens({-1, 3, 2, 0}));
  CHECK(encode_int(1, 2).tokens == tokens({-1, 1}));
  CHECK(encode_int(40, 30).tokens == tokens({-1, 1, 10}));
  CHECK(render(encode_int(40, 30)) == "+ 1 10");
}

TEST_CASE("encode_int rejects bad arguments") {
  CHECK_THROWS_AS(encode_int(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(encode_int(5, 1), std::invalid_argument);
  CHECK_THROWS_AS(encode_int(5, 0), std::invalid_argument);
}

TEST_CASE("encoding agrees with reference digits and round-trips") {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 5000; ++i) {
    const std::uint64_t base = 2 + gen() % 2000;
    const std::uint64_t n = 1 + gen() % 1'000'000'000'000ULL;
    const auto seq = encode_int(n, base);
    const auto digits = support::ref_digits(n, base);
    REQUIRE(seq.tokens.size() == digits.size() + 1);
    CHECK(seq.tokens[0].is_sign());
    for (std::size_t j = 0; j < digits.size(); ++j) CHECK(seq.tokens[j + 1].value() == digits[j]);
    CHECK(decode_int(seq) == n);
    CHECK(encoded_length(n, base) == seq.tokens.size());
    CHECK(parse(render(seq), base) == seq);
  }
}

TEST_CASE("largest 64-bit value round-trips") {
  const std::uint64_t n = ~std::uint64_t{0};
  for (std::uint64_t base : {2ULL, 10ULL, 1000ULL, 4294967296ULL}) {
    CHECK(decode_int(encode_int(n, base)) == n);
  }
}

TEST_CASE("sequences of integers") {
  const std::uint64_t values[] = {8, 12, 1};
  const auto seq = encode_ints(values, 10);
  CHECK(render(seq) == "+ 8 + 1 2 + 1");
  CHECK(decode_ints(seq) == std::vector<std::uint64_t>{8, 12, 1});
  const std::uint64_t zero[] = {0};
  CHECK(render(encode_ints(zero, 7)) == "+ 0");
  CHECK(decode_int(parse("+ 0", 7)) == 0);
}

TEST_CASE("malformed sequences report the offending position") {
  const auto fails_at = [](const std::string& text, std::uint64_t base, std::size_t pos) {
    CAPTURE(text);
    try {
      decode_ints(parse(text, base));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.position() == pos);
    }
  };
  fails_at("", 10, 0);
  fails_at("4 0", 10, 0);           // missing sign
  fails_at("+ 1 + + 2", 10, 2);     // sign followed by sign
  fails_at("+ 1 2 +", 10, 3);       // trailing sign
  fails_at("+ 0 4", 10, 1);         // leading zero
  fails_at("+ 1 0 + 0 3", 10, 4);   // leading zero in the second integer

  TokenSeq wide{{Token::sign(), Token::digit(12)}, 10};
  CHECK_THROWS_AS(decode_ints(wide), ParseError);

  // 2^64 in base 2 overflows.
  TokenSeq big{{Token::sign(), Token::digit(1)}, 2};
  for (int i = 0; i < 64; ++i) big.tokens.push_back(Token::digit(0));
  CHECK_THROWS_AS(decode_ints(big), ParseError);

  CHECK_THROWS_AS(decode_int(parse("+ 1 + 2", 10)), ParseError);
}

TEST_CASE("parse validates tokens") {
  CHECK_THROWS_AS(parse("+ x", 10), ParseError);
  CHECK_THROWS_AS(parse("+ 10", 10), ParseError);
  CHECK_THROWS_AS(parse("+ -1", 10), ParseError);
  CHECK(parse("  +  1   0 ", 10).tokens == tokens({-1, 1, 0}));
}
