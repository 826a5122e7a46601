#pragma once

// Sign-prefixed positional encoding of positive integers, one token per
// base-B digit. gcd(160, 120) = 40 in base 30 reads "+ 5 10 + 4 0" -> "+ 1 10".

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gcdlab::numeral {

/// A single token: either the sign "+" or a digit with value in [0, base).
class Token {
 public:
  static constexpr Token sign() { return Token{true, 0}; }
  static constexpr Token digit(std::uint64_t value) { return Token{false, value}; }

  constexpr bool is_sign() const { return is_sign_; }
  constexpr std::uint64_t value() const { return value_; }

  friend constexpr bool operator==(const Token&, const Token&) = default;

 private:
  constexpr Token(bool is_sign, std::uint64_t value) : is_sign_(is_sign), value_(value) {}
  bool is_sign_;
  std::uint64_t value_;
};

/// Thrown for malformed token sequences; `position` is the index of the
/// offending token (or character offset when parsing text).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct TokenSeq {
  std::vector<Token> tokens;
  std::uint64_t base = 10;

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

TokenSeq encode_int(std::uint64_t n, std::uint64_t base);

/// Decodes a sequence holding exactly one integer. "+ 0" decodes to 0.
std::uint64_t decode_int(const TokenSeq& seq);

/// Decodes a concatenation of integers ("+ 8 + 1 2" -> {8, 12}).
std::vector<std::uint64_t> decode_ints(const TokenSeq& seq);

/// Concatenates the encodings of every value. Zero is written "+ 0", for
/// targets such as the comparison bit.
TokenSeq encode_ints(std::span<const std::uint64_t> values, std::uint64_t base);

struct EncodedExample {
  TokenSeq input;
  TokenSeq output;
};

EncodedExample encode_example(std::uint64_t a, std::uint64_t b, std::uint64_t out,
                              std::uint64_t base);

/// Space-separated text form; digits are written as decimal integers.
std::string render(const TokenSeq& seq);

/// Inverse of render(). Digit range is validated against `base`.
TokenSeq parse(std::string_view text, std::uint64_t base);

/// Number of tokens in encode_int(n, base).
std::size_t encoded_length(std::uint64_t n, std::uint64_t base);

}  // namespace gcdlab::numeral
