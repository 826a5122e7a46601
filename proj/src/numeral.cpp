#include "gcdlab/numeral.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace gcdlab::numeral {
namespace {

void check_base(std::uint64_t base) {
  if (base < 2) throw std::invalid_argument("base must be >= 2, got " + std::to_string(base));
}

void append_digits(std::vector<Token>& out, std::uint64_t n, std::uint64_t base) {
  const auto first = out.size();
  do {
    out.push_back(Token::digit(n % base));
    n /= base;
  } while (n != 0);
  std::reverse(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
}

}  // namespace

TokenSeq encode_int(std::uint64_t n, std::uint64_t base) {
  check_base(base);
  if (n < 1) throw std::invalid_argument("encode_int requires n >= 1");
  TokenSeq seq{{Token::sign()}, base};
  append_digits(seq.tokens, n, base);
  return seq;
}

TokenSeq encode_ints(std::span<const std::uint64_t> values, std::uint64_t base) {
  check_base(base);
  TokenSeq seq{{}, base};
  for (auto v : values) {
    seq.tokens.push_back(Token::sign());
    append_digits(seq.tokens, v, base);
  }
  return seq;
}

std::vector<std::uint64_t> decode_ints(const TokenSeq& seq) {
  check_base(seq.base);
  const auto& t = seq.tokens;
  if (t.empty()) throw ParseError(0, "empty token sequence");
  if (!t.front().is_sign()) throw ParseError(0, "sequence must start with '+'");

  std::vector<std::uint64_t> values;
  std::size_t i = 0;
  while (i < t.size()) {
    const std::size_t sign_pos = i++;
    if (i == t.size() || t[i].is_sign()) throw ParseError(sign_pos, "'+' not followed by a digit");
    const std::size_t first_digit = i;
    std::uint64_t value = 0;
    for (; i < t.size() && !t[i].is_sign(); ++i) {
      const auto d = t[i].value();
      if (d >= seq.base) {
        throw ParseError(i, "digit " + std::to_string(d) + " out of range for base " +
                                std::to_string(seq.base));
      }
      if (i > first_digit && value == 0) throw ParseError(i - 1, "leading zero digit");
      if (value > (std::numeric_limits<std::uint64_t>::max() - d) / seq.base) {
        throw ParseError(i, "integer overflows 64 bits");
      }
      value = value * seq.base + d;
    }
    values.push_back(value);
  }
  return values;
}

std::uint64_t decode_int(const TokenSeq& seq) {
  auto values = decode_ints(seq);
  if (values.size() != 1) {
    // Position of the second sign token.
    std::size_t pos = 1;
    while (!seq.tokens[pos].is_sign()) ++pos;
    throw ParseError(pos, "expected a single integer");
  }
  return values.front();
}

EncodedExample encode_example(std::uint64_t a, std::uint64_t b, std::uint64_t out,
                              std::uint64_t base) {
  const std::uint64_t operands[] = {a, b};
  return {encode_ints(operands, base), encode_int(out, base)};
}

std::string render(const TokenSeq& seq) {
  std::string s;
  for (const auto& tok : seq.tokens) {
    if (!s.empty()) s += ' ';
    if (tok.is_sign()) {
      s += '+';
    } else {
      s += std::to_string(tok.value());
    }
  }
  return s;
}

TokenSeq parse(std::string_view text, std::uint64_t base) {
  check_base(base);
  TokenSeq seq{{}, base};
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    std::size_t end = text.find(' ', i);
    if (end == std::string_view::npos) end = text.size();
    const auto word = text.substr(i, end - i);
    if (word == "+") {
      seq.tokens.push_back(Token::sign());
    } else {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
      if (ec != std::errc{} || ptr != word.data() + word.size()) {
        throw ParseError(i, "invalid token '" + std::string(word) + "'");
      }
      if (v >= base) {
        throw ParseError(i, "digit " + std::string(word) + " out of range for base " +
                                std::to_string(base));
      }
      seq.tokens.push_back(Token::digit(v));
    }
    i = end;
  }
  return seq;
}

std::size_t encoded_length(std::uint64_t n, std::uint64_t base) {
  check_base(base);
  std::size_t digits = 1;
  while (n >= base) {
    n /= base;
    ++digits;
  }
  return digits + 1;
}

}  // namespace gcdlab::numeral
