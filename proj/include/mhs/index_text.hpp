#pragma once

// Text form of an index: "N=<int>;m=<int>;n=<int>(,<int>)*;xi=<int>(,<int>)*", where xi lists
// the d+1 twist exponents of zeta_N.

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mhs/harmonic.hpp"

namespace mhs {

class ParseError : public std::invalid_argument {
 public:
  ParseError(std::size_t position, const std::string& message)
      : std::invalid_argument("parse error at position " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

class IndexScanner {
 public:
  explicit IndexScanner(std::string_view text) : text_(text) {}

  void expect(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token) {
      throw ParseError(pos_, "expected '" + std::string(token) + "'");
    }
    pos_ += token.size();
  }

  long long integer(bool allow_negative) {
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      if (!allow_negative) throw ParseError(pos_, "expected a positive integer");
      negative = true;
      ++pos_;
    }
    std::uint64_t value = 0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range || value > static_cast<std::uint64_t>(INT64_MAX)) {
      throw ParseError(start, "integer out of range");
    }
    if (ec != std::errc() || ptr == first) throw ParseError(pos_, "expected an integer");
    pos_ += static_cast<std::size_t>(ptr - first);
    return negative ? -static_cast<long long>(value) : static_cast<long long>(value);
  }

  long long positive() {
    const std::size_t start = pos_;
    const long long v = integer(false);
    if (v <= 0) throw ParseError(start, "expected a positive integer");
    return v;
  }

  template <typename Item>
  std::vector<long long> list(Item item) {
    std::vector<long long> out{item()};
    while (pos_ < text_.size() && text_[pos_] == ',') {
      ++pos_;
      out.push_back(item());
    }
    return out;
  }

  std::size_t position() const { return pos_; }
  bool done() const { return pos_ == text_.size(); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline MHSIndex parse_index(std::string_view text) {
  detail::IndexScanner s(text);
  s.expect("N=");
  const long long level = s.positive();
  if (level > UINT32_MAX) throw ParseError(2, "level out of range");
  s.expect(";m=");
  const long long bound = s.positive();
  s.expect(";n=");
  const std::size_t weights_at = s.position();
  const auto raw_weights = s.list([&] { return s.positive(); });
  s.expect(";xi=");
  const std::size_t twists_at = s.position();
  const auto twists = s.list([&] { return s.integer(true); });
  if (!s.done()) throw ParseError(s.position(), "trailing characters");

  std::vector<unsigned> weights;
  for (auto w : raw_weights) {
    if (w > UINT32_MAX) throw ParseError(weights_at, "weight out of range");
    weights.push_back(static_cast<unsigned>(w));
  }
  if (twists.size() != weights.size() + 1) {
    throw ParseError(twists_at, std::to_string(weights.size()) + " weights require " +
                                    std::to_string(weights.size() + 1) + " twist exponents, got " +
                                    std::to_string(twists.size()));
  }
  return {static_cast<unsigned>(level), static_cast<std::uint64_t>(bound), std::move(weights), twists};
}

inline std::string render_index(const MHSIndex& index) {
  std::string out = "N=" + std::to_string(index.level()) + ";m=" + std::to_string(index.bound()) + ";n=";
  for (std::size_t i = 0; i < index.depth(); ++i) {
    if (i) out += ',';
    out += std::to_string(index.weights()[i]);
  }
  out += ";xi=";
  for (std::size_t i = 0; i < index.twists().size(); ++i) {
    if (i) out += ',';
    out += std::to_string(index.twists()[i].exponent());
  }
  return out;
}

}  // namespace mhs
