#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bpetk {

// One alphabet symbol. In the byte profile the values are 0..255, in the
// character profile they are Unicode scalar values.
using Symbol = char32_t;
using Text = std::u32string;
using TextView = std::u32string_view;

// End-padding marker used by the streaming tokenizer. It lies outside both
// profiles' value ranges, so every byte and every scalar stays usable.
inline constexpr Symbol kPadSymbol = 0x110000;

enum class Alphabet { bytes, chars };

// A non-empty string of symbols. Equality and ordering are by content.
class Token {
 public:
  explicit Token(Text symbols);
  explicit Token(TextView symbols) : Token(Text(symbols)) {}

  const Text& symbols() const noexcept { return symbols_; }
  TextView view() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  Symbol operator[](std::size_t i) const noexcept { return symbols_[i]; }

  friend bool operator==(const Token&, const Token&) = default;
  friend std::strong_ordering operator<=>(const Token& a, const Token& b) {
    return a.symbols_.compare(b.symbols_) <=> 0;
  }

 private:
  Text symbols_;
};

// A sequence of tokens, possibly empty.
class Tokenization {
 public:
  using const_iterator = std::vector<Token>::const_iterator;

  Tokenization() = default;
  explicit Tokenization(std::vector<Token> tokens)
      : tokens_(std::move(tokens)) {}
  Tokenization(std::initializer_list<Token> tokens) : tokens_(tokens) {}

  // Splits `text` into consecutive tokens of the given lengths. The lengths
  // must be positive and sum to text.size().
  static Tokenization from_lengths(TextView text,
                                   std::span<const std::uint32_t> lengths);

  std::size_t size() const noexcept { return tokens_.size(); }
  std::size_t length() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const Token& operator[](std::size_t i) const noexcept { return tokens_[i]; }
  const Token& front() const noexcept { return tokens_.front(); }
  const Token& back() const noexcept { return tokens_.back(); }
  const_iterator begin() const noexcept { return tokens_.begin(); }
  const_iterator end() const noexcept { return tokens_.end(); }
  const std::vector<Token>& tokens() const noexcept { return tokens_; }

  void push_back(Token token) { tokens_.push_back(std::move(token)); }
  void append(const Tokenization& other);

  // Tokens [first, first + count).
  Tokenization slice(std::size_t first, std::size_t count) const;

  // Token lengths, in order.
  std::vector<std::uint32_t> lengths() const;

  friend bool operator==(const Tokenization&, const Tokenization&) = default;
  friend std::strong_ordering operator<=>(const Tokenization& a,
                                          const Tokenization& b) {
    return std::lexicographical_compare_three_way(
        a.tokens_.begin(), a.tokens_.end(), b.tokens_.begin(), b.tokens_.end());
  }

 private:
  std::vector<Token> tokens_;
};

// A merge rule left ≀ right.
struct Rule {
  Token left;
  Token right;

  Text product() const { return left.symbols() + right.symbols(); }
  std::size_t size() const noexcept { return left.size() + right.size(); }

  friend bool operator==(const Rule&, const Rule&) = default;
};

// Concatenation of all tokens.
Text concat(const Tokenization& t);

// One single-symbol token per symbol of w.
Tokenization trivial_tokenization(TextView w);

// True iff `coarser` is obtained from `t` by gluing runs of consecutive
// tokens together.
bool is_refinement(const Tokenization& t, const Tokenization& coarser);

// Each byte becomes one symbol. Handy for ASCII literals in tests and tools.
Text from_bytes(std::string_view bytes);

// Human readable rendering "abc ≀ bc ≀ ab" with escaped symbols.
std::string to_string(const Tokenization& t);
std::string to_string(const Rule& r);

}  // namespace bpetk
