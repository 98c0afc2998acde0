#include "bpetk/core.hpp"

#include <numeric>
#include <stdexcept>

#include "bpetk/text.hpp"

namespace bpetk {

Token::Token(Text symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw std::invalid_argument("token must be non-empty");
}

Tokenization Tokenization::from_lengths(TextView text,
                                        std::span<const std::uint32_t> lengths) {
  std::vector<Token> tokens;
  tokens.reserve(lengths.size());
  std::size_t offset = 0;
  for (std::uint32_t len : lengths) {
    if (len == 0 || offset + len > text.size()) {
      throw std::invalid_argument("token lengths do not cover the text");
    }
    tokens.emplace_back(text.substr(offset, len));
    offset += len;
  }
  if (offset != text.size()) {
    throw std::invalid_argument("token lengths do not cover the text");
  }
  return Tokenization(std::move(tokens));
}

void Tokenization::append(const Tokenization& other) {
  tokens_.insert(tokens_.end(), other.tokens_.begin(), other.tokens_.end());
}

Tokenization Tokenization::slice(std::size_t first, std::size_t count) const {
  return Tokenization(std::vector<Token>(tokens_.begin() + first,
                                         tokens_.begin() + first + count));
}

std::vector<std::uint32_t> Tokenization::lengths() const {
  std::vector<std::uint32_t> out;
  out.reserve(tokens_.size());
  for (const Token& t : tokens_) out.push_back(static_cast<std::uint32_t>(t.size()));
  return out;
}

Text concat(const Tokenization& t) {
  std::size_t total = 0;
  for (const Token& tok : t) total += tok.size();
  Text out;
  out.reserve(total);
  for (const Token& tok : t) out += tok.symbols();
  return out;
}

Tokenization trivial_tokenization(TextView w) {
  std::vector<Token> tokens;
  tokens.reserve(w.size());
  for (Symbol s : w) tokens.emplace_back(Text(1, s));
  return Tokenization(std::move(tokens));
}

bool is_refinement(const Tokenization& t, const Tokenization& coarser) {
  // Walk both sequences, consuming fine tokens until they spell exactly the
  // current coarse token.
  std::size_t i = 0;
  for (const Token& big : coarser) {
    std::size_t matched = 0;
    while (matched < big.size()) {
      if (i == t.size()) return false;
      const Token& small = t[i++];
      if (matched + small.size() > big.size()) return false;
      if (big.view().substr(matched, small.size()) != small.view()) return false;
      matched += small.size();
    }
  }
  return i == t.size();
}

Text from_bytes(std::string_view bytes) {
  Text out;
  out.reserve(bytes.size());
  for (char c : bytes) out.push_back(static_cast<unsigned char>(c));
  return out;
}

std::string to_string(const Tokenization& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i != 0) out += " \xE2\x89\x80 ";  // ≀
    out += escape(t[i].view(), Alphabet::chars);
  }
  return out;
}

std::string to_string(const Rule& r) {
  return escape(r.left.view(), Alphabet::chars) + " \xE2\x89\x80 " +
         escape(r.right.view(), Alphabet::chars);
}

}  // namespace bpetk
