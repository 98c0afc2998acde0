#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bpetk/core.hpp"

namespace bpetk {

// Dense id of a string that occurs in a dictionary (a rule side, a rule
// product, or a single symbol of one of those). Strings that never take part
// in a merge share kInertToken.
using TokenId = std::uint32_t;
inline constexpr TokenId kInertToken = 0xFFFFFFFFu;

// What the rule for an adjacent (left, right) pair does.
struct Merge {
  std::uint32_t rule;  // priority index
  TokenId product;
};

// An ordered list of merge rules; index = priority, lower is stronger.
// Immutable once built. Construction compiles a hash index from token pairs
// to rules, so copies are cheap and share it.
class Dictionary {
 public:
  Dictionary();
  // Throws DuplicateRuleError naming the repeated pair, and
  // ReservedSymbolError if a rule mentions the padding symbol.
  explicit Dictionary(std::vector<Rule> rules,
                      Alphabet alphabet = Alphabet::bytes);

  std::size_t size() const noexcept { return rules_->size(); }
  bool empty() const noexcept { return rules_->empty(); }
  const Rule& operator[](std::size_t i) const noexcept { return (*rules_)[i]; }
  const std::vector<Rule>& rules() const noexcept { return *rules_; }
  Alphabet alphabet() const noexcept { return alphabet_; }

  // Sum of |uv| over all rules.
  std::size_t total_size() const noexcept { return index_->total_size; }
  // max |uv|, 0 for the empty dictionary.
  std::size_t max_rule_size() const noexcept { return index_->max_rule_size; }

  TokenId symbol_id(Symbol s) const noexcept {
    if (s < 256) return index_->byte_ids[s];
    auto it = index_->symbol_ids.find(s);
    return it == index_->symbol_ids.end() ? kInertToken : it->second;
  }
  TokenId token_id(TextView token) const;

  const Merge* find_merge(TokenId left, TokenId right) const noexcept;
  std::optional<std::size_t> find_rule(const Token& left,
                                       const Token& right) const;

  // Distinct symbols mentioned by any rule, ascending.
  const Text& symbols() const noexcept { return index_->symbols; }

  // Same rules with positions i and i + 1 exchanged.
  Dictionary with_swapped(std::size_t i) const;

  friend bool operator==(const Dictionary& a, const Dictionary& b) {
    return a.alphabet_ == b.alphabet_ && *a.rules_ == *b.rules_;
  }

 private:
  struct MergeSlot {
    std::uint64_t key;
    Merge merge;
  };

  struct Index {
    std::array<TokenId, 256> byte_ids;
    std::unordered_map<Symbol, TokenId> symbol_ids;
    std::unordered_map<Text, TokenId> token_ids;
    std::vector<MergeSlot> slots;  // open addressing, power-of-two size
    std::uint64_t mask = 0;
    std::size_t total_size = 0;
    std::size_t max_rule_size = 0;
    Text symbols;
  };

  static std::uint64_t pair_key(TokenId l, TokenId r) noexcept {
    return (static_cast<std::uint64_t>(l) << 32) | r;
  }
  static std::uint64_t slot_of(std::uint64_t key, std::uint64_t mask) noexcept {
    return ((key * 0x9E3779B97F4A7C15ull) >> 17) & mask;
  }

  std::shared_ptr<const std::vector<Rule>> rules_;
  std::shared_ptr<const Index> index_;
  Alphabet alphabet_ = Alphabet::bytes;
};

}  // namespace bpetk
