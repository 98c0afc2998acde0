#include "bpetk/dictionary.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "bpetk/errors.hpp"

namespace bpetk {
namespace {

constexpr std::uint64_t kEmptySlot = ~0ull;

}  // namespace

Dictionary::Dictionary() : Dictionary(std::vector<Rule>{}) {}

Dictionary::Dictionary(std::vector<Rule> rules, Alphabet alphabet)
    : alphabet_(alphabet) {
  auto index = std::make_shared<Index>();
  index->byte_ids.fill(kInertToken);

  auto intern = [&](TextView s) {
    auto [it, inserted] = index->token_ids.try_emplace(
        Text(s), static_cast<TokenId>(index->token_ids.size()));
    if (inserted && s.size() == 1) {
      if (s[0] < 256) {
        index->byte_ids[s[0]] = it->second;
      } else {
        index->symbol_ids.emplace(s[0], it->second);
      }
    }
    return it->second;
  };

  std::set<Symbol> symbols;
  for (const Rule& r : rules) {
    for (Symbol s : r.left.view()) symbols.insert(s);
    for (Symbol s : r.right.view()) symbols.insert(s);
  }
  if (symbols.contains(kPadSymbol)) {
    throw ReservedSymbolError("dictionary rules may not contain the padding symbol");
  }
  for (Symbol s : symbols) intern(TextView(&s, 1));
  index->symbols.assign(symbols.begin(), symbols.end());

  std::vector<std::pair<std::uint64_t, Merge>> merges;
  merges.reserve(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i];
    const TokenId l = intern(r.left.view());
    const TokenId rt = intern(r.right.view());
    const TokenId p = intern(r.product());
    merges.push_back({pair_key(l, rt), Merge{static_cast<std::uint32_t>(i), p}});
    index->total_size += r.size();
    index->max_rule_size = std::max(index->max_rule_size, r.size());
  }

  const std::size_t capacity = std::bit_ceil(std::max<std::size_t>(8, merges.size() * 2));
  index->slots.assign(capacity, MergeSlot{kEmptySlot, Merge{0, 0}});
  index->mask = capacity - 1;
  for (const auto& [key, merge] : merges) {
    std::uint64_t slot = slot_of(key, index->mask);
    while (index->slots[slot].key != kEmptySlot) {
      if (index->slots[slot].key == key) {
        const Rule& first = rules[index->slots[slot].merge.rule];
        throw DuplicateRuleError("duplicate rule " + to_string(first) +
                                 " at positions " +
                                 std::to_string(index->slots[slot].merge.rule) +
                                 " and " + std::to_string(merge.rule));
      }
      slot = (slot + 1) & index->mask;
    }
    index->slots[slot] = MergeSlot{key, merge};
  }

  rules_ = std::make_shared<const std::vector<Rule>>(std::move(rules));
  index_ = std::move(index);
}

TokenId Dictionary::token_id(TextView token) const {
  auto it = index_->token_ids.find(Text(token));
  return it == index_->token_ids.end() ? kInertToken : it->second;
}

const Merge* Dictionary::find_merge(TokenId left, TokenId right) const noexcept {
  if (left == kInertToken || right == kInertToken) return nullptr;
  const std::uint64_t key = pair_key(left, right);
  std::uint64_t slot = slot_of(key, index_->mask);
  for (;;) {
    const MergeSlot& s = index_->slots[slot];
    if (s.key == key) return &s.merge;
    if (s.key == kEmptySlot) return nullptr;
    slot = (slot + 1) & index_->mask;
  }
}

std::optional<std::size_t> Dictionary::find_rule(const Token& left,
                                                 const Token& right) const {
  const Merge* m = find_merge(token_id(left.view()), token_id(right.view()));
  if (m == nullptr) return std::nullopt;
  return m->rule;
}

Dictionary Dictionary::with_swapped(std::size_t i) const {
  std::vector<Rule> rules = *rules_;
  std::swap(rules.at(i), rules.at(i + 1));
  return Dictionary(std::move(rules), alphabet_);
}

}  // namespace bpetk
