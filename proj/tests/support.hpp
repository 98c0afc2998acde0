// Test helpers and brute-force oracles. The oracles follow the definitions
// literally on vectors of strings and share no code with the library's
// merge engine, index or analyses.
#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bpetk/core.hpp"
#include "bpetk/dictionary.hpp"

namespace bpetk::test {

inline Text T(std::string_view s) { return from_bytes(s); }

// "abc|bc|ab" -> abc ≀ bc ≀ ab; "" -> empty tokenization.
inline Tokenization toks(std::string_view bars) {
  Tokenization out;
  if (bars.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t bar = bars.find('|', start);
    out.push_back(Token(T(bars.substr(start, bar - start))));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

inline Dictionary dict(std::initializer_list<std::pair<std::string_view, std::string_view>> rules) {
  std::vector<Rule> out;
  for (const auto& [l, r] : rules) out.push_back(Rule{Token(T(l)), Token(T(r))});
  return Dictionary(std::move(out));
}

// a_n ≀ a_{n+1}, a_{n-1} ≀ a_n a_{n+1}, ..., a_1 ≀ a_2 ... a_{n+1} with
// a_i written as the digit i.
inline Dictionary chain_dictionary(int n) {
  std::vector<Rule> rules;
  for (int i = n; i >= 1; --i) {
    Text right;
    for (int j = i + 1; j <= n + 1; ++j) right.push_back(static_cast<Symbol>('0' + j));
    rules.push_back(Rule{Token(Text(1, static_cast<Symbol>('0' + i))), Token(right)});
  }
  return Dictionary(std::move(rules));
}

// a_0 a_1 ... a_{n+1}: the late a_{n+1} glues a_1 ... a_{n+1} together.
inline Text chain_adversary(int n) {
  Text w;
  for (int i = 0; i <= n + 1; ++i) w.push_back(static_cast<Symbol>('0' + i));
  return w;
}

namespace oracle {

using Toks = std::vector<Text>;

inline Toks singletons(TextView w) {
  Toks t;
  for (Symbol s : w) t.emplace_back(1, s);
  return t;
}

inline Tokenization to_tokenization(const Toks& t) {
  Tokenization out;
  for (const Text& s : t) out.push_back(Token(s));
  return out;
}

inline std::vector<std::pair<Text, Text>> rules_of(const Dictionary& d) {
  std::vector<std::pair<Text, Text>> out;
  for (const Rule& r : d.rules()) out.emplace_back(r.left.symbols(), r.right.symbols());
  return out;
}

inline std::optional<std::size_t> first_position(const Toks& t, const std::pair<Text, Text>& r) {
  for (std::size_t p = 0; p + 1 < t.size(); ++p) {
    if (t[p] == r.first && t[p + 1] == r.second) return p;
  }
  return std::nullopt;
}

inline void merge_at(Toks& t, std::size_t p) {
  t[p] += t[p + 1];
  t.erase(t.begin() + static_cast<std::ptrdiff_t>(p) + 1);
}

// Highest-priority rule with an occurrence, applied at its leftmost one.
// `fired` collects the rules used.
inline Tokenization sp(const Dictionary& d, TextView w, std::set<std::size_t>* fired = nullptr) {
  const auto rules = rules_of(d);
  Toks t = singletons(w);
  for (;;) {
    bool applied = false;
    for (std::size_t i = 0; i < rules.size() && !applied; ++i) {
      if (auto p = first_position(t, rules[i])) {
        merge_at(t, *p);
        if (fired) fired->insert(i);
        applied = true;
      }
    }
    if (!applied) return to_tokenization(t);
  }
}

// Highest-priority applicable rule, applied by a left-to-right sweep that
// does not revisit merged tokens; repeat.
inline Tokenization hf(const Dictionary& d, TextView w, std::set<std::size_t>* fired = nullptr) {
  const auto rules = rules_of(d);
  Toks t = singletons(w);
  for (;;) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < rules.size() && !pick; ++i) {
      if (first_position(t, rules[i])) pick = i;
    }
    if (!pick) return to_tokenization(t);
    if (fired) fired->insert(*pick);
    Toks next;
    for (std::size_t p = 0; p < t.size(); ++p) {
      if (p + 1 < t.size() && t[p] == rules[*pick].first && t[p + 1] == rules[*pick].second) {
        next.push_back(t[p] + t[p + 1]);
        ++p;
      } else {
        next.push_back(t[p]);
      }
    }
    t = std::move(next);
  }
}

// Every terminal tokenization reachable by merges in any order.
inline std::set<Tokenization> base(const Dictionary& d, TextView w) {
  const auto rules = rules_of(d);
  std::set<Toks> seen{singletons(w)};
  std::vector<Toks> stack{singletons(w)};
  std::set<Tokenization> out;
  while (!stack.empty()) {
    Toks t = std::move(stack.back());
    stack.pop_back();
    bool terminal = true;
    for (std::size_t p = 0; p + 1 < t.size(); ++p) {
      for (const auto& r : rules) {
        if (t[p] != r.first || t[p + 1] != r.second) continue;
        terminal = false;
        Toks next = t;
        merge_at(next, p);
        if (seen.insert(next).second) stack.push_back(std::move(next));
      }
    }
    if (terminal) out.insert(to_tokenization(t));
  }
  return out;
}

// Direct reading: every multi-symbol side equals uv of some earlier rule.
inline bool proper(const Dictionary& d) {
  const auto rules = rules_of(d);
  for (std::size_t j = 0; j < rules.size(); ++j) {
    for (const Text& side : {rules[j].first, rules[j].second}) {
      if (side.size() < 2) continue;
      bool produced = false;
      for (std::size_t i = 0; i < j; ++i) produced |= rules[i].first + rules[i].second == side;
      if (!produced) return false;
    }
  }
  return true;
}

// Rules that fire on at least one string of length <= max_len over
// `alphabet`.
inline std::set<std::size_t> useful(const Dictionary& d, bool huggingface, TextView alphabet,
                                    std::size_t max_len) {
  std::set<std::size_t> fired;
  Text w;
  std::function<void()> rec = [&] {
    if (huggingface) {
      hf(d, w, &fired);
    } else {
      sp(d, w, &fired);
    }
    if (w.size() == max_len) return;
    for (Symbol s : alphabet) {
      w.push_back(s);
      rec();
      w.pop_back();
    }
  };
  rec();
  return fired;
}

// Longest sequence of rules that keeps its relative order in every
// ordering reachable by exchanging neighbours approved by `independent`.
// Explores all reachable orderings, so only for tiny dictionaries.
inline std::size_t chain_length(const Dictionary& d,
                                const std::function<bool(const Rule&, const Rule&)>& independent) {
  const std::size_t n = d.size();
  std::vector<std::size_t> start(n);
  for (std::size_t i = 0; i < n; ++i) start[i] = i;
  std::set<std::vector<std::size_t>> seen{start};
  std::vector<std::vector<std::size_t>> stack{start};
  // always_before[a][b]: rule a precedes rule b in every reachable order.
  std::vector<std::vector<bool>> always_before(n, std::vector<bool>(n, true));
  while (!stack.empty()) {
    std::vector<std::size_t> order = std::move(stack.back());
    stack.pop_back();
    std::vector<std::size_t> rank(n);
    for (std::size_t p = 0; p < n; ++p) rank[order[p]] = p;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (rank[a] >= rank[b]) always_before[a][b] = false;
      }
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      if (!independent(d[order[p]], d[order[p + 1]])) continue;
      std::vector<std::size_t> next = order;
      std::swap(next[p], next[p + 1]);
      if (seen.insert(next).second) stack.push_back(std::move(next));
    }
  }
  std::vector<std::size_t> longest(n, 1);
  std::size_t best = 0;
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a < b; ++a) {
      if (always_before[a][b]) longest[b] = std::max(longest[b], longest[a] + 1);
    }
    best = std::max(best, longest[b]);
  }
  return best;
}

// Plain BPE training: count non-overlapping pairs per entry left to right,
// keep the most frequent (ties: earliest first occurrence, then smaller
// pair), stop below two occurrences.
inline std::pair<Dictionary, std::vector<Toks>> train(const std::vector<Text>& corpus,
                                                      std::size_t num_rules) {
  std::vector<Toks> entries;
  for (const Text& s : corpus) entries.push_back(singletons(s));
  std::vector<Rule> rules;
  while (rules.size() < num_rules) {
    std::map<std::pair<Text, Text>, std::pair<std::size_t, std::size_t>> stats;
    std::size_t position = 0;
    for (const Toks& t : entries) {
      std::map<std::pair<Text, Text>, std::size_t> last_end;
      for (std::size_t p = 0; p + 1 < t.size(); ++p, ++position) {
        const auto key = std::pair(t[p], t[p + 1]);
        auto it = last_end.find(key);
        if (it != last_end.end() && it->second > p) continue;  // overlapping
        last_end[key] = p + 2;
        auto [s, inserted] = stats.try_emplace(key, 0, position);
        ++s->second.first;
      }
      position += 2;
    }
    const std::pair<Text, Text>* best = nullptr;
    std::pair<std::size_t, std::size_t> best_stat{0, 0};
    for (const auto& [pair, stat] : stats) {
      const bool better = best == nullptr || stat.first > best_stat.first ||
                          (stat.first == best_stat.first && stat.second < best_stat.second);
      if (better) {
        best = &pair;
        best_stat = stat;
      }
    }
    if (best == nullptr || best_stat.first < 2) break;
    const auto chosen = *best;
    rules.push_back(Rule{Token(chosen.first), Token(chosen.second)});
    for (Toks& t : entries) {
      Toks next;
      for (std::size_t p = 0; p < t.size(); ++p) {
        if (p + 1 < t.size() && t[p] == chosen.first && t[p + 1] == chosen.second) {
          next.push_back(t[p] + t[p + 1]);
          ++p;
        } else {
          next.push_back(t[p]);
        }
      }
      t = std::move(next);
    }
  }
  return {Dictionary(std::move(rules)), entries};
}

}  // namespace oracle
}  // namespace bpetk::test

namespace bpetk::test {

// Arbitrary rules with sides of 1..max_side symbols over `alphabet`;
// usually improper.
inline Dictionary random_dictionary(std::mt19937_64& rng, TextView alphabet,
                                    std::size_t max_rules, std::size_t max_side) {
  std::vector<Rule> rules;
  std::set<std::pair<Text, Text>> seen;
  const std::size_t n = rng() % (max_rules + 1);
  for (std::size_t attempt = 0; rules.size() < n && attempt < 10 * n; ++attempt) {
    Text sides[2];
    for (Text& s : sides) {
      s.resize(1 + rng() % max_side);
      for (Symbol& c : s) c = alphabet[rng() % alphabet.size()];
    }
    if (seen.emplace(sides[0], sides[1]).second) {
      rules.push_back(Rule{Token(sides[0]), Token(sides[1])});
    }
  }
  return Dictionary(std::move(rules));
}

inline Text random_text(std::mt19937_64& rng, TextView alphabet, std::size_t max_len) {
  Text w(rng() % (max_len + 1), 0);
  for (Symbol& c : w) c = alphabet[rng() % alphabet.size()];
  return w;
}

}  // namespace bpetk::test
