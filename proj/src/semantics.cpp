#include "bpetk/semantics.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "bpetk/errors.hpp"

namespace bpetk {
namespace {

constexpr std::uint32_t kNone = 0xFFFFFFFFu;

struct EntryAfter {
  template <class E>
  bool operator()(const E& a, const E& b) const noexcept {
    return a.key > b.key;
  }
};

void merge_at(std::vector<Token>& tokens, std::size_t p) {
  tokens[p] = Token(tokens[p].symbols() + tokens[p + 1].symbols());
  tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(p) + 1);
}

bool rule_matches(const Rule& r, const std::vector<Token>& tokens, std::size_t p) {
  return tokens[p] == r.left && tokens[p + 1] == r.right;
}

}  // namespace

Semantics parse_semantics(std::string_view name) {
  if (name == "sp") return Semantics::sp;
  if (name == "hf") return Semantics::hf;
  throw ParseError("unknown semantics '" + std::string(name) + "'");
}

std::string_view semantics_name(Semantics s) {
  return s == Semantics::sp ? "sp" : "hf";
}

// ---------------------------------------------------------------------------
// Merger

void Merger::fenwick_reset(std::size_t n) {
  fenwick_.assign(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    fenwick_[i] += 1;
    const std::size_t parent = i + (i & (~i + 1));
    if (parent <= n) fenwick_[parent] += fenwick_[i];
  }
}

void Merger::fenwick_remove(std::size_t i) {
  for (std::size_t k = i + 1; k < fenwick_.size(); k += k & (~k + 1)) fenwick_[k] -= 1;
}

std::size_t Merger::fenwick_prefix(std::size_t i) const {
  std::int64_t sum = 0;
  for (std::size_t k = i; k > 0; k -= k & (~k + 1)) sum += fenwick_[k];
  return static_cast<std::size_t>(sum);
}

void Merger::push_pair(std::uint32_t left) {
  if (left == kNone) return;
  const std::uint32_t right = next_[left];
  if (right == kNone) return;
  const Merge* m = dict_->find_merge(id_[left], id_[right]);
  if (m == nullptr) return;
  heap_.push_back(Entry{(static_cast<std::uint64_t>(m->rule) << 32) | left, right,
                        id_[left], id_[right], m->product});
  std::push_heap(heap_.begin(), heap_.end(), EntryAfter{});
}

Merger::Entry Merger::pop() {
  std::pop_heap(heap_.begin(), heap_.end(), EntryAfter{});
  Entry e = heap_.back();
  heap_.pop_back();
  return e;
}

bool Merger::valid(const Entry& e) const noexcept {
  const auto left = static_cast<std::uint32_t>(e.key);
  // Dead nodes carry kInertToken, which never appears in an entry.
  return id_[left] == e.left_id && next_[left] == e.right && id_[e.right] == e.right_id;
}

void Merger::merge(const Entry& e, DerivationTrace* trace) {
  const auto left = static_cast<std::uint32_t>(e.key);
  const std::uint32_t right = e.right;
  if (trace != nullptr) {
    trace->steps.push_back(DerivationStep{static_cast<std::size_t>(e.key >> 32),
                                          fenwick_prefix(left), live_});
    fenwick_remove(right);
  }
  len_[left] += len_[right];
  id_[left] = e.product;
  id_[right] = kInertToken;
  const std::uint32_t after = next_[right];
  next_[left] = after;
  if (after != kNone) prev_[after] = left;
  --live_;
  push_pair(prev_[left]);
  push_pair(left);
}

void Merger::run(std::span<const Symbol> text, Semantics s,
                 std::vector<std::uint32_t>& lengths, DerivationTrace* trace) {
  const std::size_t n = text.size();
  lengths.clear();
  if (n == 0) return;
  if (n >= kNone) throw std::length_error("input too long for the merge engine");

  len_.assign(n, 1);
  id_.resize(n);
  next_.resize(n);
  prev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    id_[i] = dict_->symbol_id(text[i]);
    next_[i] = i + 1 < n ? static_cast<std::uint32_t>(i + 1) : kNone;
    prev_[i] = i > 0 ? static_cast<std::uint32_t>(i - 1) : kNone;
  }
  live_ = n;
  if (trace != nullptr) fenwick_reset(n);

  heap_.clear();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (id_[i] == kInertToken || id_[i + 1] == kInertToken) continue;
    push_pair(static_cast<std::uint32_t>(i));
  }

  if (s == Semantics::sp) {
    while (!heap_.empty()) {
      const Entry e = pop();
      if (valid(e)) merge(e, trace);
    }
  } else {
    while (!heap_.empty()) {
      const Entry first = pop();
      if (!valid(first)) continue;
      // `first` names the highest-priority applicable rule. Its remaining
      // occurrences are the other queued entries for the same rule, already
      // in left-to-right order. A merge cannot create a new occurrence of
      // its own rule because the product is longer than either side.
      const std::uint64_t rule = first.key >> 32;
      batch_.clear();
      batch_.push_back(first);
      while (!heap_.empty() && (heap_.front().key >> 32) == rule) batch_.push_back(pop());
      if (trace != nullptr) trace->phase_starts.push_back(trace->steps.size());
      for (const Entry& e : batch_) {
        if (valid(e)) merge(e, trace);
      }
    }
  }

  lengths.reserve(live_);
  for (std::uint32_t i = 0; i != kNone; i = next_[i]) lengths.push_back(len_[i]);
}

// ---------------------------------------------------------------------------
// Public entry points

std::vector<Decomposition> applicable_decompositions(const Dictionary& d,
                                                     const Tokenization& t) {
  std::vector<Decomposition> out;
  if (t.size() < 2) return out;
  std::vector<TokenId> ids;
  ids.reserve(t.size());
  for (const Token& tok : t) ids.push_back(d.token_id(tok.view()));
  for (std::size_t p = 0; p + 1 < ids.size(); ++p) {
    if (const Merge* m = d.find_merge(ids[p], ids[p + 1])) out.push_back({m->rule, p});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Tokenization tokenize(const Dictionary& d, TextView w, Semantics s) {
  Merger merger(d);
  std::vector<std::uint32_t> lengths;
  merger.run(std::span<const Symbol>(w.data(), w.size()), s, lengths);
  return Tokenization::from_lengths(w, lengths);
}

DerivationTrace tokenize_traced(const Dictionary& d, TextView w, Semantics s) {
  Merger merger(d);
  std::vector<std::uint32_t> lengths;
  DerivationTrace trace;
  merger.run(std::span<const Symbol>(w.data(), w.size()), s, lengths, &trace);
  trace.result = Tokenization::from_lengths(w, lengths);
  return trace;
}

Tokenization tokenize_sp(const Dictionary& d, TextView w) {
  return tokenize(d, w, Semantics::sp);
}
DerivationTrace tokenize_sp_traced(const Dictionary& d, TextView w) {
  return tokenize_traced(d, w, Semantics::sp);
}
Tokenization tokenize_hf(const Dictionary& d, TextView w) {
  return tokenize(d, w, Semantics::hf);
}
DerivationTrace tokenize_hf_traced(const Dictionary& d, TextView w) {
  return tokenize_traced(d, w, Semantics::hf);
}

Tokenization replay(const Dictionary& d, TextView w,
                    std::span<const DerivationStep> steps) {
  std::vector<Token> tokens = trivial_tokenization(w).tokens();
  for (const DerivationStep& step : steps) {
    if (step.before_length != tokens.size() || step.position + 1 >= tokens.size() ||
        step.rule_index >= d.size() || !rule_matches(d[step.rule_index], tokens, step.position)) {
      throw std::invalid_argument("derivation step does not apply");
    }
    merge_at(tokens, step.position);
  }
  return Tokenization(std::move(tokens));
}

std::set<Tokenization> enumerate_base(const Dictionary& d, TextView w,
                                      std::size_t max_len) {
  if (w.size() > max_len || w.size() > 64) {
    throw InputTooLongError("enumerate_base: input of length " + std::to_string(w.size()) +
                            " exceeds the limit of " + std::to_string(std::min<std::size_t>(max_len, 64)));
  }
  std::set<Tokenization> results;
  if (w.empty()) {
    results.insert(Tokenization{});
    return results;
  }
  // A tokenization of w is fully described by its cut set: bit b is set when
  // a token boundary follows symbol b.
  const std::size_t cuts = w.size() - 1;
  const std::uint64_t all = cuts == 64 ? ~0ull : ((1ull << cuts) - 1);
  std::unordered_set<std::uint64_t> seen{all};
  std::vector<std::uint64_t> stack{all};
  std::vector<std::size_t> starts;
  while (!stack.empty()) {
    const std::uint64_t mask = stack.back();
    stack.pop_back();
    starts.clear();
    starts.push_back(0);
    for (std::size_t b = 0; b < cuts; ++b) {
      if (mask >> b & 1) starts.push_back(b + 1);
    }
    starts.push_back(w.size());
    bool terminal = true;
    for (std::size_t t = 0; t + 2 < starts.size(); ++t) {
      const TextView left = w.substr(starts[t], starts[t + 1] - starts[t]);
      const TextView right = w.substr(starts[t + 1], starts[t + 2] - starts[t + 1]);
      if (d.find_merge(d.token_id(left), d.token_id(right)) == nullptr) continue;
      terminal = false;
      const std::uint64_t next = mask & ~(1ull << (starts[t + 1] - 1));
      if (seen.insert(next).second) stack.push_back(next);
    }
    if (terminal) {
      std::vector<std::uint32_t> lengths;
      for (std::size_t t = 0; t + 1 < starts.size(); ++t) {
        lengths.push_back(static_cast<std::uint32_t>(starts[t + 1] - starts[t]));
      }
      results.insert(Tokenization::from_lengths(w, lengths));
    }
  }
  return results;
}

namespace reference {

DerivationTrace tokenize_sp(const Dictionary& d, TextView w) {
  DerivationTrace trace;
  std::vector<Token> tokens = trivial_tokenization(w).tokens();
  for (;;) {
    bool applied = false;
    for (std::size_t r = 0; r < d.size() && !applied; ++r) {
      for (std::size_t p = 0; p + 1 < tokens.size(); ++p) {
        if (!rule_matches(d[r], tokens, p)) continue;
        trace.steps.push_back({r, p, tokens.size()});
        merge_at(tokens, p);
        applied = true;
        break;
      }
    }
    if (!applied) break;
  }
  trace.result = Tokenization(std::move(tokens));
  return trace;
}

DerivationTrace tokenize_hf(const Dictionary& d, TextView w) {
  DerivationTrace trace;
  std::vector<Token> tokens = trivial_tokenization(w).tokens();
  auto applies_anywhere = [&](std::size_t r) {
    for (std::size_t p = 0; p + 1 < tokens.size(); ++p) {
      if (rule_matches(d[r], tokens, p)) return true;
    }
    return false;
  };
  for (;;) {
    std::size_t r = 0;
    while (r < d.size() && !applies_anywhere(r)) ++r;
    if (r == d.size()) break;
    trace.phase_starts.push_back(trace.steps.size());
    while (applies_anywhere(r)) {
      std::size_t p = 0;
      while (p + 1 < tokens.size()) {
        if (rule_matches(d[r], tokens, p)) {
          trace.steps.push_back({r, p, tokens.size()});
          merge_at(tokens, p);
        } else {
          ++p;
        }
      }
    }
  }
  trace.result = Tokenization(std::move(tokens));
  return trace;
}

}  // namespace reference
}  // namespace bpetk
