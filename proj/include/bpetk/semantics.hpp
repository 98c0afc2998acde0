#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "bpetk/core.hpp"
#include "bpetk/dictionary.hpp"

namespace bpetk {

enum class Semantics { sp, hf };

Semantics parse_semantics(std::string_view name);
std::string_view semantics_name(Semantics s);

// One merge: tokens `position` and `position + 1` of a tokenization with
// `before_length` tokens are glued by rule `rule_index`.
struct DerivationStep {
  std::size_t rule_index = 0;
  std::size_t position = 0;
  std::size_t before_length = 0;

  friend bool operator==(const DerivationStep&, const DerivationStep&) = default;
};

struct DerivationTrace {
  std::vector<DerivationStep> steps;
  Tokenization result;
  // Index into `steps` where each rule phase begins. Only filled for the
  // HuggingFace semantics, which applies one rule exhaustively per phase.
  std::vector<std::size_t> phase_starts;

  friend bool operator==(const DerivationTrace&, const DerivationTrace&) = default;
};

struct Decomposition {
  std::size_t rule_index = 0;
  std::size_t position = 0;

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
  friend auto operator<=>(const Decomposition&, const Decomposition&) = default;
};

// Every (rule, position) at which a single merge step can be taken, sorted
// by rule then position.
std::vector<Decomposition> applicable_decompositions(const Dictionary& d,
                                                     const Tokenization& t);

// SentencePiece ("correct") tokenization: always the highest-priority
// applicable rule at its leftmost position.
Tokenization tokenize_sp(const Dictionary& d, TextView w);
DerivationTrace tokenize_sp_traced(const Dictionary& d, TextView w);

// HuggingFace tokenization: the highest-priority applicable rule is applied
// left to right until it no longer applies, then the rule is picked again.
Tokenization tokenize_hf(const Dictionary& d, TextView w);
DerivationTrace tokenize_hf_traced(const Dictionary& d, TextView w);

Tokenization tokenize(const Dictionary& d, TextView w, Semantics s);
DerivationTrace tokenize_traced(const Dictionary& d, TextView w, Semantics s);

// Re-applies `steps` starting from the trivial tokenization of w. Throws
// std::invalid_argument if a step does not describe a legal merge.
Tokenization replay(const Dictionary& d, TextView w,
                    std::span<const DerivationStep> steps);

inline constexpr std::size_t kDefaultEnumerationLimit = 12;

// All terminal tokenizations reachable from the trivial tokenization by
// merges in any order. Exponential; throws InputTooLongError when
// |w| > max_len.
std::set<Tokenization> enumerate_base(const Dictionary& d, TextView w,
                                      std::size_t max_len = kDefaultEnumerationLimit);

// Deliberately naive versions that rescan the whole tokenization against
// every rule at each step. Kept for differential tests against the indexed
// tokenizers above.
namespace reference {
DerivationTrace tokenize_sp(const Dictionary& d, TextView w);
DerivationTrace tokenize_hf(const Dictionary& d, TextView w);
}  // namespace reference

// Reusable merge engine behind tokenize_sp/tokenize_hf. Works on token
// lengths over a symbol span and keeps its buffers between calls, which the
// streaming and incremental code rely on to avoid allocation.
class Merger {
 public:
  explicit Merger(const Dictionary& d) : dict_(&d) {}

  // Replaces `lengths` with the token lengths of the tokenization of `text`.
  void run(std::span<const Symbol> text, Semantics s,
           std::vector<std::uint32_t>& lengths,
           DerivationTrace* trace = nullptr);

  const Dictionary& dictionary() const noexcept { return *dict_; }

 private:
  struct Entry {
    std::uint64_t key;  // rule << 32 | left node
    std::uint32_t right;
    TokenId left_id;
    TokenId right_id;
    TokenId product;
  };

  void push_pair(std::uint32_t left);
  bool valid(const Entry& e) const noexcept;
  void merge(const Entry& e, DerivationTrace* trace);
  Entry pop();

  // Fenwick tree over live nodes; maintained only while tracing.
  void fenwick_reset(std::size_t n);
  void fenwick_remove(std::size_t i);
  std::size_t fenwick_prefix(std::size_t i) const;

  const Dictionary* dict_;
  std::vector<std::uint32_t> len_;
  std::vector<TokenId> id_;
  std::vector<std::uint32_t> next_;
  std::vector<std::uint32_t> prev_;
  std::vector<Entry> heap_;
  std::vector<Entry> batch_;
  std::vector<std::int32_t> fenwick_;
  std::size_t live_ = 0;
};

}  // namespace bpetk
