#pragma once

#include <cstddef>
#include <limits>
#include <optional>

#include "bpetk/core.hpp"
#include "bpetk/dictionary.hpp"

namespace bpetk {

struct ConcatOutcome {
  Tokenization result;
  std::size_t left_rollback = 0;   // tokens of `left` replaced (n - i)
  std::size_t right_rollback = 0;  // tokens of `right` inside the final window (j)
  std::size_t widenings = 0;       // total window growth steps taken
  bool fell_back = false;          // budget exhausted, fully retokenized
};

inline constexpr std::size_t kUnlimitedWidening = std::numeric_limits<std::size_t>::max();

// Widening budget used when none is given: twice the chain length bound for
// proper dictionaries, unlimited otherwise.
std::size_t default_widening_budget(const Dictionary& d);

// Tokenization of concat(left) + concat(right), given that both inputs are
// already correct (SentencePiece) tokenizations of their strings. A window
// around the seam is retokenized and grown one token at a time on each side
// until its outer tokens agree with the inputs. If either side grows more
// than `budget` times the whole string is retokenized instead.
//
// In builds without NDEBUG the input contract is checked and violations
// throw std::invalid_argument.
ConcatOutcome concat_tokenizations(const Dictionary& d, const Tokenization& left,
                                   const Tokenization& right,
                                   std::optional<std::size_t> budget = std::nullopt);

// Replaces symbols [edit_start, edit_end) of concat(original) by
// `replacement` and returns the tokenization of the edited string, reusing
// the tokens of `original` that lie strictly away from the edit. Throws
// OffsetOutOfRangeError for invalid offsets.
Tokenization splice_edit(const Dictionary& d, const Tokenization& original,
                         std::size_t edit_start, std::size_t edit_end, TextView replacement,
                         std::optional<std::size_t> budget = std::nullopt);

}  // namespace bpetk
