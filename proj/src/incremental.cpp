#include "bpetk/incremental.hpp"

#include <stdexcept>

#include "bpetk/analysis.hpp"
#include "bpetk/errors.hpp"
#include "bpetk/semantics.hpp"

namespace bpetk {
namespace {

void check_correct([[maybe_unused]] const Dictionary& d,
                   [[maybe_unused]] const Tokenization& t,
                   [[maybe_unused]] const char* which) {
#ifndef NDEBUG
  if (tokenize_sp(d, concat(t)) != t) {
    throw std::invalid_argument(std::string("concat_tokenizations: ") + which +
                                " is not the tokenization of its string");
  }
#endif
}

}  // namespace

std::size_t default_widening_budget(const Dictionary& d) {
  if (!is_proper(d)) return kUnlimitedWidening;
  return 2 * chain_length_upper_bound(d);
}

ConcatOutcome concat_tokenizations(const Dictionary& d, const Tokenization& left,
                                   const Tokenization& right,
                                   std::optional<std::size_t> budget) {
  if (left.empty()) return ConcatOutcome{right, 0, 0, 0, false};
  if (right.empty()) return ConcatOutcome{left, 0, 0, 0, false};
  check_correct(d, left, "left");
  check_correct(d, right, "right");

  const std::size_t limit = budget ? *budget : default_widening_budget(d);
  const std::size_t n = left.size();
  const std::size_t m = right.size();
  // Window is left[i..n) followed by right[0..j], both ends inclusive.
  std::size_t i = n - 1;
  std::size_t j = 0;
  std::size_t left_widenings = 0;
  std::size_t right_widenings = 0;

  Merger merger(d);
  std::vector<std::uint32_t> lengths;
  Text window;
  for (;;) {
    window.clear();
    for (std::size_t k = i; k < n; ++k) window += left[k].symbols();
    for (std::size_t k = 0; k <= j; ++k) window += right[k].symbols();
    merger.run(std::span<const Symbol>(window.data(), window.size()), Semantics::sp, lengths);

    // The window's outer tokens start (end) where left[i] (right[j]) does,
    // so equal length means equal token.
    const bool first_agrees = lengths.front() == left[i].size();
    const bool last_agrees = lengths.back() == right[j].size();
    if ((first_agrees || i == 0) && (last_agrees || j == m - 1)) {
      ConcatOutcome out;
      std::vector<Token> tokens(left.begin(), left.begin() + static_cast<std::ptrdiff_t>(i));
      tokens.reserve(i + lengths.size() + (m - j - 1));
      std::size_t offset = 0;
      for (std::uint32_t len : lengths) {
        tokens.emplace_back(TextView(window).substr(offset, len));
        offset += len;
      }
      tokens.insert(tokens.end(), right.begin() + static_cast<std::ptrdiff_t>(j) + 1, right.end());
      out.result = Tokenization(std::move(tokens));
      out.left_rollback = n - 1 - i;
      out.right_rollback = j + 1;
      out.widenings = left_widenings + right_widenings;
      return out;
    }
    if (!first_agrees && i > 0) {
      --i;
      ++left_widenings;
    }
    if (!last_agrees && j < m - 1) {
      ++j;
      ++right_widenings;
    }
    if (left_widenings > limit || right_widenings > limit) {
      ConcatOutcome out;
      out.result = tokenize_sp(d, concat(left) + concat(right));
      out.left_rollback = n;
      out.right_rollback = m;
      out.widenings = left_widenings + right_widenings;
      out.fell_back = true;
      return out;
    }
  }
}

Tokenization splice_edit(const Dictionary& d, const Tokenization& original,
                         std::size_t edit_start, std::size_t edit_end, TextView replacement,
                         std::optional<std::size_t> budget) {
  const Text text = concat(original);
  if (edit_start > edit_end || edit_end > text.size()) {
    throw OffsetOutOfRangeError("edit range [" + std::to_string(edit_start) + ", " +
                                std::to_string(edit_end) + ") is outside a string of length " +
                                std::to_string(text.size()));
  }
  const std::size_t limit = budget ? *budget : default_widening_budget(d);

  // Keep tokens ending strictly before the edit and starting strictly after
  // it. Tokens touching the edit boundary are rebuilt with the middle.
  std::size_t prefix_tokens = 0;
  std::size_t prefix_end = 0;
  while (prefix_tokens < original.size() &&
         prefix_end + original[prefix_tokens].size() < edit_start) {
    prefix_end += original[prefix_tokens].size();
    ++prefix_tokens;
  }
  std::size_t suffix_tokens = 0;
  std::size_t suffix_start = text.size();
  while (suffix_tokens < original.size() - prefix_tokens &&
         suffix_start - original[original.size() - 1 - suffix_tokens].size() > edit_end) {
    suffix_start -= original[original.size() - 1 - suffix_tokens].size();
    ++suffix_tokens;
  }

  Text middle = text.substr(prefix_end, edit_start - prefix_end);
  middle += replacement;
  middle += TextView(text).substr(edit_end, suffix_start - edit_end);

  const Tokenization head = original.slice(0, prefix_tokens);
  const Tokenization tail = original.slice(original.size() - suffix_tokens, suffix_tokens);
  const Tokenization glued = concat_tokenizations(d, head, tokenize_sp(d, middle), limit).result;
  return concat_tokenizations(d, glued, tail, limit).result;
}

}  // namespace bpetk
