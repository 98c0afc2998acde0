#include "bpetk/fuzz.hpp"

#include <algorithm>
#include <functional>

#include "bpetk/analysis.hpp"
#include "bpetk/dict_file.hpp"
#include "bpetk/errors.hpp"
#include "bpetk/incremental.hpp"
#include "bpetk/semantics.hpp"
#include "bpetk/streaming.hpp"
#include "bpetk/text.hpp"

namespace bpetk {
namespace {

struct Mismatch {
  std::string what;
  std::string expected_label;
  Tokenization expected;
  std::string actual_label;
  Tokenization actual;
};

using Check = std::function<std::optional<Mismatch>(const Text&)>;

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Greedy one-symbol deletions while the check keeps failing.
Text shrink(Text w, const Check& check) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Text candidate = w;
      candidate.erase(i, 1);
      if (check(candidate)) {
        w = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return w;
}

Check sp_vs_hf_check(const Dictionary& d) {
  return [&d](const Text& w) -> std::optional<Mismatch> {
    Tokenization sp = tokenize_sp(d, w);
    Tokenization hf = tokenize_hf(d, w);
    if (sp == hf) return std::nullopt;
    return Mismatch{"SentencePiece and HuggingFace tokenizations differ", "sp", std::move(sp),
                    "hf", std::move(hf)};
  };
}

Check stream_check(const Dictionary& d) {
  return [&d](const Text& w) -> std::optional<Mismatch> {
    Tokenization batch = tokenize_sp(d, w);
    StreamSummary summary;
    Tokenization streamed = stream_tokenize(d, w, {}, &summary);
    if (streamed != batch) {
      return Mismatch{"streamed tokenization differs from batch", "batch", std::move(batch),
                      "stream", std::move(streamed)};
    }
    if (summary.peak_window > summary.lookahead) {
      return Mismatch{"window grew to " + std::to_string(summary.peak_window) +
                          " symbols, above the lookahead " + std::to_string(summary.lookahead),
                      "batch", std::move(batch), "stream", std::move(streamed)};
    }
    return std::nullopt;
  };
}

struct ConcatParams {
  std::size_t split;
  std::size_t edit_start;
  std::size_t edit_len;
  Text replacement;
  std::size_t budget;
};

Check concat_check(const Dictionary& d, ConcatParams p) {
  return [&d, p](const Text& w) -> std::optional<Mismatch> {
    Tokenization full = tokenize_sp(d, w);
    const std::size_t split = std::min(p.split, w.size());
    const Tokenization left = tokenize_sp(d, TextView(w).substr(0, split));
    const Tokenization right = tokenize_sp(d, TextView(w).substr(split));
    ConcatOutcome joined = concat_tokenizations(d, left, right, p.budget);
    if (joined.result != full) {
      return Mismatch{"concatenation at offset " + std::to_string(split) +
                          (joined.fell_back ? " (after fallback)" : "") +
                          " differs from full retokenization",
                      "full", std::move(full), "concat", std::move(joined.result)};
    }
    const std::size_t start = std::min(p.edit_start, w.size());
    const std::size_t end = std::min(start + p.edit_len, w.size());
    Text edited = w.substr(0, start) + p.replacement + w.substr(end);
    Tokenization expected = tokenize_sp(d, edited);
    Tokenization spliced = splice_edit(d, full, start, end, p.replacement, p.budget);
    if (spliced != expected) {
      return Mismatch{"edit [" + std::to_string(start) + ", " + std::to_string(end) + ") -> \"" +
                          escape(p.replacement, d.alphabet()) +
                          "\" differs from full retokenization",
                      "full", std::move(expected), "splice", std::move(spliced)};
    }
    return std::nullopt;
  };
}

Check swap_check(const Dictionary& d, const Dictionary& swapped, std::size_t index) {
  return [&d, &swapped, index](const Text& w) -> std::optional<Mismatch> {
    Tokenization original = tokenize_sp(d, w);
    Tokenization exchanged = tokenize_sp(swapped, w);
    if (original == exchanged) return std::nullopt;
    return Mismatch{"exchanging independent rules " + std::to_string(index) + " and " +
                        std::to_string(index + 1) + " changed the tokenization",
                    "original", std::move(original), "swapped", std::move(exchanged)};
  };
}

Counterexample make_counterexample(std::size_t trial, const Dictionary& d, Text w,
                                   const Check& check) {
  w = shrink(std::move(w), check);
  Mismatch m = *check(w);
  return Counterexample{trial,
                        d,
                        std::move(w),
                        std::move(m.what),
                        std::move(m.expected_label),
                        std::move(m.expected),
                        std::move(m.actual_label),
                        std::move(m.actual)};
}

}  // namespace

FuzzMode parse_fuzz_mode(std::string_view name) {
  if (name == "sp-vs-hf") return FuzzMode::sp_vs_hf;
  if (name == "stream-vs-batch") return FuzzMode::stream_vs_batch;
  if (name == "concat-vs-full") return FuzzMode::concat_vs_full;
  if (name == "swap-equivalence") return FuzzMode::swap_equivalence;
  throw ParseError("unknown fuzz mode '" + std::string(name) + "'");
}

std::string_view fuzz_mode_name(FuzzMode mode) {
  switch (mode) {
    case FuzzMode::sp_vs_hf: return "sp-vs-hf";
    case FuzzMode::stream_vs_batch: return "stream-vs-batch";
    case FuzzMode::concat_vs_full: return "concat-vs-full";
    case FuzzMode::swap_equivalence: return "swap-equivalence";
  }
  return "?";
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

Dictionary random_trained_dictionary(std::mt19937_64& rng, const RandomDictionaryOptions& options,
                                     Text* alphabet) {
  const Text letters = U"abcde";
  const std::size_t size =
      uniform(rng, std::max<std::size_t>(options.min_alphabet, 1),
              std::clamp<std::size_t>(options.max_alphabet, options.min_alphabet, letters.size()));
  const Text used = letters.substr(0, size);
  const std::size_t entries = uniform(rng, 1, 3);
  std::vector<Text> corpus;
  for (std::size_t e = 0; e < entries; ++e) {
    const std::size_t len = uniform(rng, 2, std::max<std::size_t>(options.max_corpus_len / entries, 2));
    Text s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(used[uniform(rng, 0, size - 1)]);
    corpus.push_back(std::move(s));
  }
  if (alphabet != nullptr) *alphabet = used;
  return train_bpe(corpus, uniform(rng, 1, options.max_rules));
}

Text random_string(std::mt19937_64& rng, TextView alphabet, std::size_t max_len) {
  const std::size_t len = uniform(rng, 0, max_len);
  Text w(len, 0);
  for (Symbol& s : w) s = alphabet[uniform(rng, 0, alphabet.size() - 1)];
  return w;
}

Dictionary shuffle_rules(const Dictionary& d, std::mt19937_64& rng) {
  std::vector<Rule> rules = d.rules();
  std::shuffle(rules.begin(), rules.end(), rng);
  return Dictionary(std::move(rules), d.alphabet());
}

FuzzResult run_fuzz(const FuzzOptions& options) {
  FuzzResult result;
  for (std::size_t trial = 0; trial < options.iterations; ++trial) {
    ++result.trials;
    std::mt19937_64 rng = trial_rng(options.seed, trial);
    Text alphabet;
    Dictionary d;
    if (options.dictionary) {
      d = *options.dictionary;
      alphabet = d.symbols();
    } else {
      d = random_trained_dictionary(rng, options.generator, &alphabet);
    }
    if (options.mutate) d = shuffle_rules(d, rng);
    if (alphabet.empty()) alphabet = U"a";
    const Text w = random_string(rng, alphabet, options.max_len);
    const bool proper = is_proper(d);

    switch (options.mode) {
      case FuzzMode::sp_vs_hf: {
        const Check check = sp_vs_hf_check(d);
        if (!check(w)) break;
        if (proper) {
          result.failure = make_counterexample(trial, d, w, check);
          return result;
        }
        ++result.findings;
        if (!result.first_finding) result.first_finding = make_counterexample(trial, d, w, check);
        break;
      }
      case FuzzMode::stream_vs_batch: {
        if (!proper) {
          ++result.skipped;
          break;
        }
        const Check check = stream_check(d);
        if (check(w)) {
          result.failure = make_counterexample(trial, d, w, check);
          return result;
        }
        break;
      }
      case FuzzMode::concat_vs_full: {
        if (!proper) {
          ++result.skipped;
          break;
        }
        ConcatParams p;
        p.split = uniform(rng, 0, w.size());
        p.edit_start = uniform(rng, 0, w.size());
        p.edit_len = uniform(rng, 0, std::min<std::size_t>(w.size() - p.edit_start, 16));
        p.replacement = random_string(rng, alphabet, 16);
        p.budget = default_widening_budget(d);
        const Check check = concat_check(d, p);
        if (check(w)) {
          result.failure = make_counterexample(trial, d, w, check);
          return result;
        }
        break;
      }
      case FuzzMode::swap_equivalence: {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i + 1 < d.size(); ++i) {
          if (swap_independent(d[i], d[i + 1])) candidates.push_back(i);
        }
        if (!proper || candidates.empty()) {
          ++result.skipped;
          break;
        }
        const std::size_t index = candidates[uniform(rng, 0, candidates.size() - 1)];
        const Dictionary swapped = d.with_swapped(index);
        const Check check = swap_check(d, swapped, index);
        if (check(w)) {
          result.failure = make_counterexample(trial, d, w, check);
          return result;
        }
        break;
      }
    }
  }
  return result;
}

std::string describe(const Counterexample& c) {
  std::string out = "trial " + std::to_string(c.trial) + ": " + c.what + "\n";
  out += "dictionary:\n" + render_dictionary(c.dictionary);
  out += "input: " + escape(c.input, c.dictionary.alphabet()) + "\n";
  out += c.expected_label + ": " + to_string(c.expected) + "\n";
  out += c.actual_label + ": " + to_string(c.actual) + "\n";
  return out;
}

}  // namespace bpetk
