#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "bpetk/core.hpp"
#include "bpetk/dictionary.hpp"

namespace bpetk {

enum class FuzzMode { sp_vs_hf, stream_vs_batch, concat_vs_full, swap_equivalence };

FuzzMode parse_fuzz_mode(std::string_view name);
std::string_view fuzz_mode_name(FuzzMode mode);

// Generator for trial t of a run seeded with `seed`. Trials are independent,
// so any one of them can be replayed on its own.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

struct RandomDictionaryOptions {
  std::size_t min_alphabet = 2;
  std::size_t max_alphabet = 5;
  std::size_t max_rules = 30;
  std::size_t max_corpus_len = 120;
};

// A dictionary trained on random strings over the first few letters of
// "abcde". Training only ever produces proper dictionaries. `alphabet`
// receives the letters used.
Dictionary random_trained_dictionary(std::mt19937_64& rng,
                                     const RandomDictionaryOptions& options = {},
                                     Text* alphabet = nullptr);

// Uniform string of length 0..max_len over `alphabet` (non-empty).
Text random_string(std::mt19937_64& rng, TextView alphabet, std::size_t max_len);

// The same rules in a random order; usually improper.
Dictionary shuffle_rules(const Dictionary& d, std::mt19937_64& rng);

struct FuzzOptions {
  FuzzMode mode = FuzzMode::sp_vs_hf;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  // Fixed dictionary for every trial; random trained ones otherwise.
  std::optional<Dictionary> dictionary;
  // Shuffle the rule order of each trial's dictionary.
  bool mutate = false;
  std::size_t max_len = 200;
  RandomDictionaryOptions generator;
};

struct Counterexample {
  std::size_t trial = 0;
  Dictionary dictionary;
  Text input;
  std::string what;
  std::string expected_label;
  Tokenization expected;
  std::string actual_label;
  Tokenization actual;
};

struct FuzzResult {
  std::size_t trials = 0;
  // Trials that could not run, e.g. stream checks on improper dictionaries.
  std::size_t skipped = 0;
  // sp/hf divergences on improper dictionaries. Expected, not failures.
  std::size_t findings = 0;
  std::optional<Counterexample> first_finding;
  // First property violation; the run stops there.
  std::optional<Counterexample> failure;
};

// Runs the trials in order. Counterexample inputs are shrunk by deleting
// symbols while the discrepancy persists.
FuzzResult run_fuzz(const FuzzOptions& options);

std::string describe(const Counterexample& c);

}  // namespace bpetk
