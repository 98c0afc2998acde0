#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bpetk/core.hpp"
#include "bpetk/dictionary.hpp"
#include "bpetk/semantics.hpp"

namespace bpetk {

enum class RuleSide { left, right };

std::string_view side_name(RuleSide side);

struct PropernessViolation {
  std::size_t rule_index = 0;
  RuleSide side = RuleSide::left;
  // Index of the first rule producing that side, if one exists at all. It is
  // always >= rule_index, otherwise there would be no violation.
  std::optional<std::size_t> producer;

  std::string reason() const;

  friend bool operator==(const PropernessViolation&, const PropernessViolation&) = default;
};

struct PropernessReport {
  bool proper = true;
  std::vector<PropernessViolation> violations;
};

// A dictionary is proper when every multi-symbol rule side is the product of
// a strictly higher-priority rule.
PropernessReport check_proper(const Dictionary& d);
bool is_proper(const Dictionary& d);

// Rules that fire when tokenizing their own product u v. A rule fires for
// some input iff it fires for that one.
std::set<std::size_t> useful_rules(const Dictionary& d, Semantics s);

// |D| * max |uv|. Throws ImproperDictionaryError for improper dictionaries.
std::size_t sufficient_lookahead(const Dictionary& d);

// Sufficient condition for two neighbouring rules to be exchangeable without
// changing any tokenization: the products u v and u' v' do not overlap at
// either end and neither contains the other.
bool swap_independent(const Rule& r, const Rule& r2);

// Upper bound on the chain length: the longest sequence of rules, in
// priority order, in which consecutive rules may not be exchanged. Every
// ordering reachable by swapping independent neighbours keeps such a chain
// intact, so only chains of this dependency order can force lookahead.
// Throws ImproperDictionaryError for improper dictionaries.
std::size_t chain_length_upper_bound(const Dictionary& d);

struct AnalysisReport {
  PropernessReport properness;
  std::set<std::size_t> useless_sp;
  std::set<std::size_t> useless_hf;
  std::size_t rule_count = 0;
  std::size_t total_size = 0;
  std::size_t max_rule_size = 0;
  // Only computed for proper dictionaries.
  std::optional<std::size_t> sufficient_lookahead;
  std::optional<std::size_t> chain_length_upper_bound;
  std::optional<std::size_t> improved_lookahead;
  std::optional<std::size_t> empirical_lookahead;
};

AnalysisReport analyze(const Dictionary& d);

// --- Training --------------------------------------------------------------

struct TrainStep {
  Rule rule;
  std::size_t count = 0;
};

struct TrainResult {
  Dictionary dictionary;
  std::vector<TrainStep> steps;
  // Corpus tokenization after the last merge, one entry per corpus string.
  std::vector<Tokenization> tokenization;
  bool halted_early = false;
};

using TrainObserver = std::function<void(std::size_t iteration, const TrainStep&)>;

// Greedy BPE training. Each round counts adjacent token pairs in the current
// corpus tokenization (non-overlapping, left to right, never across corpus
// entries), appends the most frequent pair as the next rule and merges it
// everywhere. Ties go to the pair seen first, then to the smaller pair.
// Stops early when no pair occurs at least twice. Throws
// ReservedSymbolError if the corpus contains the padding symbol.
TrainResult train_bpe_detailed(std::span<const Text> corpus, std::size_t num_rules,
                               Alphabet alphabet = Alphabet::bytes,
                               const TrainObserver& observer = {});

Dictionary train_bpe(std::span<const Text> corpus, std::size_t num_rules,
                     Alphabet alphabet = Alphabet::bytes);

}  // namespace bpetk
