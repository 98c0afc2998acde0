#include <algorithm>
#include <unordered_map>

#include "bpetk/analysis.hpp"
#include "bpetk/errors.hpp"

namespace bpetk {
namespace {

struct PairStat {
  std::size_t count = 0;
  std::size_t first_seen = 0;
  std::size_t last_counted = 0;
};

class Vocabulary {
 public:
  std::uint32_t intern(const Text& s) {
    auto [it, inserted] = ids_.try_emplace(s, static_cast<std::uint32_t>(strings_.size()));
    if (inserted) strings_.push_back(s);
    return it->second;
  }
  const Text& operator[](std::uint32_t id) const { return strings_[id]; }

 private:
  std::unordered_map<Text, std::uint32_t> ids_;
  std::vector<Text> strings_;
};

}  // namespace

TrainResult train_bpe_detailed(std::span<const Text> corpus, std::size_t num_rules,
                               Alphabet alphabet, const TrainObserver& observer) {
  Vocabulary vocab;
  std::vector<std::vector<std::uint32_t>> entries;
  entries.reserve(corpus.size());
  for (const Text& text : corpus) {
    if (text.find(kPadSymbol) != Text::npos) {
      throw ReservedSymbolError("training corpus contains the padding symbol");
    }
    std::vector<std::uint32_t>& ids = entries.emplace_back();
    ids.reserve(text.size());
    for (Symbol s : text) ids.push_back(vocab.intern(Text(1, s)));
  }

  TrainResult result;
  std::vector<Rule> rules;
  std::unordered_map<std::uint64_t, PairStat> stats;
  std::vector<std::uint32_t> merged;

  while (rules.size() < num_rules) {
    stats.clear();
    // Positions are numbered globally with a gap between entries so that
    // the overlap check below never links two different entries.
    std::size_t position = 0;
    for (const auto& ids : entries) {
      for (std::size_t i = 0; i + 1 < ids.size(); ++i, ++position) {
        const std::uint64_t key = (static_cast<std::uint64_t>(ids[i]) << 32) | ids[i + 1];
        auto [it, inserted] = stats.try_emplace(key);
        PairStat& st = it->second;
        if (inserted) {
          st.first_seen = position;
        } else if (ids[i] == ids[i + 1] && st.last_counted + 1 == position) {
          continue;  // overlaps the occurrence just counted
        }
        ++st.count;
        st.last_counted = position;
      }
      position += 2;
    }

    const std::pair<const std::uint64_t, PairStat>* best = nullptr;
    for (const auto& entry : stats) {
      if (best == nullptr || entry.second.count > best->second.count) {
        best = &entry;
        continue;
      }
      if (entry.second.count < best->second.count) continue;
      if (entry.second.first_seen != best->second.first_seen) {
        if (entry.second.first_seen < best->second.first_seen) best = &entry;
        continue;
      }
      const auto pair_of = [&](std::uint64_t k) {
        return std::pair(vocab[static_cast<std::uint32_t>(k >> 32)],
                         vocab[static_cast<std::uint32_t>(k)]);
      };
      if (pair_of(entry.first) < pair_of(best->first)) best = &entry;
    }
    if (best == nullptr || best->second.count < 2) {
      result.halted_early = true;
      break;
    }

    const auto left = static_cast<std::uint32_t>(best->first >> 32);
    const auto right = static_cast<std::uint32_t>(best->first);
    const std::uint32_t product = vocab.intern(vocab[left] + vocab[right]);
    TrainStep step{Rule{Token(vocab[left]), Token(vocab[right])}, best->second.count};
    rules.push_back(step.rule);
    if (observer) observer(rules.size() - 1, step);
    result.steps.push_back(std::move(step));

    for (auto& ids : entries) {
      merged.clear();
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i + 1 < ids.size() && ids[i] == left && ids[i + 1] == right) {
          merged.push_back(product);
          ++i;
        } else {
          merged.push_back(ids[i]);
        }
      }
      ids.swap(merged);
    }
  }

  result.dictionary = Dictionary(std::move(rules), alphabet);
  result.tokenization.reserve(entries.size());
  for (const auto& ids : entries) {
    std::vector<Token> tokens;
    tokens.reserve(ids.size());
    for (std::uint32_t id : ids) tokens.emplace_back(vocab[id]);
    result.tokenization.emplace_back(std::move(tokens));
  }
  return result;
}

Dictionary train_bpe(std::span<const Text> corpus, std::size_t num_rules, Alphabet alphabet) {
  return train_bpe_detailed(corpus, num_rules, alphabet).dictionary;
}

}  // namespace bpetk
