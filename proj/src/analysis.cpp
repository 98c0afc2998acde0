#include "bpetk/analysis.hpp"

#include <algorithm>
#include <unordered_map>

#include "bpetk/errors.hpp"

namespace bpetk {
namespace {

// Some non-empty suffix of `a` equals a prefix of `b`.
bool suffix_meets_prefix(TextView a, TextView b) {
  const std::size_t limit = std::min(a.size(), b.size());
  for (std::size_t len = 1; len <= limit; ++len) {
    if (a.substr(a.size() - len) == b.substr(0, len)) return true;
  }
  return false;
}

void require_proper(const Dictionary& d, const char* what) {
  const PropernessReport report = check_proper(d);
  if (!report.proper) {
    throw ImproperDictionaryError(std::string(what) + " requires a proper dictionary; rule " +
                                  std::to_string(report.violations.front().rule_index) + ": " +
                                  report.violations.front().reason());
  }
}

}  // namespace

std::string_view side_name(RuleSide side) {
  return side == RuleSide::left ? "left" : "right";
}

std::string PropernessViolation::reason() const {
  std::string out = std::string(side_name(side)) + " side is not produced by any earlier rule";
  if (producer) out += " (first producer is rule " + std::to_string(*producer) + ")";
  return out;
}

PropernessReport check_proper(const Dictionary& d) {
  // First (highest-priority) rule producing each string.
  std::unordered_map<Text, std::size_t> producer;
  producer.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) producer.try_emplace(d[i].product(), i);

  PropernessReport report;
  for (std::size_t j = 0; j < d.size(); ++j) {
    for (RuleSide side : {RuleSide::left, RuleSide::right}) {
      const Token& t = side == RuleSide::left ? d[j].left : d[j].right;
      if (t.size() <= 1) continue;
      auto it = producer.find(t.symbols());
      if (it != producer.end() && it->second < j) continue;
      PropernessViolation v{j, side, std::nullopt};
      if (it != producer.end()) v.producer = it->second;
      report.violations.push_back(v);
    }
  }
  report.proper = report.violations.empty();
  return report;
}

bool is_proper(const Dictionary& d) { return check_proper(d).proper; }

std::set<std::size_t> useful_rules(const Dictionary& d, Semantics s) {
  std::set<std::size_t> useful;
  Merger merger(d);
  std::vector<std::uint32_t> lengths;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Text product = d[i].product();
    DerivationTrace trace;
    merger.run(std::span<const Symbol>(product.data(), product.size()), s, lengths, &trace);
    for (const DerivationStep& step : trace.steps) {
      if (step.rule_index == i) {
        useful.insert(i);
        break;
      }
    }
  }
  return useful;
}

std::size_t sufficient_lookahead(const Dictionary& d) {
  require_proper(d, "sufficient_lookahead");
  return d.size() * d.max_rule_size();
}

bool swap_independent(const Rule& r, const Rule& r2) {
  const Text a = r.product();
  const Text b = r2.product();
  return !suffix_meets_prefix(a, b) && !suffix_meets_prefix(b, a) &&
         b.find(a) == Text::npos && a.find(b) == Text::npos;
}

std::size_t chain_length_upper_bound(const Dictionary& d) {
  require_proper(d, "chain_length_upper_bound");
  // Two rules that are not swap independent keep their relative order in
  // every dictionary reachable by exchanging independent neighbours; the
  // orders reachable that way are exactly the linear extensions of this
  // dependency relation. The longest dependent chain is therefore present,
  // in order, in all of them.
  std::vector<std::size_t> longest(d.size(), 1);
  std::size_t best = 0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (longest[i] + 1 > longest[j] && !swap_independent(d[i], d[j])) {
        longest[j] = longest[i] + 1;
      }
    }
    best = std::max(best, longest[j]);
  }
  return best;
}

AnalysisReport analyze(const Dictionary& d) {
  AnalysisReport report;
  report.properness = check_proper(d);
  report.rule_count = d.size();
  report.total_size = d.total_size();
  report.max_rule_size = d.max_rule_size();
  const std::set<std::size_t> sp = useful_rules(d, Semantics::sp);
  const std::set<std::size_t> hf = useful_rules(d, Semantics::hf);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!sp.contains(i)) report.useless_sp.insert(i);
    if (!hf.contains(i)) report.useless_hf.insert(i);
  }
  if (report.properness.proper) {
    report.sufficient_lookahead = d.size() * d.max_rule_size();
    report.chain_length_upper_bound = chain_length_upper_bound(d);
    report.improved_lookahead = *report.chain_length_upper_bound * d.max_rule_size();
  }
  return report;
}

}  // namespace bpetk
