#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bpetk/errors.hpp"
#include "bpetk/semantics.hpp"
#include "support.hpp"

using namespace bpetk;
using namespace bpetk::test;

namespace {

const Dictionary& example1() {
  static const Dictionary d = dict({{"a", "b"}, {"a", "bc"}, {"b", "c"}, {"ab", "c"}});
  return d;
}

const Dictionary& example2() {
  static const Dictionary d = dict({{"c", "ab"}, {"ab", "c"}, {"a", "b"}});
  return d;
}

const Dictionary& example3() {
  static const Dictionary d = dict({{"ab", "a"}, {"a", "b"}});
  return d;
}

}  // namespace

TEST_CASE("semantics names") {
  CHECK(parse_semantics("sp") == Semantics::sp);
  CHECK(parse_semantics("hf") == Semantics::hf);
  CHECK_THROWS_AS(parse_semantics("bpe"), ParseError);
  CHECK(semantics_name(Semantics::hf) == "hf");
}

TEST_CASE("first worked example with its derivation") {
  const DerivationTrace trace = tokenize_sp_traced(example1(), T("abcbcab"));
  CHECK(trace.result == toks("abc|bc|ab"));
  const std::vector<DerivationStep> expected{{0, 0, 7}, {0, 4, 6}, {2, 2, 5}, {3, 0, 4}};
  CHECK(trace.steps == expected);
  CHECK(replay(example1(), T("abcbcab"), trace.steps) == trace.result);
  CHECK(tokenize_sp(example1(), T("abcbcab")) == trace.result);
}

TEST_CASE("second worked example") {
  CHECK(tokenize_sp(example2(), T("abcabcabcabc")) == toks("abc|abc|abc|abc"));
  CHECK(tokenize_sp(example2(), T("bcabcabcabc")) == toks("b|cab|cab|cab|c"));
  CHECK(tokenize_sp(example2(), T("cabcabcabcabc")) == toks("cab|cab|cab|cab|c"));
}

TEST_CASE("third worked example: the semantics differ") {
  CHECK(tokenize_sp(example3(), T("abababab")) == toks("aba|b|aba|b"));
  CHECK(tokenize_hf(example3(), T("abababab")) == toks("ab|ab|ab|ab"));
  CHECK(tokenize_sp(example3(), T("abab")) != tokenize_hf(example3(), T("abab")));
  CHECK(tokenize(example3(), T("abababab"), Semantics::hf) == toks("ab|ab|ab|ab"));
}

TEST_CASE("huggingface trace groups steps by rule") {
  const DerivationTrace trace = tokenize_hf_traced(example3(), T("abababab"));
  REQUIRE(trace.phase_starts == std::vector<std::size_t>{0});
  CHECK(trace.steps.size() == 4);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    CHECK(trace.steps[i].rule_index == 1);
    CHECK(trace.steps[i].position == i);
  }
  CHECK(replay(example3(), T("abababab"), trace.steps) == trace.result);

  const DerivationTrace two = tokenize_hf_traced(example1(), T("abcbcab"));
  CHECK(two.phase_starts.size() >= 2);
  CHECK(replay(example1(), T("abcbcab"), two.steps) == two.result);
}

TEST_CASE("trivial inputs") {
  CHECK(tokenize_sp(example1(), Text()).empty());
  CHECK(tokenize_hf(example1(), Text()).empty());
  CHECK(tokenize_sp(example1(), T("x")) == toks("x"));
  CHECK(tokenize_sp(Dictionary(), T("abc")) == toks("a|b|c"));
  CHECK(tokenize_sp_traced(Dictionary(), T("ab")).steps.empty());
}

TEST_CASE("applicable decompositions") {
  const auto ds = applicable_decompositions(example1(), toks("a|b|c|b|c|a|b"));
  const std::vector<Decomposition> expected{{0, 0}, {0, 5}, {2, 1}, {2, 3}};
  CHECK(ds == expected);
  CHECK(applicable_decompositions(example1(), toks("abc|bc|ab")).empty());
}

TEST_CASE("replay rejects illegal steps") {
  const std::vector<DerivationStep> bad{{2, 0, 3}};
  CHECK_THROWS_AS(replay(example1(), T("abc"), bad), std::invalid_argument);
  const std::vector<DerivationStep> wrong_length{{0, 0, 5}};
  CHECK_THROWS_AS(replay(example1(), T("abc"), wrong_length), std::invalid_argument);
}

TEST_CASE("base tokenizations") {
  const auto all = enumerate_base(example1(), T("abcbcab"));
  CHECK(all.contains(toks("abc|bc|ab")));
  CHECK(all == oracle::base(example1(), T("abcbcab")));
  CHECK(enumerate_base(Dictionary(), T("ab")) == std::set<Tokenization>{toks("a|b")});
  CHECK(enumerate_base(example1(), Text()) == std::set<Tokenization>{Tokenization()});
  CHECK_THROWS_AS(enumerate_base(example1(), Text(13, 'a')), InputTooLongError);
  CHECK_NOTHROW(enumerate_base(example1(), Text(13, 'a'), 13));
}

TEST_CASE("indexed tokenizers agree with the definitional oracles") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 3000; ++trial) {
    const Dictionary d = random_dictionary(rng, U"abc", 10, 3);
    const Text w = random_text(rng, U"abc", 30);
    CAPTURE(trial);
    REQUIRE(tokenize_sp(d, w) == oracle::sp(d, w));
    REQUIRE(tokenize_hf(d, w) == oracle::hf(d, w));
    REQUIRE(reference::tokenize_sp(d, w).result == oracle::sp(d, w));
    REQUIRE(reference::tokenize_hf(d, w).result == oracle::hf(d, w));
  }
}

TEST_CASE("traces replay and match the reference traces") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const Dictionary d = random_dictionary(rng, U"ab", 8, 3);
    const Text w = random_text(rng, U"ab", 24);
    CAPTURE(trial);
    const DerivationTrace sp = tokenize_sp_traced(d, w);
    const DerivationTrace hf = tokenize_hf_traced(d, w);
    REQUIRE(sp == reference::tokenize_sp(d, w));
    REQUIRE(hf == reference::tokenize_hf(d, w));
    REQUIRE(replay(d, w, sp.steps) == sp.result);
    REQUIRE(replay(d, w, hf.steps) == hf.result);
  }
}

TEST_CASE("both semantics produce base tokenizations") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Dictionary d = random_dictionary(rng, U"abc", 8, 2);
    const Text w = random_text(rng, U"abc", 9);
    CAPTURE(trial);
    const auto all = enumerate_base(d, w);
    REQUIRE(all == oracle::base(d, w));
    REQUIRE(all.contains(tokenize_sp(d, w)));
    REQUIRE(all.contains(tokenize_hf(d, w)));
  }
}

TEST_CASE("merger handles symbols outside the byte range") {
  std::vector<Rule> rules{Rule{Token(Text(U"一")), Token(Text(U"\U0001F600"))}};
  const Dictionary d(rules, Alphabet::chars);
  CHECK(tokenize_sp(d, U"一\U0001F600x").size() == 2);
  CHECK(tokenize_sp(d, Text(3, kPadSymbol)).size() == 3);
}

TEST_CASE("proper dictionaries with two rules of one product can split the semantics") {
  // ab ≀ c and a ≀ bc both produce abc. Properness only asks that each side
  // be produced earlier, so it does not rule this out, and the two semantics
  // pick different producers for the second abc.
  const Dictionary d = dict({{"b", "c"}, {"a", "b"}, {"ab", "c"}, {"abc", "a"}, {"a", "bc"}});
  REQUIRE(oracle::proper(d));
  CHECK(tokenize_sp(d, T("abcabc")) == toks("abca|bc"));
  CHECK(tokenize_hf(d, T("abcabc")) == toks("abc|abc"));
  CHECK(oracle::sp(d, T("abcabc")) == toks("abca|bc"));
  CHECK(oracle::hf(d, T("abcabc")) == toks("abc|abc"));
}
