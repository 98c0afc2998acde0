#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bpetk/dict_file.hpp"
#include "bpetk/errors.hpp"
#include "bpetk/text.hpp"
#include "support.hpp"

using namespace bpetk;
using namespace bpetk::test;

TEST_CASE("tokens are non-empty and compare by content") {
  CHECK_THROWS_AS(Token{Text()}, std::invalid_argument);
  CHECK(Token(T("ab")) == Token(T("ab")));
  CHECK(Token(T("ab")) < Token(T("b")));
}

TEST_CASE("tokenization helpers") {
  const Tokenization t = toks("abc|bc|ab");
  CHECK(t.size() == 3);
  CHECK(concat(t) == T("abcbcab"));
  CHECK(t.lengths() == std::vector<std::uint32_t>{3, 2, 2});
  CHECK(t.slice(1, 2) == toks("bc|ab"));
  const std::vector<std::uint32_t> lens{1, 2};
  CHECK(Tokenization::from_lengths(T("abc"), lens) == toks("a|bc"));
  const std::vector<std::uint32_t> short_lens{1, 1};
  CHECK_THROWS_AS(Tokenization::from_lengths(T("abc"), short_lens), std::invalid_argument);
  CHECK(trivial_tokenization(T("abc")) == toks("a|b|c"));
  CHECK(trivial_tokenization(Text()).empty());
  CHECK(to_string(toks("ab|c")) == "ab ≀ c");
}

TEST_CASE("refinement") {
  CHECK(is_refinement(toks("a|b|c|d"), toks("ab|cd")));
  CHECK(is_refinement(toks("ab|cd"), toks("ab|cd")));
  CHECK_FALSE(is_refinement(toks("a|bc|d"), toks("ab|cd")));
  CHECK_FALSE(is_refinement(toks("ab|cd"), toks("a|b|cd")));
  CHECK(is_refinement(Tokenization(), Tokenization()));
}

TEST_CASE("escape round trip over all bytes") {
  Text all;
  for (Symbol s = 0; s < 256; ++s) all.push_back(s);
  const std::string escaped = escape(all, Alphabet::bytes);
  CHECK(escaped.find(' ') == std::string::npos);
  CHECK(escaped.find('\n') == std::string::npos);
  CHECK(unescape(escaped, Alphabet::bytes) == all);
  CHECK(escape(T("a b\\"), Alphabet::bytes) == "a\\sb\\\\");
}

TEST_CASE("escape round trip in the chars profile") {
  const Text w = U"h\u00e9llo \u2200x\U0001F600\u0085\t";
  const std::string escaped = escape(w, Alphabet::chars);
  CHECK(unescape(escaped, Alphabet::chars) == w);
  CHECK(escape(Text(1, kPadSymbol), Alphabet::chars) == "\\z");
}

TEST_CASE("malformed escapes are parse errors") {
  CHECK_THROWS_AS(unescape("a\\", Alphabet::bytes), ParseError);
  CHECK_THROWS_AS(unescape("\\x4", Alphabet::bytes), ParseError);
  CHECK_THROWS_AS(unescape("\\xZZ", Alphabet::bytes), ParseError);
  CHECK_THROWS_AS(unescape("\\q", Alphabet::bytes), ParseError);
  CHECK_THROWS_AS(unescape("\\u{41}", Alphabet::bytes), ParseError);
  CHECK_THROWS_AS(unescape("\\u{D800}", Alphabet::chars), ParseError);
  CHECK(unescape("\\u{41}", Alphabet::chars) == U"A");
}

TEST_CASE("utf-8 decoding") {
  CHECK(decode("a\xC3\xA9", Alphabet::chars) == U"a\u00e9");
  CHECK(decode("a\xC3\xA9", Alphabet::bytes).size() == 3);
  CHECK_THROWS_AS(decode("\xC3", Alphabet::chars), ParseError);
  CHECK_THROWS_AS(decode("\xC0\x80", Alphabet::chars), ParseError);  // overlong
  CHECK_THROWS_AS(decode("\xED\xA0\x80", Alphabet::chars), ParseError);  // surrogate
  CHECK(encode(U"a\u00e9\U0001F600", Alphabet::chars) == "a\xC3\xA9\xF0\x9F\x98\x80");
  CHECK_THROWS_AS(encode(U"\u0100", Alphabet::bytes), std::invalid_argument);

  Utf8Decoder d;
  const std::string bytes = "\xF0\x9F\x98\x80";
  for (std::size_t i = 0; i + 1 < bytes.size(); ++i) {
    CHECK_FALSE(d.push(static_cast<std::uint8_t>(bytes[i])));
  }
  CHECK_THROWS_AS(d.finish(), ParseError);
  CHECK(d.push(static_cast<std::uint8_t>(bytes.back())) == Symbol(0x1F600));
  CHECK_NOTHROW(d.finish());
}

TEST_CASE("dictionary index") {
  const Dictionary d = dict({{"a", "b"}, {"a", "bc"}, {"b", "c"}, {"ab", "c"}});
  CHECK(d.size() == 4);
  CHECK(d.total_size() == 2 + 3 + 2 + 3);
  CHECK(d.max_rule_size() == 3);
  CHECK(d.find_rule(Token(T("a")), Token(T("bc"))) == 1u);
  CHECK_FALSE(d.find_rule(Token(T("b")), Token(T("a"))));
  CHECK(d.symbols() == T("abc"));
  CHECK(d.symbol_id('z') == kInertToken);
  CHECK(d.token_id(T("abc")) != kInertToken);
  CHECK(d.token_id(T("ca")) == kInertToken);

  const Dictionary s = d.with_swapped(0);
  CHECK(s[0] == d[1]);
  CHECK(s[1] == d[0]);
  CHECK(s.find_rule(Token(T("a")), Token(T("b"))) == 1u);
  CHECK(Dictionary().max_rule_size() == 0);
}

TEST_CASE("dictionary rejects duplicates and the padding symbol") {
  CHECK_THROWS_AS(dict({{"a", "b"}, {"c", "d"}, {"a", "b"}}), DuplicateRuleError);
  std::vector<Rule> rules{Rule{Token(Text(1, kPadSymbol)), Token(T("a"))}};
  CHECK_THROWS_AS(Dictionary{rules}, ReservedSymbolError);
}

TEST_CASE("dictionary files round trip") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rule> rules;
    std::set<std::pair<Text, Text>> seen;
    const std::size_t n = rng() % 12;
    while (rules.size() < n) {
      Text l(1 + rng() % 3, 0);
      Text r(1 + rng() % 3, 0);
      for (Symbol& s : l) s = static_cast<Symbol>(rng() % 256);
      for (Symbol& s : r) s = static_cast<Symbol>(rng() % 256);
      if (rng() % 4 == 0) l[0] = '#';
      if (seen.emplace(l, r).second) rules.push_back(Rule{Token(l), Token(r)});
    }
    const Dictionary d(rules);
    const std::string text = render_dictionary(d);
    CHECK(text.starts_with("#bpetk-dict v1 alphabet=bytes\n"));
    CHECK(parse_dictionary(text) == d);
  }
}

TEST_CASE("dictionary file syntax") {
  const Dictionary d = parse_dictionary(
      "#bpetk-dict v1 alphabet=chars\n"
      "# a comment\n"
      "\n"
      "a b\r\n"
      "\\x23 \u00e9\\s\n");
  REQUIRE(d.size() == 2);
  CHECK(d.alphabet() == Alphabet::chars);
  CHECK(d[1].left.symbols() == U"#");
  CHECK(d[1].right.symbols() == U"\u00e9 ");
  CHECK(parse_dictionary(render_dictionary(d)) == d);

  CHECK(parse_dictionary("").empty());
  CHECK(parse_dictionary("a b").alphabet() == Alphabet::bytes);

  try {
    parse_dictionary("a b\nc\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_dictionary("a b c\n"), ParseError);
  CHECK_THROWS_AS(parse_dictionary("a \\q\n"), ParseError);
  CHECK_THROWS_AS(parse_dictionary("#bpetk-dict v2\n"), ParseError);
  CHECK_THROWS_AS(parse_dictionary("#bpetk-dict v1 alphabet=words\n"), ParseError);
  CHECK_THROWS_AS(parse_dictionary("a b\nc d\na b\n"), DuplicateRuleError);
  CHECK_THROWS_AS(parse_dictionary("a \\z\n"), ParseError);
}

TEST_CASE("token output formats") {
  std::string lines;
  append_token_line(T("a b"), Alphabet::bytes, lines);
  append_token_line(T("\n"), Alphabet::bytes, lines);
  CHECK(lines == "a\\sb\n\\n\n");

  std::string records;
  append_token_record(T("ab"), Alphabet::bytes, records);
  append_token_record(U"\u00e9", Alphabet::chars, records);
  CHECK(records == std::string("\x02\x00\x00\x00" "ab" "\x02\x00\x00\x00" "\xC3\xA9", 12));
}
