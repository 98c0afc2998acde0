#include "bpetk/dict_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "bpetk/errors.hpp"
#include "bpetk/text.hpp"

namespace bpetk {
namespace {

constexpr std::string_view kHeader = "#bpetk-dict";

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

Alphabet parse_header(std::string_view line, std::size_t line_no) {
  const auto parts = fields(line);
  if (parts.size() < 2 || parts[0] != kHeader || parts[1] != "v1") {
    throw ParseError("unsupported dictionary header", line_no);
  }
  Alphabet alphabet = Alphabet::bytes;
  for (std::size_t i = 2; i < parts.size(); ++i) {
    if (!parts[i].starts_with("alphabet=")) {
      throw ParseError("unknown header field '" + std::string(parts[i]) + "'", line_no);
    }
    try {
      alphabet = parse_alphabet(parts[i].substr(9));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return alphabet;
}

Token parse_token(std::string_view field, Alphabet alphabet, std::size_t line_no) {
  Text symbols;
  try {
    symbols = unescape(field, alphabet);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line_no);
  }
  if (symbols.find(kPadSymbol) != Text::npos) {
    throw ParseError("the padding symbol cannot appear in a rule", line_no);
  }
  return Token(std::move(symbols));
}

}  // namespace

Dictionary parse_dictionary(std::string_view content) {
  Alphabet alphabet = Alphabet::bytes;
  std::vector<std::pair<std::string_view, std::size_t>> rule_lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1 && line.starts_with(kHeader)) {
      alphabet = parse_header(line, line_no);
      continue;
    }
    if (line.empty() || line.starts_with('#')) continue;
    rule_lines.emplace_back(line, line_no);
  }

  std::vector<Rule> rules;
  rules.reserve(rule_lines.size());
  std::set<std::pair<Text, Text>> seen;
  for (const auto& [line, n] : rule_lines) {
    const auto parts = fields(line);
    if (parts.size() != 2) {
      throw ParseError("expected two tokens, found " + std::to_string(parts.size()), n);
    }
    Rule rule{parse_token(parts[0], alphabet, n), parse_token(parts[1], alphabet, n)};
    if (!seen.emplace(rule.left.symbols(), rule.right.symbols()).second) {
      throw DuplicateRuleError("line " + std::to_string(n) + ": duplicate rule " +
                               to_string(rule));
    }
    rules.push_back(std::move(rule));
  }
  return Dictionary(std::move(rules), alphabet);
}

std::string render_dictionary(const Dictionary& d) {
  std::string out = std::string(kHeader) + " v1 alphabet=" +
                    std::string(alphabet_name(d.alphabet())) + "\n";
  for (const Rule& r : d.rules()) {
    std::string left = escape(r.left.view(), d.alphabet());
    if (left.starts_with('#')) left.replace(0, 1, "\\x23");
    out += left;
    out += ' ';
    out += escape(r.right.view(), d.alphabet());
    out += '\n';
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return std::move(buffer).str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("error writing '" + path + "'");
}

Dictionary load_dictionary(const std::string& path) {
  return parse_dictionary(read_file(path));
}

void save_dictionary(const Dictionary& d, const std::string& path) {
  write_file(path, render_dictionary(d));
}

void append_token_line(TextView token, Alphabet alphabet, std::string& out) {
  out += escape(token, alphabet);
  out += '\n';
}

void append_token_record(TextView token, Alphabet alphabet, std::string& out) {
  const std::size_t at = out.size();
  out.append(4, '\0');
  encode_append(token, alphabet, out);
  const auto len = static_cast<std::uint32_t>(out.size() - at - 4);
  for (int i = 0; i < 4; ++i) out[at + i] = static_cast<char>((len >> (8 * i)) & 0xFF);
}

}  // namespace bpetk
