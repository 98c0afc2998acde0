#pragma once

#include <string>
#include <string_view>

#include "bpetk/core.hpp"
#include "bpetk/dictionary.hpp"

namespace bpetk {

// Dictionary text format, one rule per line in priority order:
//
//   #bpetk-dict v1 alphabet=bytes
//   a b
//   ab c
//
// Tokens are escaped with escape(). The header line is optional (bytes is
// assumed without it); other lines starting with '#' are comments and blank
// lines are skipped. A token that itself starts with '#' is written with
// its first symbol as \x23.
//
// Throws ParseError (with a line number) for malformed lines and
// DuplicateRuleError for a repeated rule.
Dictionary parse_dictionary(std::string_view content);
std::string render_dictionary(const Dictionary& d);

// File wrappers. Throw IoError when the file cannot be read or written.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
Dictionary load_dictionary(const std::string& path);
void save_dictionary(const Dictionary& d, const std::string& path);

// Token output: one escaped token per line, or binary records of a 4-byte
// little-endian byte length followed by the raw encoded token.
void append_token_line(TextView token, Alphabet alphabet, std::string& out);
void append_token_record(TextView token, Alphabet alphabet, std::string& out);

}  // namespace bpetk
