#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "bpetk/core.hpp"

namespace bpetk {

// Textual escaping shared by dictionary files and token output.
//
//   backslash  -> \\          space -> \s
//   newline    -> \n          CR    -> \r      tab -> \t
//   other non-printable symbols -> \xHH (or \u{H..} above 0xFF in chars)
//
// The result never contains a raw space or line break.
std::string escape(TextView symbols, Alphabet alphabet);

// Inverse of escape(). Throws ParseError on malformed escapes or, in the
// chars profile, on invalid UTF-8.
Text unescape(std::string_view escaped, Alphabet alphabet);

// Raw input bytes to symbols: one symbol per byte, or UTF-8 decoding.
Text decode(std::string_view bytes, Alphabet alphabet);

// Symbols back to raw bytes. Throws std::invalid_argument for symbols that
// the profile cannot encode.
std::string encode(TextView symbols, Alphabet alphabet);
void encode_append(TextView symbols, Alphabet alphabet, std::string& out);

Alphabet parse_alphabet(std::string_view name);
std::string_view alphabet_name(Alphabet alphabet);

// Incremental strict UTF-8 decoder for byte streams split at arbitrary
// points.
class Utf8Decoder {
 public:
  // Returns a scalar once a full sequence has been consumed.
  std::optional<Symbol> push(std::uint8_t byte);

  // Throws ParseError if a sequence is left incomplete.
  void finish() const;

 private:
  char32_t partial_ = 0;
  int remaining_ = 0;
  char32_t min_value_ = 0;
  std::size_t offset_ = 0;
};

}  // namespace bpetk
