#include "bpetk/text.hpp"

#include <stdexcept>

#include "bpetk/errors.hpp"

namespace bpetk {
namespace {

constexpr char kHex[] = "0123456789ABCDEF";

void append_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_scalar(char32_t cp) {
  return cp < 0x110000 && !(cp >= 0xD800 && cp <= 0xDFFF);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string escape(TextView symbols, Alphabet alphabet) {
  std::string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) {
    switch (s) {
      case U'\\': out += "\\\\"; continue;
      case U' ': out += "\\s"; continue;
      case U'\n': out += "\\n"; continue;
      case U'\r': out += "\\r"; continue;
      case U'\t': out += "\\t"; continue;
      default: break;
    }
    if (s == kPadSymbol) {
      out += "\\z";
    } else if (s > 0x20 && s < 0x7F) {
      out.push_back(static_cast<char>(s));
    } else if (s <= 0xFF && (alphabet == Alphabet::bytes || s < 0xA0)) {
      out += "\\x";
      out.push_back(kHex[s >> 4]);
      out.push_back(kHex[s & 0xF]);
    } else if (is_scalar(s) && alphabet == Alphabet::chars) {
      append_utf8(s, out);
    } else {
      out += "\\u{";
      std::string digits;
      for (char32_t v = s; v != 0; v >>= 4) digits.insert(digits.begin(), kHex[v & 0xF]);
      out += digits + "}";
    }
  }
  return out;
}

Text unescape(std::string_view escaped, Alphabet alphabet) {
  Text out;
  Utf8Decoder utf8;
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    const char c = escaped[i];
    if (c != '\\') {
      if (alphabet == Alphabet::bytes) {
        out.push_back(static_cast<unsigned char>(c));
      } else if (auto cp = utf8.push(static_cast<std::uint8_t>(c))) {
        out.push_back(*cp);
      }
      continue;
    }
    utf8.finish();
    if (++i == escaped.size()) throw ParseError("dangling backslash");
    switch (escaped[i]) {
      case '\\': out.push_back(U'\\'); break;
      case 's': out.push_back(U' '); break;
      case 'n': out.push_back(U'\n'); break;
      case 'r': out.push_back(U'\r'); break;
      case 't': out.push_back(U'\t'); break;
      case 'x': {
        if (i + 2 >= escaped.size()) throw ParseError("truncated \\x escape");
        const int hi = hex_value(escaped[i + 1]);
        const int lo = hex_value(escaped[i + 2]);
        if (hi < 0 || lo < 0) throw ParseError("bad \\x escape");
        out.push_back(static_cast<Symbol>(hi * 16 + lo));
        i += 2;
        break;
      }
      case 'u': {
        if (alphabet == Alphabet::bytes) {
          throw ParseError("\\u{} escape is not valid in the bytes alphabet");
        }
        if (i + 1 >= escaped.size() || escaped[i + 1] != '{') {
          throw ParseError("bad \\u escape");
        }
        std::size_t j = i + 2;
        char32_t value = 0;
        std::size_t digits = 0;
        while (j < escaped.size() && escaped[j] != '}') {
          const int h = hex_value(escaped[j]);
          if (h < 0 || ++digits > 6) throw ParseError("bad \\u escape");
          value = value * 16 + static_cast<char32_t>(h);
          ++j;
        }
        if (j == escaped.size() || digits == 0 || !is_scalar(value)) {
          throw ParseError("bad \\u escape");
        }
        out.push_back(value);
        i = j;
        break;
      }
      default:
        throw ParseError(std::string("unknown escape \\") + escaped[i]);
    }
  }
  utf8.finish();
  return out;
}

Text decode(std::string_view bytes, Alphabet alphabet) {
  if (alphabet == Alphabet::bytes) return from_bytes(bytes);
  Text out;
  out.reserve(bytes.size());
  Utf8Decoder utf8;
  for (char c : bytes) {
    if (auto cp = utf8.push(static_cast<std::uint8_t>(c))) out.push_back(*cp);
  }
  utf8.finish();
  return out;
}

void encode_append(TextView symbols, Alphabet alphabet, std::string& out) {
  for (Symbol s : symbols) {
    if (alphabet == Alphabet::bytes) {
      if (s > 0xFF) throw std::invalid_argument("symbol does not fit in a byte");
      out.push_back(static_cast<char>(s));
    } else {
      if (!is_scalar(s)) throw std::invalid_argument("symbol is not a Unicode scalar");
      append_utf8(s, out);
    }
  }
}

std::string encode(TextView symbols, Alphabet alphabet) {
  std::string out;
  out.reserve(symbols.size());
  encode_append(symbols, alphabet, out);
  return out;
}

Alphabet parse_alphabet(std::string_view name) {
  if (name == "bytes") return Alphabet::bytes;
  if (name == "chars") return Alphabet::chars;
  throw ParseError("unknown alphabet '" + std::string(name) + "'");
}

std::string_view alphabet_name(Alphabet alphabet) {
  return alphabet == Alphabet::bytes ? "bytes" : "chars";
}

std::optional<Symbol> Utf8Decoder::push(std::uint8_t byte) {
  const std::size_t at = offset_++;
  if (remaining_ == 0) {
    if (byte < 0x80) return static_cast<Symbol>(byte);
    if ((byte & 0xE0) == 0xC0) {
      partial_ = byte & 0x1F; remaining_ = 1; min_value_ = 0x80;
    } else if ((byte & 0xF0) == 0xE0) {
      partial_ = byte & 0x0F; remaining_ = 2; min_value_ = 0x800;
    } else if ((byte & 0xF8) == 0xF0) {
      partial_ = byte & 0x07; remaining_ = 3; min_value_ = 0x10000;
    } else {
      throw ParseError("invalid UTF-8 lead byte at offset " + std::to_string(at));
    }
    return std::nullopt;
  }
  if ((byte & 0xC0) != 0x80) {
    throw ParseError("invalid UTF-8 continuation at offset " + std::to_string(at));
  }
  partial_ = (partial_ << 6) | (byte & 0x3F);
  if (--remaining_ != 0) return std::nullopt;
  if (partial_ < min_value_ || !is_scalar(partial_)) {
    throw ParseError("invalid UTF-8 sequence ending at offset " + std::to_string(at));
  }
  return partial_;
}

void Utf8Decoder::finish() const {
  if (remaining_ != 0) throw ParseError("truncated UTF-8 sequence");
}

}  // namespace bpetk
