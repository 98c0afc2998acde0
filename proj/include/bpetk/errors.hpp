#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bpetk {

// Base class of every error the library throws. The command line front end
// maps each subclass onto a fixed exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed dictionary file, escape sequence or encoded input.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, std::size_t line = 0)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  // 1-based line number, or 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateRuleError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ImproperDictionaryError : public Error {
 public:
  using Error::Error;
};

// The reserved end-padding symbol showed up where only alphabet symbols are
// allowed.
class ReservedSymbolError : public Error {
 public:
  using Error::Error;
};

class InputTooLongError : public Error {
 public:
  using Error::Error;
};

class OffsetOutOfRangeError : public Error {
 public:
  using Error::Error;
};

// Raised by the streaming verifier when a token emitted with the configured
// lookahead differs from the one a wider window selects.
class LookaheadTooSmallError : public Error {
 public:
  LookaheadTooSmallError(const std::string& message, std::size_t offset,
                         std::size_t lookahead)
      : Error(message), offset_(offset), lookahead_(lookahead) {}

  // Symbol offset of the first wrongly emitted token.
  std::size_t offset() const noexcept { return offset_; }
  std::size_t lookahead() const noexcept { return lookahead_; }

 private:
  std::size_t offset_;
  std::size_t lookahead_;
};

}  // namespace bpetk
