#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bpetk/core.hpp"
#include "bpetk/dictionary.hpp"
#include "bpetk/semantics.hpp"

namespace bpetk {

// Fixed-capacity FIFO over a circular array.
template <typename T>
class RingBuffer {
 public:
  explicit RingBuffer(std::size_t capacity = 0) : data_(capacity) {}

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return data_.size(); }
  bool empty() const noexcept { return size_ == 0; }
  bool full() const noexcept { return size_ == data_.size(); }

  T& operator[](std::size_t i) noexcept { return data_[wrap(head_ + i)]; }
  const T& operator[](std::size_t i) const noexcept { return data_[wrap(head_ + i)]; }
  T& front() noexcept { return (*this)[0]; }
  T& back() noexcept { return (*this)[size_ - 1]; }

  // Caller guarantees !full().
  void push_back(const T& value) noexcept {
    data_[wrap(head_ + size_)] = value;
    ++size_;
  }
  void pop_front(std::size_t n = 1) noexcept {
    head_ = wrap(head_ + n);
    size_ -= n;
  }
  // Keeps only the first n elements.
  void truncate(std::size_t n) noexcept { size_ = n; }
  void clear() noexcept { head_ = size_ = 0; }

 private:
  std::size_t wrap(std::size_t i) const noexcept {
    return i >= data_.size() ? i - data_.size() : i;
  }

  std::vector<T> data_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

// w followed by pad_count copies of kPadSymbol, kept apart so the body can
// stay a plain alphabet string.
struct PaddedInput {
  Text body;
  std::size_t pad_count = 0;

  Text materialize() const { return body + Text(pad_count, kPadSymbol); }
  friend bool operator==(const PaddedInput&, const PaddedInput&) = default;
};

// Throws ReservedSymbolError if w already contains the padding symbol.
PaddedInput end_pad(TextView w, std::size_t k);

// First token of the tokenization of `window`, or nullopt when the window
// is empty or consists of padding only (the stream is done). With a window
// of at least the sufficient lookahead this is also the first token of
// every extension of the window. Throws ImproperDictionaryError.
std::optional<Token> first_token(const Dictionary& d, TextView window);

// first_token with a bounded memo keyed by window content. The properness
// check runs once, at construction.
class FirstTokenCache {
 public:
  explicit FirstTokenCache(const Dictionary& d, std::size_t capacity = 4096);

  std::optional<Token> operator()(TextView window);

  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }

 private:
  const Dictionary* dict_;
  std::size_t capacity_;
  std::unordered_map<Text, std::optional<Token>> memo_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

using TokenSink = std::function<void(TextView token)>;
// Returns the next input symbol, or nullopt at end of input.
using SymbolSource = std::function<std::optional<Symbol>()>;

struct StreamOptions {
  // Window size k; defaults to the sufficient lookahead. 0 is treated as 1.
  std::optional<std::size_t> lookahead;
  // Shadow-check every token against a tokenizer with a provably large
  // enough window; tokens reach the sink only after they were confirmed.
  bool verify = false;
};

struct StreamSummary {
  std::size_t lookahead = 0;
  std::size_t tokens_emitted = 0;
  std::size_t symbols_consumed = 0;
  std::size_t peak_window = 0;
  // Symbols handed to the merge engine plus symbols emitted; the quantity
  // that bounds running time.
  std::size_t work_steps = 0;
};

// Left-to-right tokenizer with a window of k symbols. Each time the window
// is full its first token is emitted and dropped. The window tokenization
// is kept up to date as symbols arrive by retokenizing only its tail, so
// the work per symbol depends on the dictionary and not on the input.
class StreamTokenizer {
 public:
  // Throws ImproperDictionaryError.
  StreamTokenizer(const Dictionary& d, TokenSink sink, StreamOptions options = {});
  ~StreamTokenizer();
  StreamTokenizer(StreamTokenizer&&) noexcept;
  StreamTokenizer& operator=(StreamTokenizer&&) noexcept;

  // Throws ReservedSymbolError for the padding symbol and, in verify mode,
  // LookaheadTooSmallError.
  void feed(Symbol s);
  void feed(TextView symbols);
  // Pads the end of input and flushes the remaining tokens. Idempotent.
  void finish();

  const StreamSummary& summary() const noexcept;

 private:
  class Window;
  struct Shadow;

  void deliver(std::size_t offset, TextView token);
  void confirm(std::size_t offset, TextView token);

  std::unique_ptr<Window> window_;
  std::unique_ptr<Shadow> shadow_;
  TokenSink sink_;
  mutable StreamSummary summary_;
  bool finished_ = false;
};

StreamSummary stream_tokenize(const Dictionary& d, const SymbolSource& input,
                              const TokenSink& sink, StreamOptions options = {});

// Convenience wrapper collecting the streamed tokens.
Tokenization stream_tokenize(const Dictionary& d, TextView w, StreamOptions options = {},
                             StreamSummary* summary = nullptr);

struct EmpiricalLookaheadOptions {
  std::size_t samples = 200;
  std::size_t max_len = 64;
  std::uint64_t seed = 0;
};

// Smallest k for which streaming matched batch tokenization on every
// sample. Samples mix uniform strings over the dictionary's symbols with
// concatenations of rule products. An estimate from below of the true
// lookahead constant, never above the sufficient lookahead; 1 for the empty
// dictionary. Throws ImproperDictionaryError.
std::size_t empirical_lookahead(const Dictionary& d, EmpiricalLookaheadOptions options = {});

}  // namespace bpetk
