#include "bpetk/streaming.hpp"

#include <algorithm>
#include <random>

#include "bpetk/analysis.hpp"
#include "bpetk/errors.hpp"

namespace bpetk {
namespace {

void require_proper(const Dictionary& d) {
  const PropernessReport report = check_proper(d);
  if (!report.proper) {
    const PropernessViolation& v = report.violations.front();
    throw ImproperDictionaryError("dictionary is not proper: rule " +
                                  std::to_string(v.rule_index) + " " + v.reason());
  }
}

bool all_padding(TextView window) {
  return std::all_of(window.begin(), window.end(), [](Symbol s) { return s == kPadSymbol; });
}

}  // namespace

PaddedInput end_pad(TextView w, std::size_t k) {
  if (w.find(kPadSymbol) != TextView::npos) {
    throw ReservedSymbolError("input contains the padding symbol");
  }
  return PaddedInput{Text(w), k};
}

std::optional<Token> first_token(const Dictionary& d, TextView window) {
  require_proper(d);
  if (all_padding(window)) return std::nullopt;
  return tokenize_sp(d, window).front();
}

FirstTokenCache::FirstTokenCache(const Dictionary& d, std::size_t capacity)
    : dict_(&d), capacity_(capacity) {
  require_proper(d);
}

std::optional<Token> FirstTokenCache::operator()(TextView window) {
  const Text key(window);
  if (auto it = memo_.find(key); it != memo_.end()) {
    ++hits_;
    return it->second;
  }
  ++misses_;
  std::optional<Token> value;
  if (!all_padding(window)) value = tokenize_sp(*dict_, window).front();
  if (memo_.size() >= capacity_) memo_.clear();
  memo_.emplace(key, value);
  return value;
}

// The k-symbol window together with its tokenization, stored as token
// lengths. Appending a symbol retokenizes from the last token and widens
// to the left until the leading retokenized token agrees with the old one.
class StreamTokenizer::Window {
 public:
  Window(const Dictionary& d, std::size_t k)
      : dict_(d), merger_(dict_), symbols_(k), lengths_(k) {}

  bool halted() const noexcept { return halted_; }
  std::size_t peak() const noexcept { return peak_; }
  std::size_t work() const noexcept { return work_; }

  // Appends one symbol; calls emit(offset, token) if the window filled up.
  template <typename Emit>
  void push(Symbol s, Emit&& emit) {
    if (halted_) return;
    symbols_.push_back(s);
    // A symbol no rule mentions cannot merge with anything, so the
    // tokenization just gains a singleton.
    if (lengths_.empty() || dict_.symbol_id(s) == kInertToken) {
      lengths_.push_back(1);
    } else {
      retokenize_tail();
    }
    peak_ = std::max(peak_, symbols_.size());
    if (!symbols_.full()) return;
    if (symbols_.front() == kPadSymbol) {
      // Padding only sits at the end, so the window is all padding.
      halted_ = true;
      return;
    }
    const std::uint32_t len = lengths_.front();
    token_.clear();
    for (std::uint32_t i = 0; i < len; ++i) token_.push_back(symbols_[i]);
    work_ += len;
    emit(offset_, TextView(token_));
    offset_ += len;
    symbols_.pop_front(len);
    lengths_.pop_front();
  }

  template <typename Emit>
  void finish(Emit&& emit) {
    while (!halted_) push(kPadSymbol, emit);
  }

 private:
  void retokenize_tail() {
    std::size_t i = lengths_.size() - 1;
    std::size_t start = symbols_.size() - 1 - lengths_[i];
    for (;;) {
      scratch_.clear();
      for (std::size_t p = start; p < symbols_.size(); ++p) scratch_.push_back(symbols_[p]);
      merger_.run(std::span<const Symbol>(scratch_.data(), scratch_.size()), Semantics::sp,
                  out_);
      work_ += scratch_.size();
      if (out_.front() == lengths_[i] || i == 0) break;
      --i;
      start -= lengths_[i];
    }
    lengths_.truncate(i);
    for (std::uint32_t len : out_) lengths_.push_back(len);
  }

  Dictionary dict_;
  Merger merger_;
  RingBuffer<Symbol> symbols_;
  RingBuffer<std::uint32_t> lengths_;
  Text scratch_;
  Text token_;
  std::vector<std::uint32_t> out_;
  std::size_t offset_ = 0;
  std::size_t peak_ = 0;
  std::size_t work_ = 0;
  bool halted_ = false;
};

// A second window large enough to be trusted, plus the tokens of both
// windows that have not been matched yet.
struct StreamTokenizer::Shadow {
  Shadow(const Dictionary& d, std::size_t k) : window(d, k) {}

  Window window;
  std::deque<std::pair<std::size_t, Text>> pending_main;
  std::deque<std::pair<std::size_t, Text>> pending_shadow;
};

StreamTokenizer::StreamTokenizer(const Dictionary& d, TokenSink sink, StreamOptions options)
    : sink_(std::move(sink)) {
  require_proper(d);
  const std::size_t sufficient = d.size() * d.max_rule_size();
  const std::size_t k = std::max<std::size_t>(options.lookahead.value_or(sufficient), 1);
  summary_.lookahead = k;
  window_ = std::make_unique<Window>(d, k);
  if (options.verify) {
    // The sufficient lookahead counts the symbols after the emitted token,
    // so the trusted window adds room for one more token.
    shadow_ = std::make_unique<Shadow>(d, std::max(k, sufficient + d.max_rule_size()));
  }
}

StreamTokenizer::~StreamTokenizer() = default;
StreamTokenizer::StreamTokenizer(StreamTokenizer&&) noexcept = default;
StreamTokenizer& StreamTokenizer::operator=(StreamTokenizer&&) noexcept = default;

void StreamTokenizer::feed(Symbol s) {
  if (finished_) throw std::logic_error("StreamTokenizer::feed after finish");
  if (s == kPadSymbol) {
    throw ReservedSymbolError("input contains the padding symbol at offset " +
                              std::to_string(summary_.symbols_consumed));
  }
  ++summary_.symbols_consumed;
  window_->push(s, [this](std::size_t offset, TextView token) { deliver(offset, token); });
  if (shadow_) {
    shadow_->window.push(s, [this](std::size_t offset, TextView token) { confirm(offset, token); });
  }
}

void StreamTokenizer::feed(TextView symbols) {
  for (Symbol s : symbols) feed(s);
}

void StreamTokenizer::finish() {
  if (finished_) return;
  finished_ = true;
  window_->finish([this](std::size_t offset, TextView token) { deliver(offset, token); });
  if (shadow_) {
    shadow_->window.finish(
        [this](std::size_t offset, TextView token) { confirm(offset, token); });
    if (!shadow_->pending_main.empty() || !shadow_->pending_shadow.empty()) {
      const std::size_t offset = shadow_->pending_main.empty()
                                     ? shadow_->pending_shadow.front().first
                                     : shadow_->pending_main.front().first;
      throw LookaheadTooSmallError("streamed tokens do not cover the input", offset,
                                   summary_.lookahead);
    }
  }
}

const StreamSummary& StreamTokenizer::summary() const noexcept {
  summary_.peak_window = window_->peak();
  summary_.work_steps = window_->work();
  return summary_;
}

void StreamTokenizer::deliver(std::size_t offset, TextView token) {
  if (!shadow_) {
    ++summary_.tokens_emitted;
    sink_(token);
    return;
  }
  shadow_->pending_main.emplace_back(offset, Text(token));
  confirm(std::size_t(-1), TextView());
}

// Called with a token of the trusted window, or with an empty token just to
// match what is pending.
void StreamTokenizer::confirm(std::size_t offset, TextView token) {
  Shadow& sh = *shadow_;
  if (!token.empty()) sh.pending_shadow.emplace_back(offset, Text(token));
  while (!sh.pending_main.empty() && !sh.pending_shadow.empty()) {
    const auto& [main_offset, main_token] = sh.pending_main.front();
    const auto& [true_offset, true_token] = sh.pending_shadow.front();
    if (main_offset != true_offset || main_token != true_token) {
      throw LookaheadTooSmallError("lookahead " + std::to_string(summary_.lookahead) +
                                       " is too small: token at offset " +
                                       std::to_string(main_offset) +
                                       " differs from the one a wider window selects",
                                   main_offset, summary_.lookahead);
    }
    ++summary_.tokens_emitted;
    sink_(true_token);
    sh.pending_main.pop_front();
    sh.pending_shadow.pop_front();
  }
}

StreamSummary stream_tokenize(const Dictionary& d, const SymbolSource& input,
                              const TokenSink& sink, StreamOptions options) {
  StreamTokenizer tokenizer(d, sink, options);
  while (std::optional<Symbol> s = input()) tokenizer.feed(*s);
  tokenizer.finish();
  return tokenizer.summary();
}

Tokenization stream_tokenize(const Dictionary& d, TextView w, StreamOptions options,
                             StreamSummary* summary) {
  std::vector<Token> tokens;
  StreamTokenizer tokenizer(
      d, [&tokens](TextView token) { tokens.emplace_back(token); }, options);
  tokenizer.feed(w);
  tokenizer.finish();
  if (summary != nullptr) *summary = tokenizer.summary();
  return Tokenization(std::move(tokens));
}

std::size_t empirical_lookahead(const Dictionary& d, EmpiricalLookaheadOptions options) {
  require_proper(d);
  if (d.empty()) return 1;
  const std::size_t sufficient = sufficient_lookahead(d);
  const std::size_t max_len = std::max<std::size_t>(options.max_len, 1);

  std::mt19937_64 rng(options.seed);
  const Text& symbols = d.symbols();
  std::uniform_int_distribution<std::size_t> pick_symbol(0, symbols.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_rule(0, d.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_len(1, max_len);

  std::vector<Text> samples;
  std::vector<Tokenization> expected;
  for (std::size_t n = 0; n < options.samples; ++n) {
    const std::size_t len = pick_len(rng);
    Text w;
    if (n % 2 == 0) {
      while (w.size() < len) w.push_back(symbols[pick_symbol(rng)]);
    } else {
      while (w.size() < len) {
        w += d[pick_rule(rng)].product();
        if (rng() % 4 == 0) w.push_back(symbols[pick_symbol(rng)]);
      }
      w.resize(std::min(w.size(), max_len));
    }
    expected.push_back(tokenize_sp(d, w));
    samples.push_back(std::move(w));
  }

  for (std::size_t k = 1; k < sufficient; ++k) {
    bool ok = true;
    for (std::size_t n = 0; ok && n < samples.size(); ++n) {
      ok = stream_tokenize(d, samples[n], StreamOptions{k, false}) == expected[n];
    }
    if (ok) return k;
  }
  return sufficient;
}

}  // namespace bpetk
