#include "bpetk/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "bpetk/analysis.hpp"
#include "bpetk/dict_file.hpp"
#include "bpetk/errors.hpp"
#include "bpetk/fuzz.hpp"
#include "bpetk/incremental.hpp"
#include "bpetk/semantics.hpp"
#include "bpetk/streaming.hpp"
#include "bpetk/text.hpp"

namespace bpetk {
namespace {

using nlohmann::json;

struct TokenizeArgs {
  std::string dict;
  std::string input;
  std::string semantics = "sp";
  bool trace = false;
  bool binary = false;
};

struct StreamArgs {
  std::string dict;
  std::string input;
  std::optional<std::size_t> lookahead;
  bool verify = false;
  bool binary = false;
};

struct TrainArgs {
  std::string corpus;
  std::size_t rules = 0;
  std::string out;
  std::string alphabet = "bytes";
};

struct CheckArgs {
  std::string dict;
  std::string report = "text";
  bool empirical = false;
  std::size_t samples = 200;
  std::size_t max_len = 64;
  std::uint64_t seed = 0;
};

struct FuzzArgs {
  std::string dict;
  bool train_random = false;
  std::size_t iterations = 1000;
  std::string mode = "sp-vs-hf";
  std::optional<std::uint64_t> seed;
  bool mutate = false;
  std::size_t max_len = 200;
};

struct ConcatArgs {
  std::string dict;
  std::string left;
  std::string right;
  std::optional<std::size_t> budget;
};

struct EditArgs {
  std::string dict;
  std::string input;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string replacement;
};

std::string read_input(const std::string& path, std::istream& in) {
  if (!path.empty() && path != "-") return read_file(path);
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("error reading standard input");
  return data;
}

void write_tokens(const Tokenization& t, Alphabet alphabet, bool binary, std::ostream& out) {
  std::string buffer;
  for (const Token& token : t) {
    if (binary) {
      append_token_record(token.view(), alphabet, buffer);
    } else {
      append_token_line(token.view(), alphabet, buffer);
    }
  }
  out << buffer;
}

std::string join(const std::set<std::size_t>& values) {
  std::string out;
  for (std::size_t v : values) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v);
  }
  return out.empty() ? "none" : out;
}

json optional_json(const std::optional<std::size_t>& v) {
  return v ? json(*v) : json(nullptr);
}

std::uint64_t default_seed() {
  const char* env = std::getenv("BPETK_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (*end != '\0') throw ParseError("BPETK_SEED is not a number");
  return value;
}

int cmd_tokenize(const TokenizeArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  const Dictionary d = load_dictionary(a.dict);
  const Semantics s = parse_semantics(a.semantics);
  const Text w = decode(read_input(a.input, in), d.alphabet());
  if (a.trace) {
    const DerivationTrace trace = tokenize_traced(d, w, s);
    std::string lines;
    for (const DerivationStep& step : trace.steps) {
      lines += "step rule=" + std::to_string(step.rule_index) +
               " pos=" + std::to_string(step.position) + "\n";
    }
    err << lines;
    write_tokens(trace.result, d.alphabet(), a.binary, out);
  } else {
    write_tokens(tokenize(d, w, s), d.alphabet(), a.binary, out);
  }
  return kExitOk;
}

void print_violations(const PropernessReport& report, std::ostream& err) {
  for (const PropernessViolation& v : report.violations) {
    err << "rule " << v.rule_index << ": " << v.reason() << "\n";
  }
}

int cmd_stream(const StreamArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  const Dictionary d = load_dictionary(a.dict);
  const PropernessReport report = check_proper(d);
  if (!report.proper) {
    err << "dictionary is not proper\n";
    print_violations(report, err);
    return kExitImproper;
  }

  std::ifstream file;
  std::istream* source = &in;
  if (!a.input.empty() && a.input != "-") {
    file.open(a.input, std::ios::binary);
    if (!file) throw IoError("cannot open '" + a.input + "' for reading");
    source = &file;
  }

  std::string pending;
  const Alphabet alphabet = d.alphabet();
  StreamTokenizer tokenizer(
      d,
      [&](TextView token) {
        if (a.binary) {
          append_token_record(token, alphabet, pending);
        } else {
          append_token_line(token, alphabet, pending);
        }
      },
      StreamOptions{a.lookahead, a.verify});

  Utf8Decoder utf8;
  std::array<char, 1 << 16> chunk;
  try {
    while (*source) {
      source->read(chunk.data(), chunk.size());
      const std::streamsize got = source->gcount();
      for (std::streamsize i = 0; i < got; ++i) {
        const auto byte = static_cast<std::uint8_t>(chunk[static_cast<std::size_t>(i)]);
        if (alphabet == Alphabet::bytes) {
          tokenizer.feed(static_cast<Symbol>(byte));
        } else if (std::optional<Symbol> s = utf8.push(byte)) {
          tokenizer.feed(*s);
        }
      }
      out << pending;
      pending.clear();
    }
    if (source->bad()) throw IoError("error reading input");
    utf8.finish();
    tokenizer.finish();
  } catch (const LookaheadTooSmallError&) {
    out << pending;
    throw;
  }
  out << pending;
  return kExitOk;
}

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const Alphabet alphabet = parse_alphabet(a.alphabet);
  const std::string data = read_file(a.corpus);
  std::vector<Text> corpus;
  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t end = data.find('\n', pos);
    if (end == std::string::npos) end = data.size();
    corpus.push_back(decode(std::string_view(data).substr(pos, end - pos), alphabet));
    pos = end + 1;
  }

  std::ostream& progress = a.out.empty() ? err : out;
  const TrainResult result = train_bpe_detailed(
      corpus, a.rules, alphabet, [&](std::size_t iteration, const TrainStep& step) {
        progress << "merge " << iteration << ": " << escape(step.rule.left.view(), alphabet)
                 << ' ' << escape(step.rule.right.view(), alphabet) << " count=" << step.count
                 << "\n";
      });
  if (result.halted_early) {
    err << "warning: stopped after " << result.dictionary.size() << " of " << a.rules
        << " rules, no pair occurs twice\n";
  }
  if (a.out.empty()) {
    out << render_dictionary(result.dictionary);
  } else {
    save_dictionary(result.dictionary, a.out);
  }
  return kExitOk;
}

json report_json(const AnalysisReport& r) {
  json violations = json::array();
  for (const PropernessViolation& v : r.properness.violations) {
    violations.push_back({{"rule", v.rule_index},
                          {"side", side_name(v.side)},
                          {"producer", v.producer ? json(*v.producer) : json(nullptr)},
                          {"reason", v.reason()}});
  }
  json j = {
      {"rules", r.rule_count},
      {"total_size", r.total_size},
      {"max_rule_size", r.max_rule_size},
      {"proper", r.properness.proper},
      {"violations", violations},
      {"useless_rules", {{"sp", r.useless_sp}, {"hf", r.useless_hf}}},
      {"sufficient_lookahead", optional_json(r.sufficient_lookahead)},
      {"chain_length_upper_bound", optional_json(r.chain_length_upper_bound)},
      {"improved_lookahead", optional_json(r.improved_lookahead)},
  };
  if (r.empirical_lookahead) j["empirical_lookahead"] = *r.empirical_lookahead;
  return j;
}

std::string report_text(const AnalysisReport& r) {
  const auto value = [](const std::optional<std::size_t>& v) {
    return v ? std::to_string(*v) : std::string("n/a (not proper)");
  };
  std::string out;
  out += "rules: " + std::to_string(r.rule_count) + "\n";
  out += "total size: " + std::to_string(r.total_size) + "\n";
  out += "max rule size: " + std::to_string(r.max_rule_size) + "\n";
  out += std::string("proper: ") + (r.properness.proper ? "yes" : "no") + "\n";
  for (const PropernessViolation& v : r.properness.violations) {
    out += "violation: rule " + std::to_string(v.rule_index) + " " + v.reason() + "\n";
  }
  out += "useless rules (sp): " + join(r.useless_sp) + "\n";
  out += "useless rules (hf): " + join(r.useless_hf) + "\n";
  out += "sufficient lookahead: " + value(r.sufficient_lookahead) + "\n";
  out += "chain length upper bound: " + value(r.chain_length_upper_bound) + "\n";
  out += "improved lookahead: " + value(r.improved_lookahead) + "\n";
  if (r.empirical_lookahead) {
    out += "empirical lookahead: " + std::to_string(*r.empirical_lookahead) + "\n";
  }
  return out;
}

int cmd_check(const CheckArgs& a, std::ostream& out) {
  const Dictionary d = load_dictionary(a.dict);
  AnalysisReport report = analyze(d);
  if (a.empirical && report.properness.proper) {
    report.empirical_lookahead = empirical_lookahead(d, {a.samples, a.max_len, a.seed});
  }
  if (a.report == "json") {
    out << report_json(report).dump(2) << "\n";
  } else {
    out << report_text(report);
  }
  return report.properness.proper ? kExitOk : kExitImproper;
}

int cmd_fuzz(const FuzzArgs& a, std::ostream& out) {
  FuzzOptions options;
  options.mode = parse_fuzz_mode(a.mode);
  options.iterations = a.iterations;
  options.seed = a.seed ? *a.seed : default_seed();
  options.mutate = a.mutate;
  options.max_len = a.max_len;
  if (!a.dict.empty()) {
    if (a.train_random) throw ParseError("give either a dictionary or --train-random");
    options.dictionary = load_dictionary(a.dict);
  }

  const FuzzResult result = run_fuzz(options);
  out << "mode=" << fuzz_mode_name(options.mode) << " seed=" << options.seed
      << " trials=" << result.trials << " skipped=" << result.skipped
      << " findings=" << result.findings << " failures=" << (result.failure ? 1 : 0) << "\n";
  if (result.first_finding) {
    out << "finding (improper dictionary, not a failure)\n" << describe(*result.first_finding);
  }
  if (result.failure) {
    out << "counterexample\n" << describe(*result.failure);
    return kExitViolation;
  }
  return kExitOk;
}

int cmd_concat(const ConcatArgs& a, std::ostream& out, std::ostream& err) {
  const Dictionary d = load_dictionary(a.dict);
  const Tokenization left = tokenize_sp(d, decode(read_file(a.left), d.alphabet()));
  const Tokenization right = tokenize_sp(d, decode(read_file(a.right), d.alphabet()));
  const ConcatOutcome result = concat_tokenizations(d, left, right, a.budget);
  err << "left_rollback=" << result.left_rollback << " right_rollback=" << result.right_rollback
      << " widenings=" << result.widenings << " fell_back=" << (result.fell_back ? 1 : 0)
      << "\n";
  write_tokens(result.result, d.alphabet(), false, out);
  return kExitOk;
}

int cmd_edit(const EditArgs& a, std::istream& in, std::ostream& out) {
  const Dictionary d = load_dictionary(a.dict);
  const Tokenization original = tokenize_sp(d, decode(read_input(a.input, in), d.alphabet()));
  const Text replacement = unescape(a.replacement, d.alphabet());
  write_tokens(splice_edit(d, original, a.start, a.end, replacement), d.alphabet(), false, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Byte pair encoding tokenizer and dictionary analysis", "bpetk"};
  app.require_subcommand(1);

  TokenizeArgs tok;
  CLI::App* tokenize_cmd = app.add_subcommand("tokenize", "Tokenize a file or standard input");
  tokenize_cmd->add_option("dictionary", tok.dict, "Dictionary file")->required();
  tokenize_cmd->add_option("input", tok.input, "Input file (default: standard input)");
  tokenize_cmd->add_option("--semantics", tok.semantics, "sp or hf")
      ->check(CLI::IsMember({"sp", "hf"}));
  tokenize_cmd->add_flag("--trace", tok.trace, "Write merge steps to standard error");
  tokenize_cmd->add_flag("--binary", tok.binary, "Length-prefixed binary token records");

  StreamArgs st;
  CLI::App* stream_cmd = app.add_subcommand("stream", "Tokenize with a bounded window");
  stream_cmd->add_option("dictionary", st.dict, "Dictionary file")->required();
  stream_cmd->add_option("input", st.input, "Input file (default: standard input)");
  stream_cmd->add_option("--lookahead", st.lookahead, "Window size in symbols");
  stream_cmd->add_flag("--verify", st.verify, "Check every token against a wider window");
  stream_cmd->add_flag("--binary", st.binary, "Length-prefixed binary token records");

  TrainArgs tr;
  CLI::App* train_cmd = app.add_subcommand("train", "Learn a dictionary from a corpus");
  train_cmd->add_option("corpus", tr.corpus, "Corpus file, one entry per line")->required();
  train_cmd->add_option("--rules", tr.rules, "Number of rules to learn")->required();
  train_cmd->add_option("--out", tr.out, "Output dictionary (default: standard output)");
  train_cmd->add_option("--alphabet", tr.alphabet, "bytes or chars")
      ->check(CLI::IsMember({"bytes", "chars"}));

  CheckArgs ch;
  CLI::App* check_cmd = app.add_subcommand("check", "Analyse a dictionary");
  check_cmd->add_option("dictionary", ch.dict, "Dictionary file")->required();
  check_cmd->add_option("--report", ch.report, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  check_cmd->add_flag("--empirical-lookahead", ch.empirical,
                      "Estimate the lookahead by random testing");
  check_cmd->add_option("--samples", ch.samples, "Random strings for the estimate");
  check_cmd->add_option("--max-len", ch.max_len, "Longest random string for the estimate");
  check_cmd->add_option("--seed", ch.seed, "Seed for the estimate");

  FuzzArgs fz;
  CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "Differential testing");
  fuzz_cmd->add_option("dictionary", fz.dict, "Fixed dictionary (default: random trained)");
  fuzz_cmd->add_flag("--train-random", fz.train_random, "Train a random dictionary per trial");
  fuzz_cmd->add_option("--iterations", fz.iterations, "Number of trials");
  fuzz_cmd->add_option("--mode", fz.mode, "Property to test")
      ->check(CLI::IsMember({"sp-vs-hf", "stream-vs-batch", "concat-vs-full",
                             "swap-equivalence"}));
  fuzz_cmd->add_option("--seed", fz.seed, "Seed (default: $BPETK_SEED or 0)");
  fuzz_cmd->add_flag("--mutate", fz.mutate, "Shuffle rule order (usually improper)");
  fuzz_cmd->add_option("--max-len", fz.max_len, "Longest random input");

  ConcatArgs cc;
  CLI::App* concat_cmd = app.add_subcommand("concat", "Join the tokenizations of two files");
  concat_cmd->add_option("dictionary", cc.dict, "Dictionary file")->required();
  concat_cmd->add_option("left", cc.left, "Left input file")->required();
  concat_cmd->add_option("right", cc.right, "Right input file")->required();
  concat_cmd->add_option("--budget", cc.budget, "Widening steps per side before fallback");

  EditArgs ed;
  CLI::App* edit_cmd = app.add_subcommand("edit", "Retokenize after replacing a symbol range");
  edit_cmd->add_option("dictionary", ed.dict, "Dictionary file")->required();
  edit_cmd->add_option("input", ed.input, "Input file (default: standard input)");
  edit_cmd->add_option("--start", ed.start, "First replaced symbol")->required();
  edit_cmd->add_option("--end", ed.end, "One past the last replaced symbol")->required();
  edit_cmd->add_option("--replace", ed.replacement, "Escaped replacement text");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParse;
  }

  try {
    if (*tokenize_cmd) return cmd_tokenize(tok, in, out, err);
    if (*stream_cmd) return cmd_stream(st, in, out, err);
    if (*train_cmd) return cmd_train(tr, out, err);
    if (*check_cmd) return cmd_check(ch, out);
    if (*fuzz_cmd) return cmd_fuzz(fz, out);
    if (*concat_cmd) return cmd_concat(cc, out, err);
    if (*edit_cmd) return cmd_edit(ed, in, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DuplicateRuleError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ImproperDictionaryError& e) {
    err << "error: " << e.what() << "\n";
    return kExitImproper;
  } catch (const LookaheadTooSmallError& e) {
    err << "error: " << e.what() << "\n";
    return kExitLookahead;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitParse;
}

}  // namespace bpetk
