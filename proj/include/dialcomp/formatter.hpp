#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialcomp/core.hpp"
#include "dialcomp/registry.hpp"
#include "dialcomp/rng.hpp"

namespace dialcomp {

enum class TokenizerMode { whitespace, external_count_file };

// Counts tokens in a text segment. Whitespace mode counts space-separated
// runs; external mode looks the exact segment up in a precomputed table and
// falls back to whitespace counting for unknown segments.
class TokenCounter {
 public:
  TokenCounter() = default;
  static TokenCounter whitespace() { return TokenCounter{}; }
  static TokenCounter external(std::map<std::string, int> counts);

  size_t count(std::string_view text) const;

 private:
  std::map<std::string, int, std::less<>> counts_;
};

struct FormatConfig {
  int input_budget = 1024;
  int output_budget = 256;
  TokenizerMode tokenizer_mode = TokenizerMode::whitespace;
  std::map<std::string, int> external_counts;
  std::optional<OptionStyle> option_style_override;

  TokenCounter counter() const;
};

// "[CONTEXT] t1 [ENDOFTURN] t2 ... [ENDOFDIALOGUE]". Throws on empty turns.
std::string render_context(std::span<const Turn> turns);

struct RenderedOptions {
  std::string text;  // "[OPTIONS] ..." segment
  // output_labels[i] is the expected gold output for option i: the option
  // text under name-list, the 1-based index under indexed-list.
  std::vector<std::string> output_labels;
};

RenderedOptions render_options(std::span<const std::string> options,
                               OptionStyle style);

// "[TOKEN] value" segments in spec declaration order; placeholder-only
// fields (empty token) are skipped. Throws on a field whose label is not
// declared by the spec.
std::string render_custom_fields(
    const std::vector<std::pair<std::string, std::string>>& fields,
    const TaskSpec& spec);

struct TruncationResult {
  std::string text;
  bool truncated = false;
};

// Enforces the input budget by dropping whole turns from the oldest end of
// the context segment. Instruction, custom fields, options, and prompt are
// never touched; throws if those fixed segments alone exceed the budget.
TruncationResult truncate_input(std::string_view text, int budget,
                                const TokenCounter& counter);

// Trailing-token cut for the output side of the pair.
TruncationResult truncate_output(std::string_view text, int budget,
                                 const TokenCounter& counter);

FormattedExample render_example(const TaskInstance& instance,
                                const TaskSpec& spec, TemplateIds ids,
                                const FormatConfig& config, Rng& rng);

// Structural checks: exactly one [CONTEXT] / [ENDOFDIALOGUE] / [QUESTION],
// ordering, and no reserved token outside its sanctioned position. Total
// function; empty result means valid.
std::vector<std::string> validate_format(std::string_view text);
std::vector<std::string> validate_format(
    std::string_view text, const std::vector<std::string>& field_tokens);

// Contiguous slices of a rendered input; concatenating them in order
// reproduces the input byte-for-byte.
struct Segments {
  std::string instruction;
  std::string fields;
  std::string context;
  std::string options;
  std::string prompt;

  std::string reassemble() const {
    return instruction + fields + context + options + prompt;
  }
};

std::optional<Segments> split_segments(std::string_view input);

// Turn texts recovered from a rendered context segment.
std::vector<std::string> parse_context_turns(std::string_view input);

struct ParsedOptions {
  OptionStyle style = OptionStyle::none;
  std::vector<std::string> values;
  std::vector<std::string> labels;  // expected gold outputs
};

std::optional<ParsedOptions> parse_options_segment(std::string_view options_segment);

// Value of "[TOKEN] value" in the custom-fields region, if present.
std::optional<std::string> parse_field_value(std::string_view input,
                                             std::string_view token);

}  // namespace dialcomp
