#include "dialcomp/formatter.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <stdexcept>

#include "dialcomp/text.hpp"

namespace dialcomp {

TokenCounter TokenCounter::external(std::map<std::string, int> counts) {
  TokenCounter c;
  for (auto& [k, v] : counts) c.counts_.emplace(k, v);
  return c;
}

size_t TokenCounter::count(std::string_view text) const {
  if (!counts_.empty()) {
    auto it = counts_.find(text);
    if (it != counts_.end()) return static_cast<size_t>(it->second);
  }
  return whitespace_token_count(text);
}

TokenCounter FormatConfig::counter() const {
  if (tokenizer_mode == TokenizerMode::external_count_file)
    return TokenCounter::external(external_counts);
  return TokenCounter::whitespace();
}

std::string render_context(std::span<const Turn> turns) {
  if (turns.empty())
    throw std::invalid_argument("render_context: no turns");
  std::string out(kContextToken);
  for (size_t i = 0; i < turns.size(); ++i) {
    out += ' ';
    if (i) {
      out += kEndOfTurnToken;
      out += ' ';
    }
    out += turns[i].text;
  }
  out += ' ';
  out += kEndOfDialogueToken;
  return out;
}

RenderedOptions render_options(std::span<const std::string> options,
                               OptionStyle style) {
  if (options.empty())
    throw std::invalid_argument("render_options: empty option list");
  if (style == OptionStyle::none)
    throw std::invalid_argument("render_options: style 'none'");
  for (size_t i = 0; i < options.size(); ++i)
    for (size_t j = i + 1; j < options.size(); ++j)
      if (options[i] == options[j])
        throw std::invalid_argument("render_options: duplicate option '" +
                                    options[i] + "'");

  RenderedOptions out;
  out.text = std::string(kOptionsToken);
  if (style == OptionStyle::name_list) {
    for (size_t i = 0; i < options.size(); ++i) {
      out.text += i ? " | " : " ";
      out.text += options[i];
      out.output_labels.push_back(options[i]);
    }
  } else {
    for (size_t i = 0; i < options.size(); ++i) {
      std::string index = std::to_string(i + 1);
      out.text += i ? ", " : " ";
      out.text += index + ": " + options[i];
      out.output_labels.push_back(index);
    }
  }
  return out;
}

std::string render_custom_fields(
    const std::vector<std::pair<std::string, std::string>>& fields,
    const TaskSpec& spec) {
  for (const auto& [label, value] : fields)
    if (!spec.find_field(label))
      throw std::invalid_argument("render_custom_fields: label '" + label +
                                  "' has no registered token");
  std::string out;
  // Declaration order, not instance order.
  for (const FieldSpec& f : spec.required_fields) {
    if (f.token.empty()) continue;
    for (const auto& [label, value] : fields) {
      if (label != f.label) continue;
      if (!out.empty()) out += ' ';
      out += f.token + " " + value;
    }
  }
  return out;
}

namespace {

struct ContextSlices {
  std::string_view prefix;  // everything before "[CONTEXT]"
  std::vector<std::string> turns;
  std::string_view suffix;  // everything after "[ENDOFDIALOGUE]"
};

std::optional<ContextSlices> slice_context(std::string_view text) {
  size_t ctx = text.find(kContextToken);
  size_t eod = text.find(kEndOfDialogueToken);
  if (ctx == std::string_view::npos || eod == std::string_view::npos ||
      eod < ctx)
    return std::nullopt;
  ContextSlices s;
  s.prefix = text.substr(0, ctx);
  s.suffix = text.substr(eod + kEndOfDialogueToken.size());
  size_t inner_begin = ctx + kContextToken.size();
  std::string_view inner = text.substr(inner_begin, eod - inner_begin);
  inner = trim(inner);
  if (!inner.empty()) {
    std::string sep = " " + std::string(kEndOfTurnToken) + " ";
    for (std::string& t : split_on(inner, sep)) s.turns.push_back(std::move(t));
  }
  return s;
}

std::string rebuild_context(const ContextSlices& s,
                            const std::deque<std::string>& turns) {
  std::string ctx(kContextToken);
  ctx += ' ';
  for (size_t i = 0; i < turns.size(); ++i) {
    if (i) {
      ctx += ' ';
      ctx += kEndOfTurnToken;
      ctx += ' ';
    }
    ctx += turns[i];
  }
  if (!turns.empty()) ctx += ' ';
  ctx += kEndOfDialogueToken;
  return std::string(s.prefix) + ctx + std::string(s.suffix);
}

}  // namespace

TruncationResult truncate_input(std::string_view text, int budget,
                                const TokenCounter& counter) {
  if (budget < 1) throw std::invalid_argument("truncate_input: budget < 1");

  auto slices = slice_context(text);
  if (!slices) {
    if (counter.count(text) <= static_cast<size_t>(budget))
      return {std::string(text), false};
    throw std::runtime_error("truncate_input: input has no context segment");
  }

  // Fixed cost: instruction, fields, options, prompt, and the two context
  // sentinels themselves. Segment counts are additive because segments are
  // single-space separated.
  size_t fixed = counter.count(slices->prefix) + 1 + 1 +
                 counter.count(slices->suffix);

  std::deque<std::string> turns(slices->turns.begin(), slices->turns.end());
  std::vector<size_t> costs;
  costs.reserve(turns.size());
  size_t running = fixed;
  for (const std::string& t : turns) {
    costs.push_back(counter.count(t));
    running += costs.back();
  }
  if (turns.size() > 1) running += turns.size() - 1;  // [ENDOFTURN] separators

  if (running <= static_cast<size_t>(budget)) return {std::string(text), false};
  if (fixed > static_cast<size_t>(budget))
    throw std::runtime_error("truncate_input: fixed segments exceed budget");

  size_t drop = 0;
  while (running > static_cast<size_t>(budget) && !turns.empty()) {
    running -= costs[drop];
    if (turns.size() > 1) running -= 1;  // one separator goes with the turn
    turns.pop_front();
    ++drop;
  }
  return {rebuild_context(*slices, turns), true};
}

TruncationResult truncate_output(std::string_view text, int budget,
                                 const TokenCounter& counter) {
  if (budget < 1) throw std::invalid_argument("truncate_output: budget < 1");
  if (counter.count(text) <= static_cast<size_t>(budget))
    return {std::string(text), false};
  std::vector<std::string> tokens = whitespace_tokens(text);
  while (!tokens.empty()) {
    tokens.pop_back();
    std::string cut = join(tokens, " ");
    if (counter.count(cut) <= static_cast<size_t>(budget)) return {cut, true};
  }
  return {"", true};
}

FormattedExample render_example(const TaskInstance& instance,
                                const TaskSpec& spec, TemplateIds ids,
                                const FormatConfig& config, Rng& rng) {
  if (ids.definition_id < 0 ||
      ids.definition_id >= static_cast<int>(spec.definitions.size()) ||
      ids.prompt_id < 0 ||
      ids.prompt_id >= static_cast<int>(spec.prompts.size()))
    throw std::invalid_argument("render_example: template id out of range");

  const std::string definition = substitute_placeholders(
      spec.definitions[ids.definition_id], instance.custom_fields);
  const std::string prompt = substitute_placeholders(
      spec.prompts[ids.prompt_id], instance.custom_fields);
  const std::string fields = render_custom_fields(instance.custom_fields, spec);
  const std::string context = render_context(instance.context.turns);

  OptionStyle style = config.option_style_override.value_or(spec.option_style_default);
  std::string options_segment;
  std::string output = instance.gold_output;
  if (instance.class_options && style != OptionStyle::none) {
    RenderedOptions ropts = render_options(*instance.class_options, style);
    auto it = std::find(instance.class_options->begin(),
                        instance.class_options->end(), instance.gold_output);
    if (it == instance.class_options->end())
      throw std::runtime_error("render_example: gold not among options");
    output = ropts.output_labels[it - instance.class_options->begin()];
    if (!spec.options_leadin.empty())
      options_segment = spec.options_leadin + " " + ropts.text;
    else
      options_segment = ropts.text;
  } else {
    style = OptionStyle::none;
  }

  std::string input;
  const std::string* parts[] = {&definition, &fields, &context,
                                &options_segment};
  for (const std::string* part : parts) {
    if (part->empty()) continue;
    if (!input.empty()) input += ' ';
    input += *part;
  }
  input += ' ';
  input += kQuestionToken;
  input += ' ';
  input += prompt;

  const TokenCounter counter = config.counter();
  TruncationResult in_cut = truncate_input(input, config.input_budget, counter);
  TruncationResult out_cut =
      truncate_output(output, config.output_budget, counter);

  FormattedExample ex;
  ex.input_text = std::move(in_cut.text);
  ex.output_text = std::move(out_cut.text);
  ex.task_name = spec.name;
  ex.category = spec.category;
  ex.definition_id = ids.definition_id;
  ex.prompt_id = ids.prompt_id;
  ex.option_style = style;
  ex.provenance = {instance.context.source_dataset,
                   instance.context.dialogue_id, instance.instance_id};
  ex.seed = rng.seed_value();
  ex.flags = instance.flags;
  if (in_cut.truncated || out_cut.truncated)
    ex.flags.insert(std::string(kFlagTruncated));
  return ex;
}

namespace {

std::vector<size_t> find_all(std::string_view text, std::string_view token) {
  std::vector<size_t> out;
  size_t pos = 0;
  while ((pos = text.find(token, pos)) != std::string_view::npos) {
    out.push_back(pos);
    pos += token.size();
  }
  return out;
}

}  // namespace

std::vector<std::string> validate_format(std::string_view text) {
  return validate_format(text, {});
}

std::vector<std::string> validate_format(
    std::string_view text, const std::vector<std::string>& field_tokens) {
  std::vector<std::string> violations;

  auto ctx = find_all(text, kContextToken);
  auto eot = find_all(text, kEndOfTurnToken);
  auto eod = find_all(text, kEndOfDialogueToken);
  auto q = find_all(text, kQuestionToken);
  auto opts = find_all(text, kOptionsToken);
  auto mask = find_all(text, kMaskToken);

  if (ctx.size() != 1)
    violations.push_back("expected exactly one [CONTEXT], found " +
                         std::to_string(ctx.size()));
  if (eod.size() != 1)
    violations.push_back("expected exactly one [ENDOFDIALOGUE], found " +
                         std::to_string(eod.size()));
  if (q.size() != 1)
    violations.push_back("expected exactly one [QUESTION], found " +
                         std::to_string(q.size()));
  if (!violations.empty()) return violations;

  size_t ctx_pos = ctx[0];
  size_t eod_pos = eod[0];
  size_t q_pos = q[0];

  if (!(ctx_pos < eod_pos && eod_pos < q_pos))
    violations.push_back(
        "[CONTEXT], [ENDOFDIALOGUE], [QUESTION] out of order");
  for (size_t p : eot)
    if (p < ctx_pos || p > eod_pos)
      violations.push_back("[ENDOFTURN] outside the context segment");
  if (opts.size() > 1)
    violations.push_back("more than one [OPTIONS]");
  for (size_t p : opts)
    if (p < eod_pos || p > q_pos)
      violations.push_back("[OPTIONS] outside its sanctioned position");
  for (size_t p : mask)
    if (p < ctx_pos || p > eod_pos)
      violations.push_back("[MASK] outside the context segment");
  for (const std::string& tok : field_tokens)
    for (size_t p : find_all(text, tok))
      if (p > ctx_pos)
        violations.push_back(tok + " after [CONTEXT]");

  return violations;
}

std::optional<Segments> split_segments(std::string_view input) {
  size_t ctx = input.find(kContextToken);
  size_t eod = input.find(kEndOfDialogueToken);
  size_t q = input.find(kQuestionToken);
  if (ctx == std::string_view::npos || eod == std::string_view::npos ||
      q == std::string_view::npos || !(ctx < eod && eod < q))
    return std::nullopt;

  // The custom-fields region starts at the first bracketed all-caps token
  // before [CONTEXT], if any.
  size_t fields_begin = ctx;
  size_t scan = 0;
  while (scan < ctx) {
    size_t open = input.find('[', scan);
    if (open == std::string_view::npos || open >= ctx) break;
    size_t close = input.find(']', open);
    if (close == std::string_view::npos || close >= ctx) break;
    std::string_view name = input.substr(open + 1, close - open - 1);
    bool tokenish = !name.empty();
    for (char c : name)
      if (!(std::isupper(static_cast<unsigned char>(c)) || c == ' ' ||
            std::isdigit(static_cast<unsigned char>(c))))
        tokenish = false;
    if (tokenish) {
      fields_begin = open;
      break;
    }
    scan = close + 1;
  }

  size_t eod_end = eod + kEndOfDialogueToken.size();
  Segments s;
  s.instruction = std::string(input.substr(0, fields_begin));
  s.fields = std::string(input.substr(fields_begin, ctx - fields_begin));
  s.context = std::string(input.substr(ctx, eod_end - ctx));
  s.options = std::string(input.substr(eod_end, q - eod_end));
  s.prompt = std::string(input.substr(q));
  return s;
}

std::vector<std::string> parse_context_turns(std::string_view input) {
  auto slices = slice_context(input);
  if (!slices) return {};
  return slices->turns;
}

std::optional<ParsedOptions> parse_options_segment(std::string_view segment) {
  size_t pos = segment.find(kOptionsToken);
  if (pos == std::string_view::npos) return std::nullopt;
  std::string_view body = trim(segment.substr(pos + kOptionsToken.size()));
  if (body.empty()) return std::nullopt;

  ParsedOptions out;
  if (body.rfind("1: ", 0) == 0) {
    out.style = OptionStyle::indexed_list;
    // Split on ascending ", k: " boundaries so commas inside option text
    // survive.
    size_t start = 3;
    int next_index = 2;
    while (true) {
      std::string marker = ", " + std::to_string(next_index) + ": ";
      size_t hit = body.find(marker, start);
      if (hit == std::string_view::npos) {
        out.values.emplace_back(body.substr(start));
        break;
      }
      out.values.emplace_back(body.substr(start, hit - start));
      start = hit + marker.size();
      ++next_index;
    }
    for (size_t i = 0; i < out.values.size(); ++i)
      out.labels.push_back(std::to_string(i + 1));
  } else {
    out.style = OptionStyle::name_list;
    for (std::string& v : split_on(body, " | ")) {
      out.labels.push_back(v);
      out.values.push_back(std::move(v));
    }
  }
  return out;
}

std::optional<std::string> parse_field_value(std::string_view input,
                                             std::string_view token) {
  size_t ctx = input.find(kContextToken);
  size_t tok = input.find(token);
  if (tok == std::string_view::npos) return std::nullopt;
  if (ctx != std::string_view::npos && tok > ctx) return std::nullopt;
  size_t value_begin = tok + token.size();
  // Value runs until the next bracketed token or [CONTEXT].
  size_t end = ctx == std::string_view::npos ? input.size() : ctx;
  size_t scan = value_begin;
  while (scan < end) {
    size_t open = input.find('[', scan);
    if (open == std::string_view::npos || open >= end) break;
    size_t close = input.find(']', open);
    if (close == std::string_view::npos || close >= end) {
      scan = open + 1;
      continue;
    }
    std::string_view name = input.substr(open + 1, close - open - 1);
    bool tokenish = !name.empty();
    for (char c : name)
      if (!(std::isupper(static_cast<unsigned char>(c)) || c == ' ' ||
            std::isdigit(static_cast<unsigned char>(c))))
        tokenish = false;
    if (tokenish) {
      end = open;
      break;
    }
    scan = close + 1;
  }
  return std::string(trim(input.substr(value_begin, end - value_begin)));
}

}  // namespace dialcomp
