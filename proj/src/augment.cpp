#include "dialcomp/augment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

#include "dialcomp/formatter.hpp"
#include "dialcomp/text.hpp"

namespace dialcomp {

std::string_view to_string(CorruptionKind k) {
  switch (k) {
    case CorruptionKind::shuffle: return "shuffle";
    case CorruptionKind::repeat: return "repeat";
    case CorruptionKind::add: return "add";
    case CorruptionKind::remove: return "remove";
  }
  return "shuffle";
}

std::string_view to_string(Granularity g) {
  return g == Granularity::phrase ? "phrase" : "sentence";
}

namespace {

// floor with a guard against values like 0.3 * 10 evaluating just below
// the integer they represent.
size_t robust_floor(double x) {
  return static_cast<size_t>(std::floor(x + 1e-9));
}

template <typename T>
void fisher_yates(std::vector<T>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

void apply_nota(std::vector<TaskInstance>& instances, const NotaConfig& cfg,
                Rng& rng) {
  const size_t n = instances.size();
  const size_t k = robust_floor(cfg.rate * static_cast<double>(n));
  if (k == 0) return;
  const size_t k_correct = robust_floor(cfg.correct_fraction * static_cast<double>(k));

  std::vector<size_t> eligible;
  eligible.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& opts = instances[i].class_options;
    if (!opts || opts->empty()) continue;
    if (std::find(opts->begin(), opts->end(), cfg.nota_text) != opts->end())
      continue;
    eligible.push_back(i);
  }
  fisher_yates(eligible, rng);
  const size_t chosen_count = std::min(k, eligible.size());

  size_t correct_assigned = 0;
  for (size_t c = 0; c < chosen_count; ++c) {
    TaskInstance& inst = instances[eligible[c]];
    auto& opts = *inst.class_options;
    const bool correct_mode =
        correct_assigned < k_correct && opts.size() >= 2;
    if (correct_mode) {
      auto gold_it = std::find(opts.begin(), opts.end(), inst.gold_output);
      if (gold_it != opts.end()) opts.erase(gold_it);
      size_t slot = rng.below(opts.size() + 1);
      opts.insert(opts.begin() + slot, cfg.nota_text);
      inst.gold_output = cfg.nota_text;
      inst.flags.insert(std::string(kFlagNotaCorrect));
      ++correct_assigned;
    } else {
      size_t slot = rng.below(opts.size() + 1);
      opts.insert(opts.begin() + slot, cfg.nota_text);
      inst.flags.insert(std::string(kFlagNotaDistractor));
    }
  }
}

std::vector<std::string> segment_sentences(std::string_view response) {
  std::vector<std::string> units;
  size_t begin = 0;
  size_t i = 0;
  auto flush = [&](size_t end) {
    std::string_view unit = trim(response.substr(begin, end - begin));
    if (!unit.empty()) units.emplace_back(unit);
  };
  while (i < response.size()) {
    char c = response[i];
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == response.size() ||
         std::isspace(static_cast<unsigned char>(response[i + 1])))) {
      flush(i + 1);
      ++i;
      while (i < response.size() &&
             std::isspace(static_cast<unsigned char>(response[i])))
        ++i;
      begin = i;
      continue;
    }
    ++i;
  }
  if (begin < response.size()) flush(response.size());
  return units;
}

namespace {

std::vector<std::string> segment_phrases(std::string_view response, Rng& rng) {
  std::vector<std::string> tokens = whitespace_tokens(response);
  std::vector<std::string> units;
  size_t i = 0;
  while (i < tokens.size()) {
    size_t span = 2 + rng.below(3);  // 2..4 tokens
    size_t remaining = tokens.size() - i;
    if (remaining < span || remaining == span + 1) span = remaining;
    std::string unit = tokens[i];
    for (size_t j = 1; j < span; ++j) unit += " " + tokens[i + j];
    units.push_back(std::move(unit));
    i += span;
  }
  return units;
}

std::string join_units(const std::vector<std::string>& units) {
  return join(units, " ");
}

}  // namespace

std::vector<std::string> segment_units(std::string_view response,
                                       Granularity granularity, Rng& rng) {
  if (granularity == Granularity::sentence) return segment_sentences(response);
  return segment_phrases(response, rng);
}

std::optional<std::string> corrupt_response(
    std::string_view response, CorruptionOp op, Rng& rng,
    std::span<const std::string> donor_pool) {
  std::vector<std::string> units = segment_units(response, op.granularity, rng);
  const size_t min_units =
      (op.kind == CorruptionKind::shuffle || op.kind == CorruptionKind::remove)
          ? 2
          : 1;
  if (units.size() < min_units) return std::nullopt;
  if (op.kind == CorruptionKind::add && donor_pool.empty())
    return std::nullopt;

  const std::string original = join_units(units);
  constexpr int kMaxAttempts = 10;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<std::string> work = units;
    switch (op.kind) {
      case CorruptionKind::shuffle:
        fisher_yates(work, rng);
        break;
      case CorruptionKind::repeat: {
        size_t u = rng.below(work.size());
        work.insert(work.begin() + u + 1, work[u]);
        break;
      }
      case CorruptionKind::remove: {
        size_t u = rng.below(work.size());
        work.erase(work.begin() + u);
        break;
      }
      case CorruptionKind::add: {
        const std::string& donor = donor_pool[rng.below(donor_pool.size())];
        std::vector<std::string> donor_units =
            segment_units(donor, op.granularity, rng);
        if (donor_units.empty()) continue;
        const std::string& unit = donor_units[rng.below(donor_units.size())];
        work.insert(work.begin() + rng.below(work.size() + 1), unit);
        break;
      }
    }
    std::string corrupted = join_units(work);
    if (corrupted != original && corrupted != response) return corrupted;
  }
  return std::nullopt;
}

std::optional<TaskInstance> make_edit_instance(
    const Dialogue& dialogue, const std::string& gold_response,
    CorruptionOp op, Rng& rng, std::span<const std::string> donor_pool) {
  auto corrupted = corrupt_response(gold_response, op, rng, donor_pool);
  if (!corrupted) return std::nullopt;
  TaskInstance inst;
  inst.task_name = "edit generation";
  inst.instance_id = inst.task_name + "::" + dialogue.source_dataset + "::" +
                     dialogue.dialogue_id;
  inst.context = dialogue;
  inst.custom_fields.emplace_back("RESPONSE", *corrupted);
  inst.gold_output = gold_response;
  inst.target_response = gold_response;
  inst.flags.insert("edit:" + std::string(to_string(op.kind)) + ":" +
                    std::string(to_string(op.granularity)));
  return inst;
}

std::optional<PretrainKind> pretrain_kind_for_task(std::string_view task_name) {
  if (task_name == "fill missing utterance") return PretrainKind::fill_missing;
  if (task_name == "find missing utterance")
    return PretrainKind::find_missing_index;
  if (task_name == "find incoherent utterance")
    return PretrainKind::find_incoherent;
  if (task_name == "find swapped utterance") return PretrainKind::find_swapped;
  return std::nullopt;
}

size_t pretrain_min_turns(PretrainKind kind) {
  return kind == PretrainKind::find_incoherent ? 2 : 3;
}

namespace {

std::string_view pretrain_task_name(PretrainKind kind) {
  switch (kind) {
    case PretrainKind::fill_missing: return "fill missing utterance";
    case PretrainKind::find_missing_index: return "find missing utterance";
    case PretrainKind::find_incoherent: return "find incoherent utterance";
    case PretrainKind::find_swapped: return "find swapped utterance";
  }
  return "fill missing utterance";
}

}  // namespace

std::vector<TaskInstance> make_pretrain_instances(
    const Dialogue& dialogue, PretrainKind kind, Rng& rng,
    std::span<const Dialogue> donors) {
  const size_t n = dialogue.turns.size();
  if (n < pretrain_min_turns(kind)) return {};

  TaskInstance inst;
  inst.task_name = std::string(pretrain_task_name(kind));
  inst.instance_id = inst.task_name + "::" + dialogue.source_dataset + "::" +
                     dialogue.dialogue_id;
  inst.context = dialogue;

  switch (kind) {
    case PretrainKind::fill_missing: {
      size_t u = rng.below(n);
      inst.gold_output = dialogue.turns[u].text;
      inst.context.turns[u].text = std::string(kMaskToken);
      break;
    }
    case PretrainKind::find_missing_index: {
      size_t u = rng.below(n);
      inst.gold_output = std::to_string(u + 1);
      inst.context.turns[u].text = std::string(kMaskToken);
      break;
    }
    case PretrainKind::find_incoherent: {
      std::vector<const Dialogue*> others;
      for (const Dialogue& d : donors)
        if (d.dialogue_id != dialogue.dialogue_id && !d.turns.empty())
          others.push_back(&d);
      if (others.empty()) return {};
      size_t u = rng.below(n);
      std::string replacement;
      for (int attempt = 0; attempt < 8; ++attempt) {
        const Dialogue& donor = *others[rng.below(others.size())];
        const std::string& text =
            donor.turns[rng.below(donor.turns.size())].text;
        if (text != dialogue.turns[u].text) {
          replacement = text;
          break;
        }
      }
      if (replacement.empty()) return {};
      inst.context.turns[u].text = replacement;
      inst.gold_output = std::to_string(u + 1);
      break;
    }
    case PretrainKind::find_swapped: {
      size_t i = 0, j = 0;
      bool found = false;
      for (int attempt = 0; attempt < 8 && !found; ++attempt) {
        i = rng.below(n);
        j = rng.below(n - 1);
        if (j >= i) ++j;
        found = dialogue.turns[i].text != dialogue.turns[j].text;
      }
      if (!found) return {};
      if (i > j) std::swap(i, j);
      std::swap(inst.context.turns[i].text, inst.context.turns[j].text);
      inst.gold_output =
          std::to_string(i + 1) + ", " + std::to_string(j + 1);
      break;
    }
  }
  return {std::move(inst)};
}

namespace {

std::vector<std::string> distinct_other_tasks(
    std::span<const std::string> pool_tasks, std::string_view exclude) {
  std::vector<std::string> names;
  names.reserve(pool_tasks.size());
  for (const std::string& t : pool_tasks)
    if (t != exclude) names.push_back(t);
  return names;
}

Dialogue dialogue_from_example(const FormattedExample& e) {
  Dialogue d;
  d.dialogue_id = e.provenance.dialogue_id;
  d.source_dataset = e.provenance.source_dataset;
  for (std::string& t : parse_context_turns(e.input_text))
    d.turns.push_back({"", std::move(t)});
  return d;
}

}  // namespace

std::optional<TaskInstance> make_selection_instance(
    const FormattedExample& source, std::span<const std::string> pool_tasks,
    const MetaConfig& cfg, const Registry& registry, Rng& rng) {
  const TaskSpec* src_spec = registry.find(source.task_name);
  if (!src_spec ||
      source.definition_id >= static_cast<int>(src_spec->definitions.size()))
    return std::nullopt;
  Dialogue d = dialogue_from_example(source);
  if (d.turns.empty()) return std::nullopt;

  const std::string& true_def = src_spec->definitions[source.definition_id];
  std::vector<std::string> others =
      distinct_other_tasks(pool_tasks, source.task_name);
  const size_t wanted = static_cast<size_t>(cfg.num_choices) - 1;
  if (others.size() < wanted) return std::nullopt;

  std::vector<std::string> options;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<std::string> candidates = others;
    fisher_yates(candidates, rng);
    options.clear();
    for (size_t i = 0; i < wanted; ++i) {
      const TaskSpec* other = registry.find(candidates[i]);
      if (!other) break;
      options.push_back(other->definitions[rng.below(other->definitions.size())]);
    }
    if (options.size() != wanted) return std::nullopt;
    std::set<std::string> uniq(options.begin(), options.end());
    uniq.insert(true_def);
    if (uniq.size() == options.size() + 1) break;
    options.clear();
  }
  if (options.size() != wanted) return std::nullopt;
  options.insert(options.begin() + rng.below(options.size() + 1), true_def);

  TaskInstance inst;
  inst.task_name = "instruction selection";
  inst.instance_id = source.provenance.instance_id + "#sel";
  inst.context = std::move(d);
  inst.custom_fields.emplace_back("RESPONSE", source.output_text);
  inst.class_options = std::move(options);
  inst.gold_output = true_def;
  return inst;
}

std::optional<TaskInstance> make_binary_instance(
    const FormattedExample& source, std::span<const std::string> pool_tasks,
    const Registry& registry, Rng& rng) {
  const TaskSpec* src_spec = registry.find(source.task_name);
  if (!src_spec ||
      source.definition_id >= static_cast<int>(src_spec->definitions.size()))
    return std::nullopt;
  Dialogue d = dialogue_from_example(source);
  if (d.turns.empty()) return std::nullopt;

  const std::string& true_def = src_spec->definitions[source.definition_id];
  const bool positive = rng.coin();
  std::string shown = true_def;
  if (!positive) {
    std::vector<std::string> others =
        distinct_other_tasks(pool_tasks, source.task_name);
    if (others.empty()) return std::nullopt;
    bool found = false;
    for (int attempt = 0; attempt < 8 && !found; ++attempt) {
      const TaskSpec* other = registry.find(others[rng.below(others.size())]);
      if (!other) continue;
      const std::string& def =
          other->definitions[rng.below(other->definitions.size())];
      if (def != true_def) {
        shown = def;
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }

  TaskInstance inst;
  inst.task_name = "instruction binary";
  inst.instance_id = source.provenance.instance_id + "#bin";
  inst.context = std::move(d);
  inst.custom_fields.emplace_back("INSTRUCTION", shown);
  inst.custom_fields.emplace_back("RESPONSE", source.output_text);
  inst.class_options = std::vector<std::string>{"yes", "no"};
  inst.gold_output = positive ? "yes" : "no";
  return inst;
}

std::vector<TaskInstance> make_meta_instances(
    std::span<const FormattedExample> pool, const MetaConfig& cfg,
    const Registry& registry, bool selection, Rng& rng) {
  std::set<std::string> tasks;
  for (const FormattedExample& e : pool) tasks.insert(e.task_name);
  const size_t needed = selection ? static_cast<size_t>(cfg.num_choices) : 2;
  if (tasks.size() < needed)
    throw std::runtime_error(
        "meta pool spans " + std::to_string(tasks.size()) +
        " distinct tasks, need at least " + std::to_string(needed));
  const std::vector<std::string> pool_tasks(tasks.begin(), tasks.end());

  std::vector<TaskInstance> out;
  for (const FormattedExample& e : pool) {
    auto inst =
        selection
            ? make_selection_instance(e, pool_tasks, cfg, registry, rng)
            : make_binary_instance(e, pool_tasks, registry, rng);
    if (inst) out.push_back(std::move(*inst));
  }
  return out;
}

}  // namespace dialcomp
