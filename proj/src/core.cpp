#include "dialcomp/core.hpp"

#include <algorithm>

#include "dialcomp/registry.hpp"
#include "dialcomp/text.hpp"

namespace dialcomp {

std::string_view to_string(TaskCategory c) {
  switch (c) {
    case TaskCategory::classification: return "classification";
    case TaskCategory::generation: return "generation";
    case TaskCategory::evaluation: return "evaluation";
    case TaskCategory::edit: return "edit";
    case TaskCategory::pretraining: return "pretraining";
    case TaskCategory::safety: return "safety";
    case TaskCategory::miscellaneous: return "miscellaneous";
    case TaskCategory::meta: return "meta";
  }
  return "generation";
}

std::optional<TaskCategory> category_from_string(std::string_view s) {
  static const std::pair<std::string_view, TaskCategory> table[] = {
      {"classification", TaskCategory::classification},
      {"generation", TaskCategory::generation},
      {"evaluation", TaskCategory::evaluation},
      {"edit", TaskCategory::edit},
      {"pretraining", TaskCategory::pretraining},
      {"safety", TaskCategory::safety},
      {"miscellaneous", TaskCategory::miscellaneous},
      {"meta", TaskCategory::meta},
  };
  for (const auto& [name, cat] : table)
    if (name == s) return cat;
  return std::nullopt;
}

std::string_view to_string(OptionStyle s) {
  switch (s) {
    case OptionStyle::none: return "none";
    case OptionStyle::name_list: return "name-list";
    case OptionStyle::indexed_list: return "indexed-list";
  }
  return "none";
}

std::optional<OptionStyle> option_style_from_string(std::string_view s) {
  if (s == "none") return OptionStyle::none;
  if (s == "name-list") return OptionStyle::name_list;
  if (s == "indexed-list") return OptionStyle::indexed_list;
  return std::nullopt;
}

std::optional<std::string> TaskInstance::field_value(std::string_view label) const {
  for (const auto& [k, v] : custom_fields)
    if (k == label) return v;
  return std::nullopt;
}

std::optional<std::string> find_reserved_token(
    std::string_view text, const std::vector<std::string>& extra_tokens) {
  for (std::string_view tok : kCoreTokens)
    if (text.find(tok) != std::string_view::npos) return std::string(tok);
  for (const std::string& tok : extra_tokens)
    if (!tok.empty() && text.find(tok) != std::string_view::npos) return tok;
  return std::nullopt;
}

std::vector<std::string> validate_instance(const TaskInstance& instance,
                                           const TaskSpec& spec) {
  std::vector<std::string> violations;
  const std::vector<std::string> field_tokens = spec.field_tokens();

  if (instance.task_name != spec.name)
    violations.push_back("task name '" + instance.task_name +
                         "' does not match spec '" + spec.name + "'");
  if (instance.instance_id.empty()) violations.push_back("empty instance_id");

  if (instance.context.turns.empty()) {
    violations.push_back("dialogue has no turns");
  } else {
    for (size_t i = 0; i < instance.context.turns.size(); ++i) {
      const std::string& text = instance.context.turns[i].text;
      if (trim(text).empty()) {
        violations.push_back("turn " + std::to_string(i + 1) + " is empty");
        continue;
      }
      // A turn that is exactly the mask token is the masked slot of a
      // pretraining instance, not a leak.
      if (spec.category == TaskCategory::pretraining && text == kMaskToken)
        continue;
      if (auto tok = find_reserved_token(text, field_tokens))
        violations.push_back("reserved token " + *tok + " in turn " +
                             std::to_string(i + 1) + " text");
    }
  }

  // Declared fields are required; undeclared fields are rejected.
  for (const FieldSpec& f : spec.required_fields) {
    if (!instance.field_value(f.label))
      violations.push_back("missing required field " + f.label);
  }
  for (const auto& [label, value] : instance.custom_fields) {
    if (!spec.find_field(label)) {
      violations.push_back("field " + label + " not declared by task spec");
      continue;
    }
    if (auto tok = find_reserved_token(value, field_tokens))
      violations.push_back("reserved token " + *tok + " in field " + label);
  }

  if (instance.gold_output.empty()) {
    violations.push_back("empty gold output");
  } else if (auto tok = find_reserved_token(instance.gold_output, field_tokens)) {
    violations.push_back("reserved token " + *tok + " in gold output");
  }

  if (spec.output_kind != OutputKind::free_text && !instance.class_options)
    violations.push_back("task requires class options but none present");

  if (instance.class_options) {
    const auto& opts = *instance.class_options;
    if (opts.empty()) violations.push_back("empty option list");
    for (size_t i = 0; i < opts.size(); ++i) {
      if (trim(opts[i]).empty())
        violations.push_back("option " + std::to_string(i + 1) + " is empty");
      if (auto tok = find_reserved_token(opts[i], field_tokens))
        violations.push_back("reserved token " + *tok + " in option " +
                             std::to_string(i + 1));
      for (size_t j = i + 1; j < opts.size(); ++j)
        if (opts[i] == opts[j])
          violations.push_back("duplicate option '" + opts[i] + "'");
    }
    if (!opts.empty() &&
        std::find(opts.begin(), opts.end(), instance.gold_output) == opts.end())
      violations.push_back("gold not among options");
  }

  return violations;
}

}  // namespace dialcomp
