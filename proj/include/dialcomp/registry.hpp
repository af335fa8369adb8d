#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dialcomp/core.hpp"
#include "dialcomp/rng.hpp"

namespace dialcomp {

enum class OutputKind { free_text, class_label, index_label };

std::string_view to_string(OutputKind k);
std::optional<OutputKind> output_kind_from_string(std::string_view s);

struct FieldSpec {
  std::string label;
  // Empty token means the field is placeholder-only: it feeds {LABEL}
  // template slots and is not rendered as a "[TOKEN] value" segment.
  std::string token;
};

struct TaskSpec {
  std::string name;
  TaskCategory category = TaskCategory::generation;
  OutputKind output_kind = OutputKind::free_text;
  std::vector<FieldSpec> required_fields;
  OptionStyle option_style_default = OptionStyle::none;
  // Free text placed between the dialogue and the option list, e.g.
  // "The possible intents are:".
  std::string options_leadin;
  std::vector<std::string> definitions;  // 3-10 entries
  std::vector<std::string> prompts;      // 3-10 entries
  // Metric profile consumed by the `score` subcommand.
  std::vector<std::string> metrics;

  const FieldSpec* find_field(std::string_view label) const;
  std::vector<std::string> field_tokens() const;
};

class Registry {
 public:
  void add(TaskSpec spec);  // throws on duplicate name or invariant violation
  const TaskSpec* find(std::string_view name) const;
  std::vector<std::string> task_names() const;
  size_t size() const { return specs_.size(); }

 private:
  std::map<std::string, TaskSpec, std::less<>> specs_;
};

// Validates one spec against the schema invariants; returns violations.
std::vector<std::string> validate_spec(const TaskSpec& spec);

// Loads a JSON task-config file. Throws std::runtime_error naming the
// offending task on any invariant violation or duplicate.
Registry load_registry(const std::filesystem::path& config_path);

// Parses registry JSON from a string (same schema as load_registry).
Registry parse_registry(const std::string& json_text, const std::string& origin);

// The shipped task set: covers every category plus all tasks required by
// the evaluation protocols.
Registry builtin_registry();

struct TemplateIds {
  int definition_id = 0;
  int prompt_id = 0;
};

// Independent uniform draws over the spec's definition and prompt pools.
TemplateIds sample_template(const TaskSpec& spec, Rng& rng);

}  // namespace dialcomp
