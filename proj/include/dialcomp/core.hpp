#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dialcomp {

// Reserved structural tokens. Payload text (turns, field values, gold
// outputs) must never contain them; there is no escaping mechanism.
inline constexpr std::string_view kContextToken = "[CONTEXT]";
inline constexpr std::string_view kEndOfTurnToken = "[ENDOFTURN]";
inline constexpr std::string_view kEndOfDialogueToken = "[ENDOFDIALOGUE]";
inline constexpr std::string_view kQuestionToken = "[QUESTION]";
inline constexpr std::string_view kOptionsToken = "[OPTIONS]";
inline constexpr std::string_view kMaskToken = "[MASK]";

inline constexpr std::array<std::string_view, 6> kCoreTokens = {
    kContextToken,    kEndOfTurnToken, kEndOfDialogueToken,
    kQuestionToken,   kOptionsToken,   kMaskToken,
};

enum class TaskCategory {
  classification,
  generation,
  evaluation,
  edit,
  pretraining,
  safety,
  miscellaneous,
  meta,
};

std::string_view to_string(TaskCategory c);
std::optional<TaskCategory> category_from_string(std::string_view s);

struct Turn {
  std::string speaker;
  std::string text;
};

struct Dialogue {
  std::string dialogue_id;
  std::vector<Turn> turns;
  std::string source_dataset;
  std::map<std::string, std::string> metadata;
};

// Marker flags carried from augmentation through to the serialized corpus.
inline constexpr std::string_view kFlagNotaCorrect = "nota_correct";
inline constexpr std::string_view kFlagNotaDistractor = "nota_distractor";
inline constexpr std::string_view kFlagTruncated = "truncated";

struct TaskInstance {
  std::string instance_id;
  std::string task_name;
  Dialogue context;
  // Ordered (label, value) pairs; rendering order comes from the TaskSpec
  // declaration order, not from this container.
  std::vector<std::pair<std::string, std::string>> custom_fields;
  std::optional<std::vector<std::string>> class_options;
  std::string gold_output;
  std::optional<std::string> target_response;
  std::set<std::string> flags;

  bool has_flag(std::string_view f) const { return flags.count(std::string(f)) != 0; }
  std::optional<std::string> field_value(std::string_view label) const;
};

enum class OptionStyle { none, name_list, indexed_list };

std::string_view to_string(OptionStyle s);
std::optional<OptionStyle> option_style_from_string(std::string_view s);

struct Provenance {
  std::string source_dataset;
  std::string dialogue_id;
  std::string instance_id;
};

struct FormattedExample {
  std::string input_text;
  std::string output_text;
  std::string task_name;
  TaskCategory category = TaskCategory::generation;
  int definition_id = 0;
  int prompt_id = 0;
  OptionStyle option_style = OptionStyle::none;
  Provenance provenance;
  uint64_t seed = 0;
  std::set<std::string> flags;
};

struct TaskSpec;  // registry.hpp

// Returns every violation (missing required fields, gold not among options,
// reserved-token leakage, ...); an empty list means the instance is valid.
// Pure: same inputs always produce the same list.
std::vector<std::string> validate_instance(const TaskInstance& instance,
                                           const TaskSpec& spec);

// First reserved token occurring in `text`, if any. `extra_tokens` extends
// the core token set with registry-declared field tokens. A turn consisting
// of exactly "[MASK]" is sanctioned for pretraining tasks; callers handle
// that exemption.
std::optional<std::string> find_reserved_token(
    std::string_view text, const std::vector<std::string>& extra_tokens = {});

}  // namespace dialcomp
