#include "dialcomp/registry.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dialcomp/text.hpp"
#include "nlohmann/json.hpp"

namespace dialcomp {

using json = nlohmann::json;

std::string_view to_string(OutputKind k) {
  switch (k) {
    case OutputKind::free_text: return "free-text";
    case OutputKind::class_label: return "class-label";
    case OutputKind::index_label: return "index-label";
  }
  return "free-text";
}

std::optional<OutputKind> output_kind_from_string(std::string_view s) {
  if (s == "free-text") return OutputKind::free_text;
  if (s == "class-label") return OutputKind::class_label;
  if (s == "index-label") return OutputKind::index_label;
  return std::nullopt;
}

const FieldSpec* TaskSpec::find_field(std::string_view label) const {
  for (const FieldSpec& f : required_fields)
    if (f.label == label) return &f;
  return nullptr;
}

std::vector<std::string> TaskSpec::field_tokens() const {
  std::vector<std::string> out;
  for (const FieldSpec& f : required_fields)
    if (!f.token.empty()) out.push_back(f.token);
  return out;
}

namespace {

const std::set<std::string_view> kKnownMetrics = {
    "accuracy",          "bleu2",    "rouge_l",
    "knowledge_f1",      "spearman", "begins_with_accuracy",
};

}  // namespace

std::vector<std::string> validate_spec(const TaskSpec& spec) {
  std::vector<std::string> violations;
  if (spec.name.empty()) violations.push_back("empty task name");
  if (spec.definitions.size() < 3 || spec.definitions.size() > 10)
    violations.push_back("definitions out of 3-10 range (" +
                         std::to_string(spec.definitions.size()) + ")");
  if (spec.prompts.size() < 3 || spec.prompts.size() > 10)
    violations.push_back("prompts out of 3-10 range (" +
                         std::to_string(spec.prompts.size()) + ")");
  for (const std::string& d : spec.definitions)
    if (trim(d).empty()) violations.push_back("blank definition");
  for (const std::string& p : spec.prompts)
    if (trim(p).empty()) violations.push_back("blank prompt");

  if (spec.output_kind != OutputKind::free_text &&
      spec.option_style_default == OptionStyle::none)
    violations.push_back(
        "output kind requires an option style other than 'none'");

  std::set<std::string> labels;
  for (const FieldSpec& f : spec.required_fields) {
    if (f.label.empty()) violations.push_back("field with empty label");
    if (!labels.insert(f.label).second)
      violations.push_back("duplicate field label " + f.label);
    if (!f.token.empty() &&
        (f.token.front() != '[' || f.token.back() != ']'))
      violations.push_back("field token " + f.token +
                           " must be bracketed like [LABEL]");
  }

  // Placeholder closure: every {SLOT} in any template is a declared label.
  auto check_placeholders = [&](const std::string& tmpl, const char* where) {
    for (const std::string& name : placeholder_names(tmpl))
      if (!labels.count(name))
        violations.push_back("placeholder {" + name + "} in " + where +
                             " is not a declared field");
  };
  for (const std::string& d : spec.definitions) check_placeholders(d, "definition");
  for (const std::string& p : spec.prompts) check_placeholders(p, "prompt");

  for (const std::string& m : spec.metrics)
    if (!kKnownMetrics.count(m)) violations.push_back("unknown metric " + m);

  return violations;
}

void Registry::add(TaskSpec spec) {
  auto violations = validate_spec(spec);
  if (!violations.empty()) {
    std::string msg = "task '" + spec.name + "': " + violations.front();
    for (size_t i = 1; i < violations.size(); ++i) msg += "; " + violations[i];
    throw std::runtime_error(msg);
  }
  auto [it, inserted] = specs_.emplace(spec.name, std::move(spec));
  if (!inserted)
    throw std::runtime_error("duplicate task name '" + it->first + "'");
}

const TaskSpec* Registry::find(std::string_view name) const {
  auto it = specs_.find(name);
  return it == specs_.end() ? nullptr : &it->second;
}

std::vector<std::string> Registry::task_names() const {
  std::vector<std::string> out;
  out.reserve(specs_.size());
  for (const auto& [name, spec] : specs_) out.push_back(name);
  return out;
}

namespace {

TaskSpec spec_from_json(const json& j, const std::string& origin) {
  TaskSpec spec;
  auto require_string = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string())
      throw std::runtime_error(origin + ": task entry missing string key '" +
                               key + "'");
    return j[key].get<std::string>();
  };
  spec.name = require_string("name");

  auto cat = category_from_string(require_string("category"));
  if (!cat)
    throw std::runtime_error(origin + ": task '" + spec.name +
                             "' has unknown category");
  spec.category = *cat;

  auto kind = output_kind_from_string(require_string("output_kind"));
  if (!kind)
    throw std::runtime_error(origin + ": task '" + spec.name +
                             "' has unknown output_kind");
  spec.output_kind = *kind;

  if (j.contains("option_style")) {
    auto style = option_style_from_string(j["option_style"].get<std::string>());
    if (!style)
      throw std::runtime_error(origin + ": task '" + spec.name +
                               "' has unknown option_style");
    spec.option_style_default = *style;
  }
  if (j.contains("options_leadin"))
    spec.options_leadin = j["options_leadin"].get<std::string>();

  if (j.contains("fields")) {
    for (const json& f : j["fields"]) {
      FieldSpec fs;
      fs.label = f.at("label").get<std::string>();
      if (f.contains("token")) fs.token = f["token"].get<std::string>();
      spec.required_fields.push_back(std::move(fs));
    }
  }
  if (j.contains("definitions"))
    spec.definitions = j["definitions"].get<std::vector<std::string>>();
  if (j.contains("prompts"))
    spec.prompts = j["prompts"].get<std::vector<std::string>>();
  if (j.contains("metrics"))
    spec.metrics = j["metrics"].get<std::vector<std::string>>();
  return spec;
}

}  // namespace

Registry parse_registry(const std::string& json_text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  if (!doc.contains("tasks") || !doc["tasks"].is_array())
    throw std::runtime_error(origin + ": missing 'tasks' array");

  Registry registry;
  for (const json& entry : doc["tasks"])
    registry.add(spec_from_json(entry, origin));
  return registry;
}

Registry load_registry(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in)
    throw std::runtime_error("cannot open registry config " +
                             config_path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_registry(buf.str(), config_path.string());
}

TemplateIds sample_template(const TaskSpec& spec, Rng& rng) {
  TemplateIds ids;
  ids.definition_id = static_cast<int>(rng.below(spec.definitions.size()));
  ids.prompt_id = static_cast<int>(rng.below(spec.prompts.size()));
  return ids;
}

}  // namespace dialcomp
