#include "dialcomp/ingest.hpp"

#include <stdexcept>

#include "dialcomp/text.hpp"
#include "nlohmann/json.hpp"

namespace dialcomp {

using json = nlohmann::ordered_json;

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "train";
}

std::optional<Split> split_from_string(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "validation") return Split::validation;
  if (s == "test") return Split::test;
  return std::nullopt;
}

RecordResult parse_interchange_line(const std::string& line, size_t line_no,
                                    const std::string& dataset_id) {
  auto fail = [&](std::string msg) {
    return RecordError{line_no, std::move(msg)};
  };

  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) return fail("not valid JSON");
  if (!j.is_object()) return fail("record is not a JSON object");

  InterchangeRecord rec;
  rec.dialogue.source_dataset = dataset_id;

  if (!j.contains("dialogue_id") || !j["dialogue_id"].is_string())
    return fail("missing string key 'dialogue_id'");
  rec.dialogue.dialogue_id = j["dialogue_id"].get<std::string>();
  if (rec.dialogue.dialogue_id.empty()) return fail("empty dialogue_id");

  if (!j.contains("turns") || !j["turns"].is_array())
    return fail("missing array key 'turns'");
  if (j["turns"].empty()) return fail("'turns' is empty");
  for (const json& t : j["turns"]) {
    if (!t.is_object() || !t.contains("text") || !t["text"].is_string())
      return fail("turn without string 'text'");
    Turn turn;
    if (t.contains("speaker") && t["speaker"].is_string())
      turn.speaker = t["speaker"].get<std::string>();
    turn.text = std::string(trim(t["text"].get<std::string>()));
    if (turn.text.empty()) return fail("turn with empty text");
    rec.dialogue.turns.push_back(std::move(turn));
  }

  if (j.contains("fields")) {
    if (!j["fields"].is_object()) return fail("'fields' is not an object");
    for (const auto& [key, value] : j["fields"].items()) {
      if (!value.is_string()) return fail("field '" + key + "' is not a string");
      rec.fields.emplace_back(key, value.get<std::string>());
    }
  }
  if (j.contains("class_options")) {
    if (!j["class_options"].is_array())
      return fail("'class_options' is not an array");
    std::vector<std::string> opts;
    for (const json& o : j["class_options"]) {
      if (!o.is_string()) return fail("class option is not a string");
      opts.push_back(o.get<std::string>());
    }
    rec.class_options = std::move(opts);
  }
  if (j.contains("gold")) {
    if (!j["gold"].is_string()) return fail("'gold' is not a string");
    rec.gold = j["gold"].get<std::string>();
  }
  if (j.contains("target_response")) {
    if (!j["target_response"].is_string())
      return fail("'target_response' is not a string");
    rec.target_response = j["target_response"].get<std::string>();
  }
  if (j.contains("metadata")) {
    if (!j["metadata"].is_object()) return fail("'metadata' is not an object");
    for (const auto& [key, value] : j["metadata"].items()) {
      if (!value.is_string())
        return fail("metadata '" + key + "' is not a string");
      rec.dialogue.metadata.emplace(key, value.get<std::string>());
    }
  }
  return rec;
}

CorpusStream::CorpusStream(const CorpusDescriptor& descriptor)
    : descriptor_(descriptor), in_(descriptor.path) {
  if (!in_)
    throw std::runtime_error("cannot open corpus file " +
                             descriptor.path.string());
}

std::optional<RecordResult> CorpusStream::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (trim(line).empty()) continue;
    return parse_interchange_line(line, line_no_, descriptor_.dataset_id);
  }
  return std::nullopt;
}

CountResult count_instances(const CorpusDescriptor& descriptor) {
  CorpusStream stream(descriptor);
  CountResult result;
  while (auto item = stream.next()) {
    if (std::holds_alternative<InterchangeRecord>(*item))
      ++result.records;
    else
      result.errors.push_back(std::get<RecordError>(*item));
  }
  return result;
}

}  // namespace dialcomp
