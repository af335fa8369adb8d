#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "dialcomp/registry.hpp"
#include "helpers.hpp"
#include "nlohmann/json.hpp"

using namespace dialcomp;
using ojson = nlohmann::ordered_json;

namespace {

ojson task_json(const std::string& name, int n_defs, int n_prompts) {
  ojson t;
  t["name"] = name;
  t["category"] = "generation";
  t["output_kind"] = "free-text";
  t["definitions"] = ojson::array();
  t["prompts"] = ojson::array();
  for (int i = 0; i < n_defs; ++i)
    t["definitions"].push_back("Definition " + std::to_string(i) + ".");
  for (int i = 0; i < n_prompts; ++i)
    t["prompts"].push_back("Prompt " + std::to_string(i));
  return t;
}

Registry parse_tasks(const std::vector<ojson>& tasks) {
  ojson doc;
  doc["tasks"] = tasks;
  return parse_registry(doc.dump(), "test");
}

}  // namespace

TEST_CASE("valid config loads") {
  Registry r = parse_tasks({task_json("t1", 4, 3)});
  CHECK(r.size() == 1);
  CHECK(r.find("t1") != nullptr);
  CHECK(r.find("t1")->definitions.size() == 4);
}

TEST_CASE("too few definitions is fatal and names the task") {
  try {
    parse_tasks({task_json("sparse", 2, 3)});
    FAIL("expected throw");
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    CHECK(msg.find("sparse") != std::string::npos);
    CHECK(msg.find("3-10") != std::string::npos);
  }
}

TEST_CASE("too many prompts is fatal") {
  CHECK_THROWS(parse_tasks({task_json("dense", 3, 11)}));
}

TEST_CASE("duplicate task names are fatal") {
  CHECK_THROWS(parse_tasks({task_json("dup", 3, 3), task_json("dup", 4, 4)}));
}

TEST_CASE("class-label output kind requires an option style") {
  ojson t = task_json("cls", 3, 3);
  t["category"] = "classification";
  t["output_kind"] = "class-label";
  CHECK_THROWS(parse_tasks({t}));
  t["option_style"] = "name-list";
  CHECK(parse_tasks({t}).size() == 1);
}

TEST_CASE("placeholders must be declared field labels") {
  ojson t = task_json("ph", 3, 3);
  t["prompts"][1] = "What is the value of {SLOT}?";
  CHECK_THROWS(parse_tasks({t}));
  t["fields"] = ojson::array({{{"label", "SLOT"}}});
  CHECK(parse_tasks({t}).size() == 1);
}

TEST_CASE("sample_template on a degenerate single-template spec is (0,0)") {
  TaskSpec spec;
  spec.name = "degenerate";
  spec.definitions = {"only"};
  spec.prompts = {"only"};
  Rng rng(123);
  for (int i = 0; i < 10; ++i) {
    TemplateIds ids = sample_template(spec, rng);
    CHECK(ids.definition_id == 0);
    CHECK(ids.prompt_id == 0);
  }
}

TEST_CASE("sample_template draws are uniform over the pools") {
  TaskSpec spec;
  spec.name = "uniform";
  spec.definitions = {"a", "b", "c", "d"};
  spec.prompts = {"p", "q", "r"};
  Rng rng(2024);
  std::map<int, int> def_counts;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++def_counts[sample_template(spec, rng).definition_id];
  for (const auto& [id, count] : def_counts) {
    double freq = static_cast<double>(count) / draws;
    CHECK(freq >= 0.20);
    CHECK(freq <= 0.30);
  }
}

TEST_CASE("same rng state gives the same template pair") {
  TaskSpec spec;
  spec.name = "det";
  spec.definitions = {"a", "b", "c", "d", "e"};
  spec.prompts = {"p", "q", "r", "s"};
  Rng r1(99), r2(99);
  for (int i = 0; i < 20; ++i) {
    TemplateIds a = sample_template(spec, r1);
    TemplateIds b = sample_template(spec, r2);
    CHECK(a.definition_id == b.definition_id);
    CHECK(a.prompt_id == b.prompt_id);
  }
}

TEST_CASE("builtin registry passes validation and spans every category") {
  Registry r = builtin_registry();
  std::set<TaskCategory> categories;
  for (const std::string& name : r.task_names()) {
    const TaskSpec* spec = r.find(name);
    REQUIRE(spec != nullptr);
    CHECK(validate_spec(*spec).empty());
    categories.insert(spec->category);
  }
  CHECK(categories.size() == 8);
}

TEST_CASE("builtin registry ships the protocol-required tasks") {
  Registry r = builtin_registry();
  const TaskSpec* intent = r.find("intent classification");
  REQUIRE(intent != nullptr);
  CHECK(intent->output_kind == OutputKind::class_label);

  const TaskSpec* begins = r.find("begins with generation");
  REQUIRE(begins != nullptr);
  REQUIRE(begins->required_fields.size() == 1);
  CHECK(begins->required_fields[0].label == "INITIAL PHRASE");
  CHECK(begins->required_fields[0].token == "[INITIAL PHRASE]");

  for (const char* name :
       {"relation classification", "answer selection", "eval selection",
        "eval relevance", "knowledge grounded generation",
        "ends with generation", "keyword controlled generation",
        "emotion grounded generation", "slot value generation",
        "dialogue state generation", "summarization", "edit generation",
        "fill missing utterance", "find missing utterance",
        "find incoherent utterance", "find swapped utterance",
        "toxicity classification", "instruction selection",
        "instruction binary", "dialfact classification"})
    CHECK(r.find(name) != nullptr);

  CHECK(r.find("no such task") == nullptr);
}

TEST_CASE("load_registry reads a config file from disk") {
  testutil::TempDir dir("registry_file");
  ojson doc;
  doc["tasks"] = {task_json("file task", 3, 3)};
  testutil::write_file(dir.file("tasks.json"), doc.dump());
  Registry r = load_registry(dir.file("tasks.json"));
  CHECK(r.find("file task") != nullptr);
  CHECK_THROWS(load_registry(dir.file("missing.json")));
}
