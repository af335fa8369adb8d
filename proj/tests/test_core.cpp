#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dialcomp/core.hpp"
#include "dialcomp/registry.hpp"
#include "helpers.hpp"

using namespace dialcomp;

namespace {

TaskInstance intent_instance() {
  TaskInstance inst;
  inst.instance_id = "intent classification::test::d1";
  inst.task_name = "intent classification";
  inst.context = testutil::make_dialogue("d1", {"How may I help you?",
                                                "Book me a table for two."});
  inst.class_options = std::vector<std::string>{"BookRestaurant", "ShareETA"};
  inst.gold_output = "BookRestaurant";
  return inst;
}

const TaskSpec& intent_spec() {
  static Registry registry = builtin_registry();
  return *registry.find("intent classification");
}

}  // namespace

TEST_CASE("well-formed instance validates") {
  CHECK(validate_instance(intent_instance(), intent_spec()).empty());
}

TEST_CASE("reserved token in turn text is a violation") {
  TaskInstance inst = intent_instance();
  inst.context.turns[1].text = "please [CONTEXT] this";
  auto violations = validate_instance(inst, intent_spec());
  REQUIRE(!violations.empty());
  CHECK(violations.front().find("reserved token") != std::string::npos);
}

TEST_CASE("gold outside the options is a violation") {
  TaskInstance inst = intent_instance();
  inst.gold_output = "foo";
  inst.class_options = std::vector<std::string>{"a", "b"};
  auto violations = validate_instance(inst, intent_spec());
  bool found = false;
  for (const auto& v : violations)
    if (v.find("gold not among options") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("missing required field and undeclared field are violations") {
  Registry registry = builtin_registry();
  const TaskSpec& spec = *registry.find("begins with generation");

  TaskInstance inst;
  inst.instance_id = "begins with generation::test::d1";
  inst.task_name = "begins with generation";
  inst.context = testutil::make_dialogue("d1", {"Hello."});
  inst.gold_output = "Please describe it.";

  auto violations = validate_instance(inst, spec);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("missing required field INITIAL PHRASE") !=
        std::string::npos);

  inst.custom_fields.emplace_back("INITIAL PHRASE", "Please");
  inst.custom_fields.emplace_back("BOGUS", "x");
  violations = validate_instance(inst, spec);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("not declared") != std::string::npos);
}

TEST_CASE("empty gold, empty turns, duplicate options are violations") {
  TaskInstance inst = intent_instance();
  inst.gold_output = "";
  CHECK(!validate_instance(inst, intent_spec()).empty());

  inst = intent_instance();
  inst.context.turns.clear();
  CHECK(!validate_instance(inst, intent_spec()).empty());

  inst = intent_instance();
  inst.class_options = std::vector<std::string>{"BookRestaurant",
                                                "BookRestaurant"};
  bool found = false;
  for (const auto& v : validate_instance(inst, intent_spec()))
    if (v.find("duplicate option") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("mask turn is sanctioned for pretraining tasks only") {
  Registry registry = builtin_registry();
  const TaskSpec& pretrain = *registry.find("fill missing utterance");

  TaskInstance inst;
  inst.instance_id = "fill missing utterance::test::d1";
  inst.task_name = "fill missing utterance";
  inst.context = testutil::make_dialogue("d1", {"Hi.", "[MASK]", "Bye."});
  inst.gold_output = "How are you?";
  CHECK(validate_instance(inst, pretrain).empty());

  TaskInstance bad = intent_instance();
  bad.context.turns[0].text = "[MASK]";
  CHECK(!validate_instance(bad, intent_spec()).empty());
}

TEST_CASE("validation is pure: same input gives the same violations") {
  TaskInstance inst = intent_instance();
  inst.gold_output = "nope";
  auto first = validate_instance(inst, intent_spec());
  auto second = validate_instance(inst, intent_spec());
  CHECK(first == second);
}

TEST_CASE("category and option style round-trip their names") {
  for (TaskCategory c :
       {TaskCategory::classification, TaskCategory::generation,
        TaskCategory::evaluation, TaskCategory::edit,
        TaskCategory::pretraining, TaskCategory::safety,
        TaskCategory::miscellaneous, TaskCategory::meta})
    CHECK(category_from_string(to_string(c)) == c);
  for (OptionStyle s :
       {OptionStyle::none, OptionStyle::name_list, OptionStyle::indexed_list})
    CHECK(option_style_from_string(to_string(s)) == s);
  CHECK(!category_from_string("bogus"));
}

TEST_CASE("find_reserved_token sees core and extra tokens") {
  CHECK(find_reserved_token("plain text") == std::nullopt);
  CHECK(*find_reserved_token("a [ENDOFTURN] b") == "[ENDOFTURN]");
  CHECK(*find_reserved_token("angry [EMOTION] here", {"[EMOTION]"}) ==
        "[EMOTION]");
}
